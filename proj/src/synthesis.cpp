#include <hypolab/synthesis.hpp>

#include <hypolab/parallel.hpp>
#include <hypolab/superlog.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace hypolab::synthesis {

ProfileCache::ProfileCache(elliptic::Coefficients L, coeff::Field g, double r, double c, std::size_t n_x)
    : L_(std::move(L)), g_(std::move(g)), r_(r), c_(c), n_x_(n_x) {
  if (!(r > 0.0)) throw PreconditionError("profile radius must be positive");
  if (n_x < 3 || n_x % 2 == 0) throw PreconditionError("profile grid must be odd and >= 3");
  digest_ = L_.digest() + "|" + g_.source();
}

std::shared_ptr<const elliptic::ProfileSolution> ProfileCache::get(double lambda) {
  const Key key{std::bit_cast<std::uint64_t>(lambda), n_x_, std::bit_cast<std::uint64_t>(r_),
                std::bit_cast<std::uint64_t>(c_), digest_};
  {
    std::lock_guard lock(mutex_);
    if (auto it = store_.find(key); it != store_.end()) return it->second;
  }
  auto fresh = std::make_shared<const elliptic::ProfileSolution>(elliptic::solve_profile(L_, g_, lambda, r_, c_, n_x_));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = store_.emplace(key, std::move(fresh));
  if (inserted) ++misses_;
  return it->second;
}

std::size_t ProfileCache::size() const {
  std::lock_guard lock(mutex_);
  return store_.size();
}

std::size_t ProfileCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

Radius choose_radius(const elliptic::Coefficients& L, const coeff::Field& g, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const auto bp = elliptic::barrier_params(elliptic::measure_norms(L, g, 1), 1.0);
  Radius out;
  out.eps = eps;
  out.c0 = bp.c0;
  out.r0 = bp.r0;
  out.r = bp.c0 > 0.0 ? std::min(eps / (8.0 * bp.c0), bp.r0) : bp.r0;
  return out;
}

SynthesizedSolution synthesize(const spectral::SpectralSurrogate& S, ProfileCache& profiles, std::span<const double> u,
                               double eps, double p, std::vector<double> y) {
  if (u.size() != S.size()) throw PreconditionError("vector size does not match the surrogate");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("elliptic profiles have order 1; p must lie in (0, 1]");
  if (!y.empty() && y.size() != S.size()) throw PreconditionError("y grid does not match the surrogate");
  if (y.empty()) {
    y.resize(S.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i);
  }
  const std::size_t K = S.size();
  std::vector<std::shared_ptr<const elliptic::ProfileSolution>> prof(K);
  parallel_for(K, [&](std::size_t k) { prof[k] = profiles.get(S.eigenvalue(k)); });
  for (std::size_t k = 0; k < K; ++k) {
    if (!prof[k]) throw PreconditionError("missing profile for lambda = " + std::to_string(S.eigenvalue(k)));
  }

  SynthesizedSolution sol;
  sol.x = prof[0]->x;
  sol.y = std::move(y);
  sol.u.assign(u.begin(), u.end());
  sol.eps = eps;
  sol.p = p;
  sol.r = prof[0]->r;
  sol.c = prof[0]->c;
  const std::vector<double> coef = S.coefficients(u);
  sol.modes.resize(K);
  parallel_for(K, [&](std::size_t k) {
    const auto& ps = *prof[k];
    ModeRecord& m = sol.modes[k];
    m.lambda = ps.lambda;
    m.coefficient = coef[k];
    m.residual = elliptic::relative_residual(profiles.coefficients(), profiles.weight(), ps);
    for (const double v : ps.v) m.v_max = std::max(m.v_max, std::abs(v));
  });
  for (std::size_t k = 0; k < K; ++k) {
    const auto& ps = *prof[k];
    if (ps.n != sol.x.size() || ps.r != sol.r || ps.c != sol.c) {
      throw PreconditionError("profiles must share one grid, radius and constant");
    }
    sol.max_residual = std::max(sol.max_residual, sol.modes[k].residual);
  }

  const std::size_t nx = sol.x.size();
  sol.w.assign(nx * K, 0.0);
  parallel_for(nx, [&](std::size_t ix) {
    std::vector<double> c(K);
    for (std::size_t k = 0; k < K; ++k) c[k] = prof[k]->v[ix] * coef[k];
    const std::vector<double> row = S.combine(c);
    std::copy(row.begin(), row.end(), sol.w.begin() + static_cast<std::ptrdiff_t>(ix * K));
  });
  const std::size_t mid = (nx - 1) / 2;
  for (std::size_t i = 0; i < K; ++i) sol.trace_error = std::max(sol.trace_error, std::abs(sol.w[mid * K + i] - u[i]));
  return sol;
}

WEstimate w_estimate(const SynthesizedSolution& sol) {
  WEstimate e;
  const std::size_t nx = sol.x.size();
  const double h = sol.x[1] - sol.x[0];
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double weight = (ix == 0 || ix + 1 == nx) ? 0.5 * h : h;
    const auto row = sol.row(ix);
    e.lhs += weight * spectral::dot(row, row);
  }
  const double box = 2.0 * sol.r;
  const double C2 = sol.profile_constant * sol.profile_constant;
  const double q = 1.0 / (2.0 * sol.p);
  for (const auto& m : sol.modes) {
    const double c2 = m.coefficient * m.coefficient;
    e.rhs += std::exp(0.25 * sol.eps * std::pow(m.lambda, q)) * c2;
    e.exp_norm_sq += std::exp(2.0 * sol.eps * std::pow(m.lambda, q)) * c2;
  }
  e.rhs *= C2 * box;
  e.rhs_exp_norm = C2 * box * e.exp_norm_sq;
  e.holds = e.lhs <= e.rhs * (1.0 + 1e-12) && e.lhs <= e.rhs_exp_norm * (1.0 + 1e-12);
  return e;
}

ProjectionBound projection_exp_bound(const spectral::SpectralSurrogate& S, int j, double eps, double p,
                                     std::span<const double> u) {
  if (!(eps > 0.0) || !(p > 0.0)) throw PreconditionError("eps and p must be positive");
  if (j < 0) throw PreconditionError("band index must be >= 0");
  if (u.size() != S.size()) throw PreconditionError("vector size does not match the surrogate");
  ProjectionBound b;
  b.j = j;
  b.eps = eps;
  b.p = p;
  const std::vector<double> c = S.coefficients(u);
  const double q = 1.0 / (2.0 * p);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double lambda = S.eigenvalue(k);
    const double pk = spectral::band(j, lambda) * c[k];
    b.proj_norm_sq += pk * pk;
    b.lhs += std::exp(2.0 * eps * std::pow(lambda, q)) * pk * pk;
  }
  const double top = std::exp(static_cast<double>(j + 1) * q);
  b.rhs = 2.0 * std::exp(2.0 * eps * top) * b.proj_norm_sq;
  b.literal_rhs = 6.0 * std::exp(eps * top) * b.proj_norm_sq;
  b.slack = b.rhs - b.lhs;
  b.holds = b.slack >= 0.0;
  b.literal_holds = b.literal_rhs >= b.lhs;
  return b;
}

Threshold low_frequency_threshold(double xi, double eps, double p) {
  if (!(eps > 0.0) || !(p > 0.0)) throw PreconditionError("eps and p must be positive");
  Threshold t;
  t.xi = xi;
  t.bracket = superlog::japanese_bracket(xi);
  const double L = std::log(t.bracket);
  t.lambda_star = std::pow(L, 2.0 * p);
  t.lhs = std::exp(eps * std::pow(t.lambda_star, 1.0 / (2.0 * p)));
  t.rhs = std::pow(t.bracket, eps);
  t.identity = std::abs(t.lhs - t.rhs) <= 1e-12 * t.rhs;
  return t;
}

}  // namespace hypolab::synthesis
