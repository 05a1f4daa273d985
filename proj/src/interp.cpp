#include <hypolab/interp.hpp>

#include <hypolab/error.hpp>
#include <hypolab/superlog.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hypolab::interp {

namespace {

constexpr double identity_tol = 1e-12;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

SplitPoint split_point(double xi, double eps, double p, double s2) {
  if (!(eps > 0.0) || !(p > 0.0) || !(s2 > 0.0)) throw PreconditionError("eps, p and s2 must be positive");
  SplitPoint sp;
  sp.xi = xi;
  sp.eps = eps;
  sp.p = p;
  sp.s2 = s2;
  sp.log_bracket = std::log(superlog::japanese_bracket(xi));
  sp.positive = s2 * sp.log_bracket > 2.0 * eps;
  if (!sp.positive) {
    sp.identities_hold = true;
    return sp;
  }
  sp.R = 2.0 * p * (std::log(sp.log_bracket) + std::log(s2) - std::log(2.0 * eps));
  sp.exp_form_error = rel(std::exp(sp.R), std::pow(s2 * sp.log_bracket / (2.0 * eps), 2.0 * p));
  sp.xi_form_error = rel(s2 * sp.log_bracket, 2.0 * eps * std::exp(sp.R / (2.0 * p)));
  sp.identities_hold = sp.exp_form_error <= identity_tol && sp.xi_form_error <= identity_tol;
  return sp;
}

LowBandCheck low_band_term_bound(const SplitPoint& sp, int j) {
  if (j < 0 || static_cast<double>(j) > sp.R) throw PreconditionError("band index must satisfy 0 <= j <= R");
  const double L = sp.log_bracket;
  const double base = 2.0 * sp.p * std::log(L);
  auto log_t = [&](int i) { return base - 2.0 * sp.s2 * L + 2.0 * sp.eps * std::exp(i / (2.0 * sp.p)); };
  LowBandCheck c;
  c.j = j;
  c.log_term = log_t(j);
  c.log_term_bound = base - sp.s2 * L;
  // Terms below the split are dominated by the term at R itself, which equals the bound.
  const double slack = identity_tol * std::max(1.0, std::abs(c.log_term_bound)) + identity_tol * sp.s2 * L;
  c.term_ok = c.log_term <= c.log_term_bound + slack;
  const int top = static_cast<int>(std::floor(sp.R));
  c.log_sum = neg_inf;
  for (int i = 0; i <= top; ++i) c.log_sum = log_add(c.log_sum, log_t(i));
  c.log_sum_bound = std::log(static_cast<double>(top + 1)) + c.log_term_bound;
  c.sum_ok = c.log_sum <= c.log_sum_bound + slack;
  return c;
}

double high_constant(double p, double s2) { return superlog::interpolation_constant(p, s2); }

TailCheck geometric_tail(const SplitPoint& sp) {
  TailCheck t;
  t.J = static_cast<int>(std::ceil(sp.R));
  const double L2p = std::pow(sp.log_bracket, 2.0 * sp.p);
  t.closed = L2p * std::exp(-static_cast<double>(t.J)) / (1.0 - 1.0 / std::numbers::e);
  // Sum smallest terms first.
  for (int i = 199; i >= 0; --i) t.direct += L2p * std::exp(-static_cast<double>(t.J + i));
  t.bound = 3.0 * std::pow(2.0 * sp.eps / sp.s2, 2.0 * sp.p);
  t.relative_difference = rel(t.closed, t.direct);
  t.holds = t.closed <= t.bound && t.relative_difference <= identity_tol;
  return t;
}

LemmaReport lemma_bounds_on_sequence(const std::vector<std::vector<double>>& alpha_hat, const XiGrid& grid,
                                     double eps, double p, double s2) {
  if (grid.xi.size() != grid.weight.size()) throw PreconditionError("xi grid and weights differ in length");
  for (const double w : grid.weight) {
    if (!(w > 0.0)) throw PreconditionError("quadrature weights must be positive");
  }
  for (const auto& a : alpha_hat) {
    if (a.size() != grid.xi.size()) throw PreconditionError("sequence samples must match the xi grid");
  }
  const std::size_t J = alpha_hat.size(), N = grid.xi.size();
  LemmaReport rep;
  rep.norms.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      const double a2 = alpha_hat[j][i] * alpha_hat[j][i];
      rep.norms[j].l2_sq += grid.weight[i] * a2;
      rep.norms[j].hs2_sq += grid.weight[i] * std::pow(superlog::japanese_bracket(grid.xi[i]), 2.0 * s2) * a2;
    }
  }

  // Weights <xi>^{2 s2} overflow for large frequencies, so the low band is assembled in logs.
  auto damp = [&](std::size_t j) { return 2.0 * eps * std::exp(static_cast<double>(j) / (2.0 * p)); };
  rep.cauchy_schwarz_ok = true;
  rep.term_bounds_ok = true;
  double log_low_constant = neg_inf, log_damped_hs = neg_inf;
  for (std::size_t i = 0; i < N; ++i) {
    const SplitPoint sp = split_point(grid.xi[i], eps, p, s2);
    const double Lp = std::pow(sp.log_bracket, p);
    const double lb = 2.0 * s2 * sp.log_bracket;  // log <xi>^{2 s2}
    const int hi_start = static_cast<int>(std::ceil(sp.R));
    const int lo_end = static_cast<int>(std::floor(sp.R));
    double high = 0.0, low = 0.0, log_s1 = neg_inf, log_s2 = neg_inf;
    for (int jj = 0; jj <= std::max(lo_end, static_cast<int>(J) - 1); ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      const double a = j < J ? std::abs(alpha_hat[j][i]) : 0.0;
      if (jj >= hi_start) high += Lp * a;
      if (jj > lo_end) continue;
      low += Lp * a;
      // t_j counts for every j below the split, stored or not.
      log_s1 = log_add(log_s1, 2.0 * std::log(Lp) - lb + damp(j));
      if (a > 0.0) {
        const double log_term = lb - damp(j) + 2.0 * std::log(a);
        log_s2 = log_add(log_s2, log_term);
        log_damped_hs = log_add(log_damped_hs, std::log(grid.weight[i]) + log_term);
      }
    }
    rep.high_lhs += grid.weight[i] * high * high;
    rep.low_lhs += grid.weight[i] * low * low;
    if (low > 0.0) {
      rep.cauchy_schwarz_ok =
          rep.cauchy_schwarz_ok && 2.0 * std::log(low) <= log_s1 + log_s2 + 1e-12 * std::max(1.0, std::abs(log_s1));
    }
    if (sp.positive) {
      const auto chk = low_band_term_bound(sp, 0);
      rep.term_bounds_ok = rep.term_bounds_ok && chk.sum_ok && chk.term_ok;
    }
    log_low_constant = std::max(log_low_constant, log_s1);
  }

  double weighted_l2 = 0.0;
  for (std::size_t j = 0; j < J; ++j) weighted_l2 += std::exp(static_cast<double>(j)) * rep.norms[j].l2_sq;
  rep.high_rhs = high_constant(p, s2) * std::pow(eps, 2.0 * p) * weighted_l2;
  rep.high_holds = rep.high_lhs <= rep.high_rhs * (1.0 + 1e-12);
  rep.low_constant = std::exp(log_low_constant);
  rep.log_low_rhs = log_low_constant + log_damped_hs;
  rep.low_rhs = std::exp(rep.log_low_rhs);
  const bool low_ok = rep.low_lhs == 0.0 || std::log(rep.low_lhs) <= rep.log_low_rhs + 1e-12;
  rep.low_chain_holds = rep.cauchy_schwarz_ok && rep.term_bounds_ok && low_ok;
  return rep;
}

}  // namespace hypolab::interp
