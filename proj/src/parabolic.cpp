#include <hypolab/parabolic.hpp>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace hypolab::parabolic {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

bool depends_on_t(const coeff::Field& f) { return !f.is_constant() && f.arg() == coeff::Arg::t; }

struct Discrete {
  SpMat M;            // interior operator L0 + a0 + lambda g
  Eigen::VectorXd b;  // boundary contribution, M u + b approximates the operator on the full grid
};

Discrete assemble(const elliptic::Coefficients& L, const coeff::Field& g, double lambda, const std::vector<double>& x,
                  const std::vector<double>& boundary, int dim, double t) {
  const std::size_t n = x.size(), m = n - 2;
  const double h = x[1] - x[0];
  const std::size_t unknowns = dim == 2 ? m * m : m;
  auto index = [m](std::size_t i, std::size_t j) { return static_cast<int>((j - 1) * m + (i - 1)); };
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * unknowns);
  Discrete d;
  d.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
  const std::size_t j_lo = dim == 2 ? 1 : 0, j_hi = dim == 2 ? n - 1 : 1;
  for (std::size_t j = j_lo; j < j_hi; ++j) {
    const double x2 = dim == 2 ? x[j] : 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double x1 = x[i];
      const int row = dim == 2 ? index(i, j) : static_cast<int>(i - 1);
      const auto s1 = elliptic::stencil(L.a11(x1, x2, t), L.a1(x1, x2, t), 0.0, h);
      const double q = L.a0(x1, x2, t) + lambda * g(x1, x2, t);
      double diag = s1.diag + q;
      auto couple = [&](std::size_t ii, std::size_t jj, double coef) {
        const bool edge = ii == 0 || ii == n - 1 || (dim == 2 && (jj == 0 || jj == n - 1));
        if (edge) {
          d.b[row] += coef * boundary[ii];
        } else {
          trips.emplace_back(row, dim == 2 ? index(ii, jj) : static_cast<int>(ii - 1), coef);
        }
      };
      couple(i - 1, j, s1.lower);
      couple(i + 1, j, s1.upper);
      if (dim == 2) {
        const auto s2 = elliptic::stencil(L.a22(x1, x2, t), L.a2(x1, x2, t), 0.0, h);
        diag += s2.diag;
        couple(i, j - 1, s2.lower);
        couple(i, j + 1, s2.upper);
      }
      trips.emplace_back(row, row, diag);
    }
  }
  d.M.resize(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
  d.M.setFromTriplets(trips.begin(), trips.end());
  return d;
}

}  // namespace

double profile_1d(const coeff::Field& a0, const coeff::Field& g, double lambda, double T, double t) {
  if (!(T > 0.0)) throw PreconditionError("T must be positive");
  if (!(t >= -T && t <= T)) throw PreconditionError("t must lie in [-T, T]");
  for (const auto* f : {&a0, &g}) {
    if (!f->is_constant() && f->arg() != coeff::Arg::t) {
      throw PreconditionError("one-dimensional parabolic coefficients must depend on t only");
    }
  }
  const double integral = coeff::integrate(
      [&](double s) {
        const double gv = g(0.0, 0.0, s);
        if (gv < 0.0) throw PreconditionError("weight g must be nonnegative");
        return a0(0.0, 0.0, s) + lambda * gv;
      },
      0.0, t, 1e-12);
  return std::exp(-integral);
}

ParabolicProfile solve_profile_parabolic(const elliptic::Coefficients& L, const coeff::Field& g, double lambda,
                                         double r, double c, double T, std::size_t n_x, std::size_t n_t, int dim) {
  if (!(lambda >= 1.0)) throw PreconditionError("lambda must be >= 1");
  if (!(r > 0.0) || !(T > 0.0)) throw PreconditionError("r and T must be positive");
  if (dim != 1 && dim != 2) throw PreconditionError("spatial dimension must be 1 or 2");
  if (n_x < 3 || n_x % 2 == 0) throw PreconditionError("n_x must be odd and >= 3");
  if (n_t % 2 == 0) throw PreconditionError("n_t must be odd so that t = 0 is a level");
  if (n_t < n_x) throw PreconditionError("step-ratio guard: n_t must be at least n_x");

  const elliptic::Norms norms = elliptic::measure_norms(L, g, dim, 1.0, 201, -T, T);
  const elliptic::BarrierParams bp = elliptic::barrier_params(norms, lambda);
  ParabolicProfile P;
  P.lambda = lambda;
  P.T = T;
  P.r = r;
  P.c0 = bp.c0;
  P.c = std::max(c, bp.c0);
  P.dim = dim;
  P.n_x = n_x;
  P.n_t = n_t;
  // alpha = sup of a0^- over the closed cylinder
  double neg = 0.0;
  {
    const std::size_t s = 201;
    for (std::size_t k = 0; k < s; ++k) {
      const double t = -T + 2.0 * T * static_cast<double>(k) / static_cast<double>(s - 1);
      for (std::size_t j = 0; j < (dim == 2 ? s : 1); ++j) {
        const double x2 = dim == 2 ? -r + 2.0 * r * static_cast<double>(j) / static_cast<double>(s - 1) : 0.0;
        for (std::size_t i = 0; i < s; ++i) {
          const double x1 = -r + 2.0 * r * static_cast<double>(i) / static_cast<double>(s - 1);
          neg = std::max(neg, -L.a0(x1, x2, t));
        }
      }
    }
  }
  P.alpha = neg;

  P.x.resize(n_x);
  for (std::size_t i = 0; i < n_x; ++i) {
    const double m = static_cast<double>(n_x - 1);
    P.x[i] = r * ((2.0 * static_cast<double>(i) - m) / m);
  }
  P.t.resize(n_t);
  for (std::size_t k = 0; k < n_t; ++k) {
    const double m = static_cast<double>(n_t - 1);
    P.t[k] = T * ((2.0 * static_cast<double>(k) - m) / m);
  }
  const double kstep = 2.0 * T / static_cast<double>(n_t - 1);
  const double kappa = P.c * std::sqrt(lambda);
  std::vector<double> boundary(n_x);
  for (std::size_t i = 0; i < n_x; ++i) boundary[i] = std::exp(kappa * (P.x[i] - r));

  const std::size_t per = P.points_per_level();
  const std::size_t m = n_x - 2;
  const std::size_t unknowns = dim == 2 ? m * m : m;
  auto interior_slot = [&](std::size_t q) -> std::size_t {
    if (dim == 1) return q + 1;
    return (q / m + 1) * n_x + (q % m + 1);
  };
  P.u.assign(n_t * per, 0.0);
  for (std::size_t level = 0; level < n_t; ++level) {
    for (std::size_t s = 0; s < per; ++s) P.u[level * per + s] = boundary[s % n_x];
  }

  const bool varying = depends_on_t(L.a11) || depends_on_t(L.a22) || depends_on_t(L.a1) || depends_on_t(L.a2) ||
                       depends_on_t(L.a0) || depends_on_t(g);
  SpMat I(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
  I.setIdentity();
  Discrete now = assemble(L, g, lambda, P.x, boundary, dim, P.t[0]);
  Discrete next = now;
  Eigen::SparseLU<SpMat> lu;
  auto factor = [&](const Discrete& d) {
    const SpMat lhs = I + 0.5 * kstep * d.M;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success) throw SolverError("Crank-Nicolson factorization failed");
  };
  factor(next);
  Eigen::VectorXd cur(static_cast<Eigen::Index>(unknowns));
  for (std::size_t q = 0; q < unknowns; ++q) cur[static_cast<Eigen::Index>(q)] = P.u[interior_slot(q)];
  for (std::size_t level = 1; level < n_t; ++level) {
    if (varying) {
      next = assemble(L, g, lambda, P.x, boundary, dim, P.t[level]);
      factor(next);
    }
    const Eigen::VectorXd rhs = cur - 0.5 * kstep * (now.M * cur) - 0.5 * kstep * (now.b + next.b);
    cur = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolverError("Crank-Nicolson solve failed");
    for (std::size_t q = 0; q < unknowns; ++q) P.u[level * per + interior_slot(q)] = cur[static_cast<Eigen::Index>(q)];
    if (varying) now = next;
  }

  P.tol = 1e-4 * std::exp(2.0 * P.alpha * T);
  P.min_lower_margin = std::numeric_limits<double>::infinity();
  P.max_upper_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t level = 0; level < n_t; ++level) {
    const double upper = std::exp(P.alpha * (P.t[level] + T));
    for (std::size_t s = 0; s < per; ++s) {
      const double val = P.u[level * per + s];
      if (!std::isfinite(val)) throw SolverError("non-finite value in parabolic solution");
      P.min_lower_margin = std::min(P.min_lower_margin, val - boundary[s % n_x]);
      P.max_upper_excess = std::max(P.max_upper_excess, val - upper);
    }
  }
  P.lower_ok = P.min_lower_margin >= -P.tol;
  P.upper_ok = P.max_upper_excess <= P.tol;
  P.under_resolved = !(P.lower_ok && P.upper_ok);

  const std::size_t mid_level = (n_t - 1) / 2, mid = (n_x - 1) / 2;
  P.u_center = P.u[mid_level * per + (dim == 2 ? mid * n_x + mid : mid)];
  if (!(P.u_center > 0.0)) throw SolverError("profile is not positive at the origin");
  P.v.resize(P.u.size());
  for (std::size_t i = 0; i < P.u.size(); ++i) P.v[i] = P.u[i] / P.u_center;
  return P;
}

std::vector<Table1Row> default_table1_rows() { return {{"d_t + L_F", 0.5}, {"-d_x^2 + L_F", 1.0}}; }

Table1Report table1_experiment(const coeff::CoeffFn& a, double alpha_family, const std::vector<Table1Row>& rows,
                               const Table1Grid& grid) {
  if (!(alpha_family > 0.0)) throw PreconditionError("alpha must be positive");
  Table1Report rep;
  rep.alpha = alpha_family;
  rep.coefficient = a.source();
  rep.rows.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto pr = superlog::lambda_growth(a, rows[i].p, grid.R, grid.nodes, grid.k_lo, grid.k_hi);
    Table1Outcome& o = rep.rows[i];
    o.row = rows[i];
    o.verdict = pr.verdict;
    o.expected = alpha_family < 1.0 / rows[i].p ? superlog::Verdict::holds : superlog::Verdict::fails;
    o.agrees = o.verdict == o.expected;
    o.balance_exponent = pr.balance_exponent;
    o.ratio_growth = pr.ratio_growth;
    o.rule = pr.rule;
  }
  rep.all_agree = std::all_of(rep.rows.begin(), rep.rows.end(), [](const Table1Outcome& o) { return o.agrees; });
  return rep;
}

}  // namespace hypolab::parabolic
