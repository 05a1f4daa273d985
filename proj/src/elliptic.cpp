#include <hypolab/elliptic.hpp>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hypolab::elliptic {

namespace {

// Symmetric node i of n on [-r, r]; endpoints and the midpoint are exact.
double node(double r, std::size_t i, std::size_t n) {
  const double m = static_cast<double>(n - 1);
  return r * ((2.0 * static_cast<double>(i) - m) / m);
}

std::vector<double> nodes(double r, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = node(r, i, n);
  return x;
}

// Tridiagonal solve without pivoting; rows are diagonally dominant up to the zeroth-order term.
std::vector<double> thomas(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                           std::vector<double> rhs) {
  const std::size_t m = diag.size();
  for (std::size_t i = 1; i < m; ++i) {
    if (diag[i - 1] == 0.0) throw SolverError("zero pivot in tridiagonal solve");
    const double f = lower[i] / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  if (diag[m - 1] == 0.0) throw SolverError("zero pivot in tridiagonal solve");
  std::vector<double> out(m);
  out[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) out[i] = (rhs[i] - upper[i] * out[i + 1]) / diag[i];
  return out;
}

void require_bound(double value, double bound, bool lower, const char* name) {
  const double slack = 1e-12 * std::max(1.0, std::abs(bound));
  if (lower ? value < bound - slack : std::abs(value) > bound + slack) {
    throw PreconditionError(std::string("coefficient violates declared bound ") + name);
  }
}

}  // namespace

std::string Coefficients::digest() const {
  return a11.source() + ";" + a22.source() + ";" + a1.source() + ";" + a2.source() + ";" + a0.source();
}

Norms measure_norms(const Coefficients& L, const coeff::Field& g, int dim, double half_width, int samples,
                    double t_lo, double t_hi) {
  if (dim != 1 && dim != 2) throw PreconditionError("dimension must be 1 or 2");
  if (samples < 2 || !(half_width > 0.0)) throw PreconditionError("need at least two samples on a positive cube");
  Norms n;
  n.inf_a11 = std::numeric_limits<double>::infinity();
  const std::size_t s = static_cast<std::size_t>(samples);
  const std::size_t s2 = dim == 2 ? s : 1;
  const std::size_t st = t_hi > t_lo ? s : 1;
  for (std::size_t k = 0; k < st; ++k) {
    const double t = st == 1 ? t_lo : t_lo + (t_hi - t_lo) * static_cast<double>(k) / static_cast<double>(s - 1);
    for (std::size_t j = 0; j < s2; ++j) {
      const double x2 = dim == 2 ? node(half_width, j, s) : 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        const double x1 = node(half_width, i, s);
        n.inf_a11 = std::min(n.inf_a11, L.a11(x1, x2, t));
        n.norm_a1 = std::max(n.norm_a1, std::abs(L.a1(x1, x2, t)));
        if (dim == 2) {
          n.inf_a11 = std::min(n.inf_a11, L.a22(x1, x2, t));
          n.norm_a1 = std::max(n.norm_a1, std::abs(L.a2(x1, x2, t)));
        }
        n.norm_a0 = std::max(n.norm_a0, std::abs(L.a0(x1, x2, t)));
        const double gv = g(x1, x2, t);
        if (gv < 0.0) throw PreconditionError("weight g must be nonnegative");
        n.norm_g = std::max(n.norm_g, gv);
      }
    }
  }
  return n;
}

BarrierParams barrier_params(double inf_a11, double norm_a1, double norm_a0, double norm_g, double lambda_min) {
  if (!(inf_a11 > 0.0)) throw PreconditionError("inf_a11 must be positive");
  if (!(norm_a1 >= 0.0) || !(norm_a0 >= 0.0) || !(norm_g >= 0.0)) throw PreconditionError("norms must be >= 0");
  if (!(lambda_min >= 1.0)) throw PreconditionError("lambda_min must be >= 1");
  BarrierParams bp;
  bp.inputs = {inf_a11, norm_a1, norm_a0, norm_g};
  bp.lambda_min = lambda_min;
  bp.beta0 = (norm_a1 + 1.0) / inf_a11;
  bp.beta1 = 4.0 * norm_a0;
  bp.beta = std::max(bp.beta0, bp.beta1);
  bp.r0 = std::min(std::numbers::ln2 / (2.0 * bp.beta), 1.0);
  // Keep 1 <= w on the closed cube exact in floating point.
  while (std::exp(bp.beta * (bp.r0 + bp.r0)) > 2.0) bp.r0 = std::nextafter(bp.r0, 0.0);
  const double a = inf_a11 * lambda_min;
  const double b = norm_a1 * std::sqrt(lambda_min);
  const double q = norm_g * lambda_min + norm_a0;
  bp.c0 = (b + std::sqrt(b * b + 4.0 * a * q)) / (2.0 * a);
  return bp;
}

BarrierParams barrier_params(const Norms& n, double lambda_min) {
  return barrier_params(n.inf_a11, n.norm_a1, n.norm_a0, n.norm_g, lambda_min);
}

double barrier(const BarrierParams& bp, double r, double x1) { return 3.0 - std::exp(bp.beta * (r - x1)); }

BarrierCheck verify_barrier(const Coefficients& L, const coeff::Field& g, const BarrierParams& bp, double lambda,
                            int grid, int dim) {
  if (grid < 2) throw PreconditionError("grid must have at least two points");
  if (dim != 1 && dim != 2) throw PreconditionError("dimension must be 1 or 2");
  const double r = bp.r0;
  const std::size_t n = static_cast<std::size_t>(grid);
  BarrierCheck out;
  out.min_slack = std::numeric_limits<double>::infinity();
  out.min_w = std::numeric_limits<double>::infinity();
  out.max_w = -std::numeric_limits<double>::infinity();
  const std::size_t n2 = dim == 2 ? n : 1;
  for (std::size_t j = 0; j < n2; ++j) {
    const double x2 = dim == 2 ? node(r, j, n) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = node(r, i, n);
      const double a11 = L.a11(x1, x2), a1 = L.a1(x1, x2), a0 = L.a0(x1, x2), gv = g(x1, x2);
      require_bound(a11, bp.inputs.inf_a11, true, "inf_a11");
      require_bound(a1, bp.inputs.norm_a1, false, "norm_a1");
      if (dim == 2) {
        require_bound(L.a22(x1, x2), bp.inputs.inf_a11, true, "inf_a11");
        require_bound(L.a2(x1, x2), bp.inputs.norm_a1, false, "norm_a1");
      }
      require_bound(a0, bp.inputs.norm_a0, false, "norm_a0");
      if (gv < 0.0) throw PreconditionError("coefficient violates declared bound norm_g (g must be nonnegative)");
      require_bound(gv, bp.inputs.norm_g, false, "norm_g");

      const double E = std::exp(bp.beta * (r - x1));
      const double w = 3.0 - E;
      const double slack = a11 * bp.beta * bp.beta * E + a1 * bp.beta * E + (a0 + lambda * gv) * w;
      out.min_w = std::min(out.min_w, w);
      out.max_w = std::max(out.max_w, w);
      if (slack < out.min_slack) {
        out.min_slack = slack;
        out.worst_x1 = x1;
        out.worst_x2 = x2;
      }
    }
  }
  out.ok = out.min_slack >= -1e-9;
  out.w_in_range = out.min_w >= 1.0 && out.max_w <= 2.0;
  return out;
}

Stencil stencil(double a, double b, double q, double h) {
  const double d = a / (h * h);
  if (std::abs(b) * h <= 2.0 * a) return {-d - b / (2.0 * h), 2.0 * d + q, -d + b / (2.0 * h)};
  if (b > 0.0) return {-d - b / h, 2.0 * d + b / h + q, -d};
  return {-d, 2.0 * d - b / h + q, -d + b / h};
}

ProfileSolution solve_profile(const Coefficients& L, const coeff::Field& g, double lambda, double r, double c,
                              std::size_t n, int dim) {
  if (!(lambda >= 1.0)) throw PreconditionError("lambda must be >= 1");
  if (!(r > 0.0)) throw PreconditionError("r must be positive");
  if (n < 3 || n % 2 == 0) throw PreconditionError("n must be odd and >= 3");
  if (dim != 1 && dim != 2) throw PreconditionError("dimension must be 1 or 2");

  const BarrierParams bp = barrier_params(measure_norms(L, g, dim), lambda);
  ProfileSolution ps;
  ps.lambda = lambda;
  ps.r0 = bp.r0;
  ps.c0 = bp.c0;
  ps.r = std::min(r, bp.r0);
  ps.c = std::max(c, bp.c0);
  ps.dim = dim;
  ps.n = n;
  ps.x = nodes(ps.r, n);
  const double h = 2.0 * ps.r / static_cast<double>(n - 1);
  const double k = ps.c * std::sqrt(lambda);
  auto lower_solution = [&](double x1) { return std::exp(k * (x1 - ps.r)); };

  const std::size_t m = n - 2;
  if (dim == 1) {
    std::vector<double> lo(m), di(m), up(m), rhs(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double x1 = ps.x[i + 1];
      const double a = L.a11(x1), b = L.a1(x1);
      ps.upwinded = ps.upwinded || std::abs(b) * h > 2.0 * a;
      const Stencil s = stencil(a, b, L.a0(x1) + lambda * g(x1), h);
      lo[i] = s.lower, di[i] = s.diag, up[i] = s.upper;
    }
    rhs[0] -= lo[0] * lower_solution(ps.x[0]);
    rhs[m - 1] -= up[m - 1] * lower_solution(ps.x[n - 1]);
    const std::vector<double> inner = thomas(lo, di, up, rhs);
    ps.u.resize(n);
    ps.u[0] = lower_solution(ps.x[0]);
    ps.u[n - 1] = lower_solution(ps.x[n - 1]);
    std::copy(inner.begin(), inner.end(), ps.u.begin() + 1);
  } else {
    ps.u.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || j == 0 || i == n - 1 || j == n - 1) ps.u[j * n + i] = lower_solution(ps.x[i]);
      }
    }
    auto index = [m](std::size_t i, std::size_t j) { return static_cast<int>((j - 1) * m + (i - 1)); };
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * m * m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m * m));
    for (std::size_t j = 1; j + 1 < n; ++j) {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x1 = ps.x[i], x2 = ps.x[j];
        const double a11 = L.a11(x1, x2), b1 = L.a1(x1, x2), a22 = L.a22(x1, x2), b2 = L.a2(x1, x2);
        ps.upwinded = ps.upwinded || std::abs(b1) * h > 2.0 * a11 || std::abs(b2) * h > 2.0 * a22;
        const Stencil s1 = stencil(a11, b1, 0.0, h);
        const Stencil s2 = stencil(a22, b2, 0.0, h);
        const int row = index(i, j);
        trips.emplace_back(row, row, s1.diag + s2.diag + L.a0(x1, x2) + lambda * g(x1, x2));
        const std::pair<std::pair<std::size_t, std::size_t>, double> nbrs[] = {
            {{i - 1, j}, s1.lower}, {{i + 1, j}, s1.upper}, {{i, j - 1}, s2.lower}, {{i, j + 1}, s2.upper}};
        for (const auto& [ij, coef] : nbrs) {
          const auto [ii, jj] = ij;
          if (ii == 0 || jj == 0 || ii == n - 1 || jj == n - 1) {
            rhs[row] -= coef * ps.u[jj * n + ii];
          } else {
            trips.emplace_back(row, index(ii, jj), coef);
          }
        }
      }
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(m * m), static_cast<Eigen::Index>(m * m));
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed");
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
    for (std::size_t j = 1; j + 1 < n; ++j) {
      for (std::size_t i = 1; i + 1 < n; ++i) ps.u[j * n + i] = sol[index(i, j)];
    }
  }

  double unorm = 0.0;
  for (const double val : ps.u) {
    if (!std::isfinite(val)) throw SolverError("non-finite value in profile solution");
    unorm = std::max(unorm, std::abs(val));
  }
  ps.tol = 1e-6 * (1.0 + unorm);
  ps.min_lower_margin = std::numeric_limits<double>::infinity();
  ps.max_upper_excess = -std::numeric_limits<double>::infinity();
  const std::size_t rows = dim == 2 ? n : 1;
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double val = ps.u[j * n + i];
      ps.min_lower_margin = std::min(ps.min_lower_margin, val - lower_solution(ps.x[i]));
      ps.max_upper_excess = std::max(ps.max_upper_excess, val - 2.0);
    }
  }
  ps.lower_ok = ps.min_lower_margin >= -ps.tol;
  ps.upper_ok = ps.max_upper_excess <= ps.tol;

  const std::size_t mid = (n - 1) / 2;
  ps.u_center = dim == 2 ? ps.u[mid * n + mid] : ps.u[mid];
  if (!(ps.u_center > 0.0)) throw SolverError("profile is not positive at the origin");
  ps.v.resize(ps.u.size());
  for (std::size_t i = 0; i < ps.u.size(); ++i) ps.v[i] = ps.u[i] / ps.u_center;
  return ps;
}

double relative_residual(const Coefficients& L, const coeff::Field& g, const ProfileSolution& ps) {
  const std::size_t n = ps.n;
  const double h = 2.0 * ps.r / static_cast<double>(n - 1);
  double worst = 0.0, scale = 0.0;
  const std::size_t j_lo = ps.dim == 2 ? 1 : 0, j_hi = ps.dim == 2 ? n - 1 : 1;
  for (std::size_t j = j_lo; j < j_hi; ++j) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double x1 = ps.x[i], x2 = ps.dim == 2 ? ps.x[j] : 0.0;
      const Stencil s1 = stencil(L.a11(x1, x2), L.a1(x1, x2), 0.0, h);
      double terms[5] = {(L.a0(x1, x2) + ps.lambda * g(x1, x2)) * ps.at(i, j), s1.diag * ps.at(i, j),
                         s1.lower * ps.at(i - 1, j), s1.upper * ps.at(i + 1, j), 0.0};
      if (ps.dim == 2) {
        const Stencil s2 = stencil(L.a22(x1, x2), L.a2(x1, x2), 0.0, h);
        terms[1] += s2.diag * ps.at(i, j);
        terms[4] = s2.lower * ps.at(i, j - 1) + s2.upper * ps.at(i, j + 1);
        scale = std::max(scale, std::abs(s2.lower * ps.at(i, j - 1)) + std::abs(s2.upper * ps.at(i, j + 1)));
      }
      double sum = 0.0, mag = 0.0;
      for (const double t : terms) sum += t, mag += std::abs(t);
      worst = std::max(worst, std::abs(sum));
      scale = std::max(scale, mag);
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

bool profile_upper_check(const ProfileSolution& ps, double c0, double p) {
  double vmax = 0.0;
  for (const double val : ps.v) vmax = std::max(vmax, std::abs(val));
  return vmax <= 2.0 * std::exp(c0 * ps.r * std::pow(ps.lambda, 1.0 / (2.0 * p))) * (1.0 + 1e-6);
}

}  // namespace hypolab::elliptic
