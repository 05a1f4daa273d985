#pragma once

#include <hypolab/coeff.hpp>
#include <hypolab/elliptic.hpp>
#include <hypolab/superlog.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace hypolab::parabolic {

/// v(t, lambda) = exp(-int_0^t [a0 + g lambda]) for coefficients of t alone; order 1/2 profile of d_t + a0 + g lambda.
double profile_1d(const coeff::Field& a0, const coeff::Field& g, double lambda, double T, double t);

struct ParabolicProfile {
  double lambda = 0.0;
  double T = 0.0;
  double r = 0.0;
  double c = 0.0;
  double c0 = 0.0;
  double alpha = 0.0;  // sup of the negative part of a0
  int dim = 1;
  std::size_t n_x = 0;
  std::size_t n_t = 0;
  std::vector<double> x;  // spatial nodes per axis
  std::vector<double> t;  // time levels from -T to T
  std::vector<double> u;  // level-major: u[level * n_x^dim + spatial index], x1 fastest
  std::vector<double> v;  // u / u(0, 0)
  double u_center = 0.0;
  double tol = 0.0;  // 1e-4 exp(2 alpha T)
  bool lower_ok = false;
  bool upper_ok = false;
  double min_lower_margin = 0.0;  // min (u - u_L)
  double max_upper_excess = 0.0;  // max (u - exp(alpha (t + T)))
  /// Crank-Nicolson is not unconditionally monotone; a bound violation marks the run under-resolved.
  bool under_resolved = false;

  std::size_t points_per_level() const noexcept { return dim == 2 ? n_x * n_x : n_x; }
  double at(std::size_t level, std::size_t i1, std::size_t i2 = 0) const {
    return u[level * points_per_level() + i2 * n_x + i1];
  }
};

/// Crank-Nicolson solve of d_t u + L0 u = -(a0 + lambda g) u on Q_r x (-T, T] with u = u_L on the
/// parabolic boundary (sides and the initial surface t = -T). n_x and n_t count nodes and must be
/// odd; n_t >= n_x guards the step ratio. c is raised to c0 from norms sampled over Q_1 x [-T, T].
ParabolicProfile solve_profile_parabolic(const elliptic::Coefficients& L, const coeff::Field& g, double lambda,
                                         double r, double c, double T, std::size_t n_x, std::size_t n_t,
                                         int dim = 1);

struct Table1Row {
  std::string operator_label;
  double p = 0.0;
};

/// The two rows of the classical table of minimal orders.
std::vector<Table1Row> default_table1_rows();

struct Table1Outcome {
  Table1Row row;
  superlog::Verdict verdict = superlog::Verdict::inconclusive;
  superlog::Verdict expected = superlog::Verdict::inconclusive;  // holds iff alpha < 1/p
  bool agrees = false;
  double balance_exponent = 0.0;
  double ratio_growth = 0.0;
  std::string rule;
};

struct Table1Report {
  double alpha = 0.0;
  std::string coefficient;
  std::vector<Table1Outcome> rows;
  bool all_agree = false;
};

struct Table1Grid {
  double R = 1.0;
  std::size_t nodes = 8193;
  int k_lo = 4;
  int k_hi = 20;
};

/// Runs the superlog probe at each row's order and compares with the alpha < 1/p criterion.
Table1Report table1_experiment(const coeff::CoeffFn& a, double alpha_family, const std::vector<Table1Row>& rows,
                               const Table1Grid& grid = {});

}  // namespace hypolab::parabolic
