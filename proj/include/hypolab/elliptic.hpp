#pragma once

#include <hypolab/coeff.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace hypolab::elliptic {

/// L1 u = -a11 u_11 - a22 u_22 + a1 u_1 + a2 u_2 + a0 u (diagonal diffusion).
/// In one dimension only a11, a1 and a0 are used.
struct Coefficients {
  coeff::Field a11{1.0};
  coeff::Field a22{1.0};
  coeff::Field a1{0.0};
  coeff::Field a2{0.0};
  coeff::Field a0{0.0};

  /// Short stable text used as a cache key.
  std::string digest() const;
};

struct Norms {
  double inf_a11 = 0.0;  // in 2D the smaller of inf a11 and inf a22
  double norm_a1 = 0.0;  // sup |a1|, in 2D max over both drift components
  double norm_a0 = 0.0;
  double norm_g = 0.0;
};

/// Sampled norms over [-half_width, half_width]^dim (times [t_lo, t_hi] for time-dependent fields).
Norms measure_norms(const Coefficients& L, const coeff::Field& g, int dim, double half_width = 1.0,
                    int samples = 201, double t_lo = 0.0, double t_hi = 0.0);

struct BarrierParams {
  double beta = 0.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
  double r0 = 0.0;
  double c0 = 0.0;
  double lambda_min = 1.0;
  Norms inputs;
};

/// beta = max((|a1| + 1)/inf a11, 4|a0|), r0 = min(log 2/(2 beta), 1) rounded down until
/// exp(2 beta r0) <= 2 holds in floating point, and the smallest c0 with
/// inf_a11 c0^2 lambda >= |a1| c0 sqrt(lambda) + |g| lambda + |a0| for all lambda >= lambda_min.
BarrierParams barrier_params(double inf_a11, double norm_a1, double norm_a0, double norm_g, double lambda_min);
BarrierParams barrier_params(const Norms& n, double lambda_min);

/// w(x) = 3 - exp(beta (r - x1)).
double barrier(const BarrierParams& bp, double r, double x1);

struct BarrierCheck {
  bool ok = false;  // min_slack >= -1e-9
  double min_slack = 0.0;
  double min_w = 0.0;
  double max_w = 0.0;
  bool w_in_range = false;  // 1 <= w <= 2 on the closed cube
  double worst_x1 = 0.0;
  double worst_x2 = 0.0;
};

/// Evaluates (L1 + lambda g) w on a grid^dim tensor grid over the closed cube of half-width bp.r0.
/// Throws PreconditionError naming the norm when a sampled coefficient leaves the bounds in bp.
BarrierCheck verify_barrier(const Coefficients& L, const coeff::Field& g, const BarrierParams& bp, double lambda,
                            int grid, int dim = 1);

/// Three-point rows for -a u'' + b u' + q u on a uniform grid; the first-order term is
/// upwinded where |b| h / (2 a) > 1 so off-diagonals stay nonpositive.
struct Stencil {
  double lower = 0.0;
  double diag = 0.0;
  double upper = 0.0;
};
Stencil stencil(double a, double b, double q, double h);

struct ProfileSolution {
  double lambda = 0.0;
  double r = 0.0;
  double c = 0.0;
  double r0 = 0.0;
  double c0 = 0.0;
  int dim = 1;
  std::size_t n = 0;
  std::vector<double> x;  // node coordinates along each axis, endpoints included
  std::vector<double> u;  // n^dim values, x1 fastest
  std::vector<double> v;  // u / u(0)
  double u_center = 0.0;
  double tol = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  double min_lower_margin = 0.0;  // min (u - u_L)
  double max_upper_excess = 0.0;  // max (u - 2)
  bool upwinded = false;

  double at(std::size_t i1, std::size_t i2 = 0) const { return u[i2 * n + i1]; }
};

/// Finite-difference solve of L1 u + lambda g u = 0 on Q_r with u = exp(c sqrt(lambda)(x1 - r)) on the boundary.
/// c is raised to c0 and r lowered to r0, both computed from sampled norms with lambda_min = lambda.
ProfileSolution solve_profile(const Coefficients& L, const coeff::Field& g, double lambda, double r, double c,
                              std::size_t n, int dim = 1);

/// Backward error of the discrete equation: max |(A u)_i| / max sum_j |A_ij u_j| over interior rows.
double relative_residual(const Coefficients& L, const coeff::Field& g, const ProfileSolution& ps);

/// max |v| <= 2 exp(c0 r lambda^{1/(2p)}) (1 + 1e-6).
bool profile_upper_check(const ProfileSolution& ps, double c0, double p);

}  // namespace hypolab::elliptic
