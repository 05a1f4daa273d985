#pragma once

#include <hypolab/elliptic.hpp>
#include <hypolab/spectral.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace hypolab::synthesis {

/// Relative backward error accepted for a profile solve.
inline constexpr double solver_tolerance = 1e-10;

/// Lazily computed one-dimensional elliptic profiles keyed by (lambda, grid, r, c, coefficients).
/// Safe for concurrent lookup and insertion; a profile may be computed twice under contention,
/// but the first stored copy wins.
class ProfileCache {
 public:
  ProfileCache(elliptic::Coefficients L, coeff::Field g, double r, double c, std::size_t n_x);

  std::shared_ptr<const elliptic::ProfileSolution> get(double lambda);

  const elliptic::Coefficients& coefficients() const noexcept { return L_; }
  const coeff::Field& weight() const noexcept { return g_; }
  double r() const noexcept { return r_; }
  double c() const noexcept { return c_; }
  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t size() const;
  std::size_t misses() const;

 private:
  using Key = std::tuple<std::uint64_t, std::size_t, std::uint64_t, std::uint64_t, std::string>;
  elliptic::Coefficients L_;
  coeff::Field g_;
  double r_, c_;
  std::size_t n_x_;
  std::string digest_;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const elliptic::ProfileSolution>> store_;
  std::size_t misses_ = 0;
};

struct Radius {
  double eps = 0.0;
  double c0 = 0.0;  // profile growth constant at lambda_min = 1
  double r0 = 0.0;
  double r = 0.0;   // min(eps / (8 c0), r0)
};

/// Radius rule tying the profile box to the exponent eps.
Radius choose_radius(const elliptic::Coefficients& L, const coeff::Field& g, double eps);

struct ModeRecord {
  double lambda = 0.0;
  double coefficient = 0.0;  // <u, e_k>
  double residual = 0.0;     // relative residual of the profile solve
  double v_max = 0.0;
};

struct SynthesizedSolution {
  std::vector<double> x;  // profile nodes on [-r, r]
  std::vector<double> y;  // surrogate grid (indices when no coordinates were supplied)
  std::vector<double> w;  // w[ix * y.size() + iy]
  std::vector<double> u;
  double eps = 0.0;
  double p = 0.0;
  double r = 0.0;
  double c = 0.0;
  double profile_constant = 2.0;  // |v(x, lambda)| <= C_r exp(c r lambda^{1/(2p)})
  std::vector<ModeRecord> modes;
  double max_residual = 0.0;
  double trace_error = 0.0;  // max |w(0, .) - u|

  std::span<const double> row(std::size_t ix) const { return {w.data() + ix * y.size(), y.size()}; }
};

/// w(x, .) = sum_k v(x, lambda_k) <u, e_k> e_k with profiles from the cache (p in (0, 1]).
SynthesizedSolution synthesize(const spectral::SpectralSurrogate& S, ProfileCache& profiles, std::span<const double> u,
                               double eps, double p, std::vector<double> y = {});

struct WEstimate {
  double lhs = 0.0;             // ||w||^2 over Q_r x grid, trapezoid in x
  double rhs = 0.0;             // C_r^2 |Q_r| sum_k exp((eps/4) lambda_k^{1/(2p)}) c_k^2
  double exp_norm_sq = 0.0;     // ||exp(eps B^{1/(2p)}) u||^2
  double rhs_exp_norm = 0.0;    // C_r^2 |Q_r| ||exp(eps B^{1/(2p)}) u||^2
  bool holds = false;
};

WEstimate w_estimate(const SynthesizedSolution& sol);

struct ProjectionBound {
  int j = 0;
  double eps = 0.0;
  double p = 0.0;
  double lhs = 0.0;          // ||exp(eps B^{1/(2p)}) P_j u||^2
  double proj_norm_sq = 0.0;  // ||P_j u||^2
  double rhs = 0.0;          // 2 exp(2 eps e^{(j+1)/(2p)}) ||P_j u||^2
  double literal_rhs = 0.0;  // 6 exp(eps e^{(j+1)/(2p)}) ||P_j u||^2, recorded only
  double slack = 0.0;
  bool holds = false;
  bool literal_holds = false;
};

ProjectionBound projection_exp_bound(const spectral::SpectralSurrogate& S, int j, double eps, double p,
                                     std::span<const double> u);

struct Threshold {
  double xi = 0.0;
  double bracket = 0.0;      // <xi>
  double lambda_star = 0.0;  // (log <xi>)^{2p}
  double lhs = 0.0;          // exp(eps lambda_star^{1/(2p)})
  double rhs = 0.0;          // <xi>^eps
  bool identity = false;     // agreement to 1e-12 relative
};

Threshold low_frequency_threshold(double xi, double eps, double p);

}  // namespace hypolab::synthesis
