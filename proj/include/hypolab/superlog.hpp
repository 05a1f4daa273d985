#pragma once

// Probing the superlogarithmic estimate through the ground state Lambda(zeta) of
// H_zeta = -d^2/dy^2 + a(y) zeta^2 on the geometric grid zeta = e^{k/2}.

#include <hypolab/coeff.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace hypolab::superlog {

enum class Verdict { holds, fails, inconclusive };
std::string to_string(Verdict v);

/// <zeta> = sqrt(e^2 + zeta^2).
double japanese_bracket(double zeta);

struct ProbeOptions {
  double growth_factor = 2.0;    // ratio growth over the top decade that decides "holds"
  double band_factor = 2.0;      // ratio spread that decides "fails" without a balance exponent
  double decade = 10.0;          // top decade: zeta >= zeta_max / decade
  double gap_hold = 0.2;         // balance_exponent - 2p at or above this: holds
  double gap_fail = 0.12;        // at or below this: fails
  bool check_stability = true;   // re-solve on 2n - 1 nodes
  double stability_tol = 1e-3;   // relative change tolerated under refinement
  double stability_log_zeta_max = 10.0;
};

struct ProbeReport {
  double p = 0.0;
  std::string coefficient;
  double R = 1.0;
  std::size_t nodes = 0;
  int k_lo = 0, k_hi = 0;
  std::vector<double> zeta;
  std::vector<double> lambda_min;
  std::vector<double> ratios;        // Lambda / (log <zeta>)^{2p}
  double fitted_exponent = 0.0;      // slope of log Lambda vs log log <zeta>, top half of the grid
  double balance_exponent = 0.0;     // slope after the soft-wall correction vs log u; NaN if unavailable
  double ratio_growth = 0.0;         // last / first ratio over the top decade
  double ratio_spread = 0.0;         // max / min ratio over the top decade
  std::vector<double> lambda_refined;  // on 2n - 1 nodes where checked
  double max_refinement_change = 0.0;
  bool under_resolved = false;
  bool monotone = true;              // Lambda nondecreasing in zeta
  Verdict verdict = Verdict::inconclusive;
  std::string rule;                  // which decision rule fired
  std::string direction;             // what the verdict establishes
  ProbeOptions options;
};

/// Pre: nodes odd, 2 <= k_lo < k_hi <= 24, p > 0.
ProbeReport lambda_growth(const coeff::CoeffFn& a, double p, double R, std::size_t nodes, int k_lo, int k_hi,
                          const ProbeOptions& options = {});

/// Ground states Lambda(e^{k/2}) for k in [k_lo, k_hi].
std::vector<double> ground_states(const coeff::CoeffFn& a, double R, std::size_t nodes, int k_lo, int k_hi);

/// Least-squares slope.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(Lambda (y_h / y_w)^2) against log u, u = 2 log zeta - log Lambda, where y_w is the
/// turning point log a(y_w) = -u and y_h = y_w + 2 delta (log(1 / (sqrt(Lambda) delta)) - gamma),
/// delta = 1 / (log a)'(y_w), widens it to the equivalent hard wall. Fitted on the top half of
/// usable points; NaN when fewer than 3 are usable or a is not even and increasing on (0, R].
double balance_exponent(const coeff::CoeffFn& a, double R, const std::vector<double>& zeta,
                        const std::vector<double>& lambda);

struct ConstantPoint {
  double eps_prime = 0.0;
  double base = 0.0;
  double extended = 0.0;
  bool diverging = false;  // extended exceeds base by at least 25%
};

/// C(eps') = max over the zeta grid of [(log <zeta>)^{2p} - eps' Lambda(zeta)]_+, on
/// k in [k_lo, k_hi] and on the extension [k_lo, k_ext].
std::vector<ConstantPoint> best_constant_curve(const coeff::CoeffFn& a, double p, const std::vector<double>& eps_list,
                                               double R, std::size_t nodes, int k_lo, int k_hi, int k_ext);

/// Constant of the high-frequency interpolation bound, 3 (2 / s2)^{2p}.
double interpolation_constant(double p, double s2);

/// Inverts eps^{2p} = eps' / (C(s2, p) e).
double eps_from_target(double eps_prime, double p, double s2);

}  // namespace hypolab::superlog
