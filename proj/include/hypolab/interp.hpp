#pragma once

#include <cstddef>
#include <vector>

namespace hypolab::interp {

/// Frequency split R(xi) with e^R = (s2 log<xi> / (2 eps))^{2p}, or R = 0 below the split.
struct SplitPoint {
  double xi = 0.0;
  double eps = 0.0;
  double p = 0.0;
  double s2 = 0.0;
  double R = 0.0;
  double log_bracket = 0.0;  // log <xi>
  bool positive = false;     // s2 log<xi> > 2 eps
  double exp_form_error = 0.0;  // relative error of e^R against the power form
  double xi_form_error = 0.0;   // relative error of s2 log<xi> against 2 eps e^{R/(2p)}
  bool identities_hold = false;  // both errors <= 1e-12 (vacuous below the split)
};

SplitPoint split_point(double xi, double eps, double p, double s2);

/// Low-band terms t_j = log^{2p}<xi> <xi>^{-2 s2} exp(2 eps e^{j/(2p)}), compared in logs.
struct LowBandCheck {
  int j = 0;
  double log_term = 0.0;
  double log_term_bound = 0.0;  // log(log^{2p}<xi> <xi>^{-s2})
  bool term_ok = false;
  double log_sum = 0.0;          // log sum_{0 <= i <= floor R} t_i
  double log_sum_bound = 0.0;    // log((floor R + 1) log^{2p}<xi> <xi>^{-s2})
  bool sum_ok = false;
};

/// Requires 0 <= j <= R.
LowBandCheck low_band_term_bound(const SplitPoint& sp, int j);

struct TailCheck {
  int J = 0;              // ceil R
  double closed = 0.0;    // log^{2p}<xi> e^{-J} / (1 - 1/e)
  double direct = 0.0;    // 200-term sum from J
  double bound = 0.0;     // 3 (2 eps / s2)^{2p}
  double relative_difference = 0.0;
  bool holds = false;     // closed <= bound and |closed - direct| <= 1e-12 closed
};

TailCheck geometric_tail(const SplitPoint& sp);

/// Explicit high-band constant 3 (2 / s2)^{2p}.
double high_constant(double p, double s2);

/// Radial frequency samples with positive quadrature weights.
struct XiGrid {
  std::vector<double> xi;
  std::vector<double> weight;
};

struct NormPair {
  double l2_sq = 0.0;   // sum_i w_i |a_j(xi_i)|^2
  double hs2_sq = 0.0;  // sum_i w_i <xi_i>^{2 s2} |a_j(xi_i)|^2
};

struct LemmaReport {
  std::vector<NormPair> norms;
  double high_lhs = 0.0;  // sum_i w_i (sum_{j >= ceil R_i} log^p<xi_i> |a_j(xi_i)|)^2
  double high_rhs = 0.0;  // C(s2, p) eps^{2p} sum_j e^j |a_j|_{L2}^2
  bool high_holds = false;
  double low_lhs = 0.0;       // same with j <= floor R_i
  double low_constant = 0.0;  // max over the grid of sum_{j <= floor R} t_j
  double low_rhs = 0.0;       // low_constant sum_j exp(-2 eps e^{j/(2p)}) |a_j|_{H^s2}^2
  double log_low_rhs = 0.0;   // log of low_rhs, finite when low_rhs overflows
  bool cauchy_schwarz_ok = false;
  bool term_bounds_ok = false;
  bool low_chain_holds = false;
};

/// Both sides of the high-band inequality and the low-band proof chain for samples a[j][i] = |a_j(xi_i)|.
LemmaReport lemma_bounds_on_sequence(const std::vector<std::vector<double>>& alpha_hat, const XiGrid& grid,
                                     double eps, double p, double s2);

}  // namespace hypolab::interp
