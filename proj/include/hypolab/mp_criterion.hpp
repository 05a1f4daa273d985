#pragma once

// Averaged positivity, the M_p stopping-time quantity S(delta), and the pointwise rate
// |y|^{1/p} log a(y), each with a finite-data verdict.

#include <hypolab/coeff.hpp>
#include <hypolab/superlog.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace hypolab::mp {

using superlog::Verdict;

struct PositivityResult {
  bool positive = true;
  std::optional<coeff::Interval> witness;  // first interval with a_I = 0
  std::size_t intervals_checked = 0;
};

/// Dyadic family: half-widths delta0 2^-l (l = 0..ceil(log2 grid)), centers k delta0 / grid, I inside [-delta0, delta0].
std::vector<coeff::Interval> dyadic_family(double delta0, int grid);

/// Pre: delta0 > 0, grid >= 16.
PositivityResult check_averaged_positivity(const coeff::CoeffFn& a, double delta0, int grid = 64);

struct MpOptions {
  int K = 40;              // delta_k = delta0 2^-k, k = 0..K
  int grid = 64;
  int zoom_levels = 64;    // extra dyadic scales delta0 2^-l around y = 0
  int zoom_span = 16;      // zoom centers k w with |k| <= zoom_span
  bool stopping_intervals = true;  // per delta, widen I = (t w - w, t w + w) until a_3I reaches delta
  double theta_hold = 0.05;
  double theta_fail = 0.5;
  int hold_window = 5;     // trailing points that must be nonincreasing
  int fail_window = 4;     // trailing points (one decade in delta) that must all exceed theta_fail
  double quad_tol = 1e-9;
};

struct SPoint {
  double delta = 0.0;
  double log_delta = 0.0;
  double S = 0.0;
  std::optional<coeff::Interval> witness;  // interval attaining the sup
};

struct MpVerdict {
  double p = 0.0;
  double delta0 = 0.0;
  std::vector<SPoint> s_curve;  // ordered by decreasing delta
  Verdict verdict = Verdict::inconclusive;
  std::optional<coeff::Interval> witness;  // attains S at the last delta
  /// Per delta: |I|^{1/p} |log a_3I| on the widest I = [0, h] with a_3I < delta (NaN if none).
  std::vector<double> decisive;
  MpOptions options;
  std::size_t intervals = 0;
};

/// Pre: p > 0 and check_averaged_positivity passed. Requires [-3 delta0, 3 delta0] inside a's domain.
MpVerdict mp_check(const coeff::CoeffFn& a, double p, double delta0, const MpOptions& options = {});

struct RateResult {
  Verdict verdict = Verdict::fails;  // holds or fails
  double limit = 0.0;                // 0, a finite nonzero estimate, or +-inf
  double slope = 0.0;                // of log |r| against log y
  double last_abs_rate = 0.0;        // |r| at the smallest sample
  bool below_threshold_in_sample = false;
  std::vector<std::pair<double, double>> samples;  // (y, r(y)) with r = max over +-y in magnitude
};

/// Samples r(y) = |y|^{1/p} log a(y) at y = 2^-k, k = 4..40, on both sides of 0.
RateResult fedii_rate(const coeff::CoeffFn& a, double p);

}  // namespace hypolab::mp
