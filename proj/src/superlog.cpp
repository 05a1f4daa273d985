#include <hypolab/superlog.hpp>

#include <hypolab/parallel.hpp>
#include <hypolab/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hypolab::superlog {

namespace {
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double euler_gamma = 0.57721566490153286;
}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

double japanese_bracket(double zeta) { return std::hypot(std::numbers::e, zeta); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return nan;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : nan;
}

std::vector<double> ground_states(const coeff::CoeffFn& a, double R, std::size_t nodes, int k_lo, int k_hi) {
  if (k_hi < k_lo) throw PreconditionError("empty zeta range");
  std::vector<double> out(static_cast<std::size_t>(k_hi - k_lo + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    const double zeta = std::exp(0.5 * static_cast<double>(k_lo + static_cast<int>(i)));
    out[i] = spectral::smallest_eigenvalues(spectral::build_schrodinger(a, zeta, R, nodes), 1)[0];
  });
  return out;
}

namespace {

// y in (0, R] with log a(y) = target, for log a increasing on the positive axis; NaN if none.
double turning_point(const coeff::CoeffFn& a, double R, double target) {
  if (a.log_eval(R) < target) return nan;
  double lo = 0.0, hi = R;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (a.log_eval(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double balance_exponent(const coeff::CoeffFn& a, double R, const std::vector<double>& zeta,
                        const std::vector<double>& lambda) {
  if (a.parity() != coeff::Parity::even || a.monotone() != coeff::Monotone::nonneg_increasing_on_positive_axis) {
    return nan;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const double L = lambda[i];
    const double u = 2.0 * std::log(zeta[i]) - std::log(L);
    if (!(u > 1.0)) continue;
    const double yw = turning_point(a, R, -u);
    if (!(yw > 0.0)) continue;
    const double step = 1e-6 * yw;
    const double slope = (a.log_eval(std::min(R, yw + step)) - a.log_eval(yw - step)) / (std::min(R, yw + step) - yw + step);
    if (!(slope > 0.0) || !std::isfinite(slope)) continue;
    const double delta = 1.0 / slope;
    const double yh = yw + 2.0 * delta * (std::log(1.0 / (std::sqrt(L) * delta)) - euler_gamma);
    if (!(yh > 0.0)) continue;
    lx.push_back(std::log(u));
    ly.push_back(std::log(L) + 2.0 * std::log(yh / yw));
  }
  if (lx.size() < 3) return nan;
  const std::size_t half = lx.size() / 2;
  return fit_slope({lx.begin() + static_cast<long>(half), lx.end()}, {ly.begin() + static_cast<long>(half), ly.end()});
}

ProbeReport lambda_growth(const coeff::CoeffFn& a, double p, double R, std::size_t nodes, int k_lo, int k_hi,
                          const ProbeOptions& options) {
  if (!(p > 0.0)) throw PreconditionError("order p must be positive");
  if (k_lo < 2 || k_hi > 24 || k_hi <= k_lo) throw PreconditionError("k range must lie within [2, 24]");
  if (nodes < 3 || nodes % 2 == 0) throw PreconditionError("node count must be odd and >= 3");

  ProbeReport r;
  r.p = p;
  r.coefficient = a.source();
  r.R = R;
  r.nodes = nodes;
  r.k_lo = k_lo;
  r.k_hi = k_hi;
  r.options = options;
  for (int k = k_lo; k <= k_hi; ++k) r.zeta.push_back(std::exp(0.5 * k));
  r.lambda_min = ground_states(a, R, nodes, k_lo, k_hi);

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < r.zeta.size(); ++i) {
    const double lb = std::log(japanese_bracket(r.zeta[i]));
    r.ratios.push_back(r.lambda_min[i] / std::pow(lb, 2.0 * p));
    if (i > 0 && r.lambda_min[i] < r.lambda_min[i - 1]) r.monotone = false;
  }
  const std::size_t half = r.zeta.size() / 2;
  for (std::size_t i = half; i < r.zeta.size(); ++i) {
    lx.push_back(std::log(std::log(japanese_bracket(r.zeta[i]))));
    ly.push_back(std::log(r.lambda_min[i]));
  }
  r.fitted_exponent = fit_slope(lx, ly);
  r.balance_exponent = balance_exponent(a, R, r.zeta, r.lambda_min);

  const double zmax = r.zeta.back();
  std::size_t first = r.zeta.size() - 1;
  while (first > 0 && r.zeta[first - 1] >= zmax / options.decade) --first;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = first; i < r.zeta.size(); ++i) lo = std::min(lo, r.ratios[i]), hi = std::max(hi, r.ratios[i]);
  r.ratio_growth = r.ratios.back() / r.ratios[first];
  r.ratio_spread = hi / lo;

  if (options.check_stability) {
    const int k_stab = std::min(k_hi, static_cast<int>(std::floor(2.0 * options.stability_log_zeta_max)));
    if (k_stab >= k_lo) {
      r.lambda_refined = ground_states(a, R, 2 * nodes - 1, k_lo, k_stab);
      for (std::size_t i = 0; i < r.lambda_refined.size(); ++i) {
        const double change = std::abs(r.lambda_refined[i] - r.lambda_min[i]) / r.lambda_refined[i];
        r.max_refinement_change = std::max(r.max_refinement_change, change);
      }
      r.under_resolved = r.max_refinement_change > options.stability_tol;
    }
  }

  const double gap = r.balance_exponent - 2.0 * p;
  if (r.under_resolved) {
    r.verdict = Verdict::inconclusive;
    r.rule = "under-resolved: ground states moved by more than the stability tolerance on 2n-1 nodes";
  } else if (r.ratio_growth >= options.growth_factor) {
    r.verdict = Verdict::holds;
    r.rule = "ratio grew by the growth factor over the top decade";
  } else if (std::isfinite(gap)) {
    if (gap >= options.gap_hold) {
      r.verdict = Verdict::holds;
      r.rule = "balance exponent exceeds 2p by at least gap_hold";
    } else if (gap <= options.gap_fail) {
      r.verdict = Verdict::fails;
      r.rule = "balance exponent within gap_fail of 2p or below";
    } else {
      r.verdict = Verdict::inconclusive;
      r.rule = "balance exponent between gap_fail and gap_hold above 2p";
    }
  } else if (r.ratio_spread <= options.band_factor) {
    r.verdict = Verdict::fails;
    r.rule = "ratio stayed within the band factor over the top decade";
  } else {
    r.verdict = Verdict::inconclusive;
    r.rule = "ratio neither grew nor stayed banded";
  }
  switch (r.verdict) {
    case Verdict::fails:
      r.direction = "necessity: single-mode test functions violate the estimate";
      break;
    case Verdict::holds:
      r.direction = "heuristic sufficiency: single modes satisfy the estimate";
      break;
    case Verdict::inconclusive:
      r.direction = "none";
      break;
  }
  return r;
}

std::vector<ConstantPoint> best_constant_curve(const coeff::CoeffFn& a, double p, const std::vector<double>& eps_list,
                                               double R, std::size_t nodes, int k_lo, int k_hi, int k_ext) {
  if (eps_list.empty()) throw PreconditionError("eps list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
      throw PreconditionError("eps list must be positive and strictly decreasing");
    }
  }
  if (k_ext < k_hi) throw PreconditionError("extended grid must contain the base grid");
  const std::vector<double> lambda = ground_states(a, R, nodes, k_lo, k_ext);
  auto curve = [&](double eps, int k_top) {
    double c = 0.0;
    for (int k = k_lo; k <= k_top; ++k) {
      const double lb = std::log(japanese_bracket(std::exp(0.5 * k)));
      c = std::max(c, std::pow(lb, 2.0 * p) - eps * lambda[static_cast<std::size_t>(k - k_lo)]);
    }
    return c;
  };
  std::vector<ConstantPoint> out;
  for (double eps : eps_list) {
    ConstantPoint pt{eps, curve(eps, k_hi), curve(eps, k_ext), false};
    pt.diverging = pt.extended >= 1.25 * pt.base && pt.extended > 0.0;
    out.push_back(pt);
  }
  return out;
}

double interpolation_constant(double p, double s2) {
  if (!(p > 0.0) || !(s2 > 0.0)) throw PreconditionError("p and s2 must be positive");
  return 3.0 * std::pow(2.0 / s2, 2.0 * p);
}

double eps_from_target(double eps_prime, double p, double s2) {
  if (!(eps_prime > 0.0)) throw PreconditionError("eps' must be positive");
  return std::pow(eps_prime / (interpolation_constant(p, s2) * std::numbers::e), 1.0 / (2.0 * p));
}

}  // namespace hypolab::superlog
