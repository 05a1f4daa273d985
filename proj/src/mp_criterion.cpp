#include <hypolab/mp_criterion.hpp>

#include <hypolab/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

namespace hypolab::mp {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

std::vector<coeff::Interval> dyadic_family(double delta0, int grid) {
  if (!(delta0 > 0.0)) throw PreconditionError("delta0 must be positive");
  if (grid < 16) throw PreconditionError("grid must be at least 16");
  const int levels = static_cast<int>(std::ceil(std::log2(static_cast<double>(grid))));
  const double step = delta0 / grid;
  std::vector<coeff::Interval> out;
  for (int l = 0; l <= levels; ++l) {
    const double w = std::ldexp(delta0, -l);
    for (int k = -grid; k <= grid; ++k) {
      const double c = k * step;
      if (std::abs(c) + w <= delta0 * (1.0 + 1e-14)) out.emplace_back(c, w);
    }
  }
  return out;
}

PositivityResult check_averaged_positivity(const coeff::CoeffFn& a, double delta0, int grid) {
  PositivityResult r;
  for (const auto& I : dyadic_family(delta0, grid)) {
    ++r.intervals_checked;
    if (coeff::log_interval_integral(a, I) == neg_inf) {
      r.positive = false;
      r.witness = I;
      break;
    }
  }
  return r;
}

MpVerdict mp_check(const coeff::CoeffFn& a, double p, double delta0, const MpOptions& options) {
  if (!(p > 0.0)) throw PreconditionError("order p must be positive");
  if (options.K < options.hold_window || options.K < options.fail_window) {
    throw PreconditionError("K must cover the decision windows");
  }
  const auto d = a.domain();
  if (d.lo > -3.0 * delta0 || d.hi < 3.0 * delta0) {
    throw PreconditionError("coefficient domain must contain [-3 delta0, 3 delta0]");
  }

  std::vector<coeff::Interval> family = dyadic_family(delta0, options.grid);
  const int base_levels = static_cast<int>(std::ceil(std::log2(static_cast<double>(options.grid))));
  // The base family bottoms out at width delta0 / grid; small delta needs intervals hugging the flat point.
  for (int l = base_levels + 1; l <= options.zoom_levels; ++l) {
    const double w = std::ldexp(delta0, -l);
    for (int k = -options.zoom_span; k <= options.zoom_span; ++k) {
      if (std::abs(k * w) + w <= delta0) family.emplace_back(k * w, w);
    }
  }

  std::vector<double> log_a3(family.size());
  std::vector<double> decisive;
  parallel_for(family.size(), [&](std::size_t i) {
    log_a3[i] = coeff::log_interval_integral(a, family[i].tripled(), options.quad_tol);
  });

  // Stopping-time intervals: for each delta and offset t, the widest w (to bisection accuracy)
  // with a_{3I} < delta. Dyadic widths alone make S a coarse staircase in delta.
  if (options.stopping_intervals) {
    constexpr int offsets[] = {0, 1, -1, 2, -2, 3, -3};
    const std::size_t shapes = std::size(offsets);
    const std::size_t count = static_cast<std::size_t>(options.K + 1) * shapes;
    std::vector<std::optional<coeff::Interval>> found(count);
    std::vector<double> found_log(count, 0.0);
    parallel_for(count, [&](std::size_t idx) {
      const int k = static_cast<int>(idx / shapes);
      const double t = offsets[idx % shapes];
      const double target = std::log(delta0) - k * std::log(2.0);
      auto interval = [&](double lw) { return coeff::Interval(t * std::exp(lw), std::exp(lw)); };
      auto fits = [&](double lw) { return (std::abs(t) + 1.0) * std::exp(lw) <= delta0; };
      double lo = std::log(delta0) - options.zoom_levels * std::log(2.0);
      double hi = std::log(delta0 / (std::abs(t) + 1.0));
      const double at_lo = coeff::log_interval_integral(a, interval(lo).tripled(), options.quad_tol);
      if (!(at_lo < target) || !fits(lo)) return;
      double best = at_lo;
      const double at_hi = coeff::log_interval_integral(a, interval(hi).tripled(), options.quad_tol);
      if (at_hi < target) {
        lo = hi;
        best = at_hi;
      } else {
        for (int it = 0; it < 40; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double l = coeff::log_interval_integral(a, interval(mid).tripled(), options.quad_tol);
          if (l < target) {
            lo = mid;
            best = l;
          } else {
            hi = mid;
          }
        }
      }
      found[idx] = interval(lo);
      found_log[idx] = best;
    });
    for (std::size_t i = 0; i < count; ++i) {
      if (i % shapes == 1) {
        decisive.push_back(found[i] ? std::pow(found[i]->length(), 1.0 / p) * std::abs(found_log[i])
                                    : std::numeric_limits<double>::quiet_NaN());
      }
      if (!found[i]) continue;
      family.push_back(*found[i]);
      log_a3.push_back(found_log[i]);
    }
  }
  for (const double l : log_a3) {
    if (l == neg_inf) throw PreconditionError("averaged positivity fails; M_p is undefined");
  }

  MpVerdict v;
  v.p = p;
  v.delta0 = delta0;
  v.options = options;
  v.intervals = family.size();
  v.decisive = std::move(decisive);
  for (int k = 0; k <= options.K; ++k) {
    SPoint pt;
    pt.delta = std::ldexp(delta0, -k);
    pt.log_delta = std::log(delta0) - k * std::log(2.0);
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (!(log_a3[i] < pt.log_delta)) continue;
      const double value = std::pow(family[i].length(), 1.0 / p) * std::abs(log_a3[i]);
      if (value > pt.S) {
        pt.S = value;
        pt.witness = family[i];
      }
    }
    v.s_curve.push_back(pt);
  }

  const auto& c = v.s_curve;
  const std::size_t n = c.size();
  bool nonincreasing = true;
  for (std::size_t i = n - static_cast<std::size_t>(options.hold_window); i + 1 < n; ++i) {
    nonincreasing = nonincreasing && c[i + 1].S <= c[i].S;
  }
  const double window_start = c[n - static_cast<std::size_t>(options.hold_window)].S;
  const bool settled = c.back().S < window_start || c.back().S == 0.0;
  bool above = true;
  for (std::size_t i = n - static_cast<std::size_t>(options.fail_window); i < n; ++i) {
    above = above && c[i].S >= options.theta_fail;
  }
  if (c.back().S < options.theta_hold && nonincreasing && settled) {
    v.verdict = Verdict::holds;
  } else if (above) {
    v.verdict = Verdict::fails;
  } else {
    v.verdict = Verdict::inconclusive;
  }
  v.witness = c.back().witness;
  return v;
}

RateResult fedii_rate(const coeff::CoeffFn& a, double p) {
  if (!(p > 0.0)) throw PreconditionError("order p must be positive");
  RateResult r;
  std::vector<double> lx, ly;
  bool all_zero = true;
  for (int k = 4; k <= 40; ++k) {
    const double y = std::ldexp(1.0, -k);
    double worst = 0.0;
    for (const double s : {y, -y}) {
      if (!a.domain().contains(s)) continue;
      const double la = a.log_eval(s);
      if (la == neg_inf || std::isnan(la)) {
        throw DomainError("pointwise rate undefined at y = " + std::to_string(s) + "; use mp_check");
      }
      const double rate = std::pow(y, 1.0 / p) * la;
      if (std::abs(rate) > std::abs(worst)) worst = rate;
    }
    r.samples.emplace_back(y, worst);
    if (worst != 0.0) {
      all_zero = false;
      lx.push_back(std::log(y));
      ly.push_back(std::log(std::abs(worst)));
    }
  }
  if (r.samples.empty()) throw DomainError("no sample points inside the coefficient domain");
  r.last_abs_rate = std::abs(r.samples.back().second);
  r.below_threshold_in_sample = r.last_abs_rate < 1e-3;
  if (all_zero) {
    r.verdict = Verdict::holds;
    r.limit = 0.0;
    r.slope = std::numeric_limits<double>::infinity();
    return r;
  }
  r.slope = superlog::fit_slope(lx, ly);

  // |r| must shrink along the trailing samples for the trend to count as consistent.
  bool shrinking = true;
  const std::size_t n = r.samples.size();
  for (std::size_t i = n > 10 ? n - 10 : 0; i + 1 < n; ++i) {
    shrinking = shrinking && std::abs(r.samples[i + 1].second) < std::abs(r.samples[i].second);
  }
  const double sign = r.samples.back().second < 0.0 ? -1.0 : 1.0;
  if (r.slope > 0.05 && shrinking) {
    r.verdict = Verdict::holds;
    r.limit = 0.0;
  } else if (r.slope < -0.05) {
    r.verdict = Verdict::fails;
    r.limit = sign * std::numeric_limits<double>::infinity();
  } else {
    r.verdict = Verdict::fails;
    double mean = 0.0;
    const std::size_t tail = std::min<std::size_t>(10, n);
    for (std::size_t i = n - tail; i < n; ++i) mean += r.samples[i].second;
    r.limit = mean / static_cast<double>(tail);
  }
  return r;
}

}  // namespace hypolab::mp
