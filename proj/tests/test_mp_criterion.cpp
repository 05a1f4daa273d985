#include <doctest.h>

#include <hypolab/mp_criterion.hpp>

#include "oracle_values.hpp"

#include <cmath>
#include <string>

using namespace hypolab;
using namespace hypolab::mp;

namespace {
coeff::CoeffFn alpha_weight(double alpha, const std::string& scale = "") {
  return coeff::parse_coeff(scale + "exp(-abs(y)^(-" + std::to_string(alpha) + "))");
}
}  // namespace

TEST_CASE("dyadic family shape") {
  const auto fam = dyadic_family(0.5, 16);
  for (const auto& I : fam) {
    CHECK(I.lo() >= -0.5 - 1e-15);
    CHECK(I.hi() <= 0.5 + 1e-15);
  }
  CHECK(fam.front().half_width() == 0.5);
  CHECK(fam.back().half_width() == 0.5 / 16);
  CHECK_THROWS_AS(dyadic_family(0.5, 8), PreconditionError);
  CHECK_THROWS_AS(dyadic_family(0.0, 16), PreconditionError);
}

TEST_CASE("averaged positivity") {
  CHECK(check_averaged_positivity(coeff::parse_coeff("exp(-1/abs(y))"), 0.5).positive);
  const auto zero = check_averaged_positivity(coeff::parse_coeff("0"), 0.5);
  CHECK_FALSE(zero.positive);
  CHECK(zero.witness.has_value());
  const auto half = check_averaged_positivity(coeff::parse_coeff("max(y, 0)"), 0.5);
  CHECK_FALSE(half.positive);
  REQUIRE(half.witness.has_value());
  CHECK(half.witness->hi() <= 0.0);
  CHECK(half.witness->lo() >= -0.5);
}

TEST_CASE("M_p verdicts on the alpha family") {
  const auto holds = mp_check(alpha_weight(0.5), 1.0, 0.25);
  CHECK(holds.verdict == Verdict::holds);
  CHECK(holds.s_curve.back().S < holds.options.theta_hold);
  CHECK(mp_check(alpha_weight(2.0), 1.0, 0.25).verdict == Verdict::fails);
  const auto flat = mp_check(coeff::parse_coeff("1"), 2.0, 0.25);
  CHECK(flat.verdict == Verdict::holds);
  CHECK(flat.s_curve.back().S < 1e-4);
  // Without intervals finer than delta0 / grid the candidate set empties and the sup is 0.
  MpOptions coarse;
  coarse.zoom_levels = 0;
  coarse.stopping_intervals = false;
  const auto empty = mp_check(coeff::parse_coeff("1"), 2.0, 0.25, coarse);
  CHECK(empty.s_curve.back().S == 0.0);
  CHECK_FALSE(empty.s_curve.back().witness.has_value());
  CHECK(empty.verdict == Verdict::holds);
  // alpha = 1/p is never reported as holding.
  CHECK(mp_check(alpha_weight(1.0), 1.0, 0.25).verdict != Verdict::holds);
  CHECK(mp_check(alpha_weight(0.5), 2.0, 0.25).verdict != Verdict::holds);
}

TEST_CASE("S is nonincreasing as delta decreases") {
  for (double alpha : {0.25, 1.0, 4.0}) {
    const auto v = mp_check(alpha_weight(alpha), 1.0, 0.25);
    REQUIRE(v.s_curve.size() == 41);
    for (std::size_t i = 1; i < v.s_curve.size(); ++i) {
      CHECK(v.s_curve[i].delta < v.s_curve[i - 1].delta);
      CHECK(v.s_curve[i].S <= v.s_curve[i - 1].S);
    }
  }
}

TEST_CASE("decisive-interval slope sign matches the asymptotic oracle") {
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double alpha = oracle::mp_alphas[i], p = oracle::mp_ps[j];
      if (std::abs(alpha - 1.0 / p) < 1e-12) continue;  // slope is zero, sign meaningless
      const auto v = mp_check(alpha_weight(alpha), p, 0.25);
      std::vector<double> x, y;
      for (std::size_t k = 20; k < v.decisive.size(); ++k) {
        if (!(v.decisive[k] > 0.0)) continue;
        x.push_back(v.s_curve[k].log_delta);
        y.push_back(std::log(v.decisive[k]));
      }
      REQUIRE(x.size() >= 10);
      const double slope = superlog::fit_slope(x, y);
      CAPTURE(alpha);
      CAPTURE(p);
      CHECK((slope > 0 ? 1 : -1) == oracle::mp_slope_sign[i][j]);
    }
  }
}

TEST_CASE("verdicts are stable under scaling the weight by c in [0.5, 2]") {
  for (const char* scale : {"0.5 * ", "2 * "}) {
    CHECK(mp_check(alpha_weight(0.5, scale), 1.0, 0.25).verdict == Verdict::holds);
    CHECK(mp_check(alpha_weight(2.0, scale), 1.0, 0.25).verdict == Verdict::fails);
    CHECK(mp_check(alpha_weight(0.25, scale), 1.0, 0.25).verdict == Verdict::holds);
  }
}

TEST_CASE("pointwise rate") {
  const auto h = fedii_rate(alpha_weight(0.5), 1.0);
  CHECK(h.verdict == Verdict::holds);
  CHECK(h.limit == 0.0);
  CHECK(h.slope == doctest::Approx(0.5).epsilon(1e-6));
  const auto one = fedii_rate(alpha_weight(1.0), 1.0);
  CHECK(one.verdict == Verdict::fails);
  CHECK(one.limit == doctest::Approx(-1.0).epsilon(1e-12));
  const auto two = fedii_rate(alpha_weight(2.0), 1.0);
  CHECK(two.verdict == Verdict::fails);
  CHECK(std::isinf(two.limit));
  CHECK(two.limit < 0);
  CHECK(fedii_rate(coeff::parse_coeff("1"), 1.0).verdict == Verdict::holds);
  CHECK_THROWS_AS(fedii_rate(coeff::parse_coeff("max(abs(y) - 0.5, 0)"), 1.0), DomainError);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(mp_check(alpha_weight(1.0), 0.0, 0.25), PreconditionError);
  CHECK_THROWS_AS(mp_check(alpha_weight(1.0), 1.0, 0.5), PreconditionError);  // 3 delta0 leaves [-1, 1]
  CHECK_THROWS_AS(mp_check(coeff::parse_coeff("max(y, 0)"), 1.0, 0.25), PreconditionError);
}
