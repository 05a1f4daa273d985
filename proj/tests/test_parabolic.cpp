#include <doctest.h>

#include <hypolab/error.hpp>
#include <hypolab/parabolic.hpp>

#include "property.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

using namespace hypolab;
using coeff::Field;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Random cubic in t with its exact antiderivative from 0.
struct Cubic {
  double c[4];
  std::string text() const {
    return num(c[0]) + " + " + num(c[1]) + " * t + " + num(c[2]) + " * t^2 + " + num(c[3]) + " * t^3";
  }
  double antiderivative(double t) const {
    return c[0] * t + c[1] * t * t / 2 + c[2] * t * t * t / 3 + c[3] * t * t * t * t / 4;
  }
};

double max_time_slice(const parabolic::ParabolicProfile& P, std::size_t level) {
  double m = -1e300;
  for (std::size_t s = 0; s < P.points_per_level(); ++s) m = std::max(m, P.u[level * P.points_per_level() + s]);
  return m;
}

}  // namespace

TEST_CASE("one-dimensional profile closed forms") {
  const double T = 1.0;
  CHECK(parabolic::profile_1d(Field(0.0), Field(1.0), 5.0, T, 0.0) == 1.0);
  for (double t : {-1.0, -0.3, 0.25, 1.0}) {
    CHECK(parabolic::profile_1d(Field(0.0), Field(1.0), 5.0, T, t) == doctest::Approx(std::exp(-5 * t)).epsilon(1e-12));
    CHECK(parabolic::profile_1d(Field(1.0), Field(0.0), 7.0, T, t) == doctest::Approx(std::exp(-t)).epsilon(1e-12));
    CHECK(parabolic::profile_1d(Field(1.0), Field(0.0), 1.0, T, t) ==
          parabolic::profile_1d(Field(1.0), Field(0.0), 50.0, T, t));
    const double exact = std::exp(-(t * t / 2 + t * t * t));
    CHECK(parabolic::profile_1d(Field::parse("t"), Field::parse("t^2"), 3.0, T, t) ==
          doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("one-dimensional profile on random polynomial coefficients") {
  prop::for_all(100, 21, [](prop::Gen& gen) {
    Cubic a0{{gen.uniform(-2, 2), gen.uniform(-2, 2), gen.uniform(-2, 2), gen.uniform(-2, 2)}};
    // g = g0 + g2 t^2 + g4 t^4 is nonnegative; store as a cubic plus the quartic term.
    const double g0 = gen.uniform(0, 2), g2 = gen.uniform(0, 2), g4 = gen.uniform(0, 2);
    const Field g = Field::parse(num(g0) + " + " + num(g2) + " * t^2 + " + num(g4) + " * t^4");
    const double lambda = gen.log_uniform(1, 50), T = gen.uniform(0.2, 1.0), t = gen.uniform(-T, T);
    const double integral =
        a0.antiderivative(t) + lambda * (g0 * t + g2 * t * t * t / 3 + g4 * std::pow(t, 5) / 5);
    const double v = parabolic::profile_1d(Field::parse(a0.text()), g, lambda, T, t);
    CHECK(v > 0);
    CHECK(std::abs(v / std::exp(-integral) - 1) <= 1e-10);
  });
}

TEST_CASE("one-dimensional profile is multiplicative") {
  prop::for_all(100, 8, [](prop::Gen& gen) {
    const Field a0 = Field::parse(num(gen.uniform(-1, 1)) + " + " + num(gen.uniform(-1, 1)) + " * t^3");
    const Field g = Field::parse("exp(" + num(gen.uniform(-1, 1)) + " * t)");
    const double lambda = gen.log_uniform(1, 20);
    const double t1 = gen.uniform(-1, 1), t2 = gen.uniform(-1, 1);
    const double ratio = parabolic::profile_1d(a0, g, lambda, 1, t2) / parabolic::profile_1d(a0, g, lambda, 1, t1);
    const double direct = std::exp(-coeff::integrate([&](double s) { return a0(0, 0, s) + lambda * g(0, 0, s); },
                                                     t1, t2, 1e-13));
    CHECK(std::abs(ratio / direct - 1) <= 1e-10);
  });
}

TEST_CASE("one-dimensional profile preconditions") {
  CHECK_THROWS_AS(parabolic::profile_1d(Field(0.0), Field(1.0), 1, 1, 1.5), PreconditionError);
  CHECK_THROWS_AS(parabolic::profile_1d(Field::parse("x"), Field(1.0), 1, 1, 0.5), PreconditionError);
  CHECK_THROWS_AS(parabolic::profile_1d(Field(0.0), Field::parse("t"), 1, 1, -0.5), PreconditionError);
}

TEST_CASE("heat evolution between exponential walls") {
  elliptic::Coefficients L;
  const auto P = parabolic::solve_profile_parabolic(L, Field(0.0), 1.0, 0.3, 1.0, 0.5, 61, 121);
  CHECK(P.alpha == 0.0);
  CHECK(P.lower_ok);
  CHECK(P.upper_ok);
  CHECK(*std::max_element(P.u.begin(), P.u.end()) <= 1.0 + P.tol);
  CHECK(P.v[60 * 61 + 30] == 1.0);
}

TEST_CASE("negative zeroth-order term uses the growing upper solution") {
  elliptic::Coefficients L;
  L.a0 = Field(-1.0);
  const auto P = parabolic::solve_profile_parabolic(L, Field(0.0), 1.0, 0.3, 1.0, 0.5, 61, 121);
  CHECK(P.alpha == 1.0);
  CHECK(P.tol == doctest::Approx(1e-4 * std::exp(1.0)));
  CHECK(P.lower_ok);
  CHECK(P.upper_ok);
  CHECK_FALSE(P.under_resolved);
  // The source term lifts the interior above its initial data.
  CHECK(P.at(P.n_t - 1, 30) > P.at(0, 30));
}

TEST_CASE("bounds at the admissible radius and constant") {
  elliptic::Coefficients L;
  const auto bp = elliptic::barrier_params(elliptic::measure_norms(L, Field(1.0), 1), std::exp(2.0));
  const auto P = parabolic::solve_profile_parabolic(L, Field(1.0), std::exp(2.0), bp.r0, bp.c0, 0.5, 101, 201);
  CHECK(P.c == doctest::Approx(bp.c0));
  CHECK(P.lower_ok);
  CHECK(P.upper_ok);
}

TEST_CASE("time-dependent weight and two spatial dimensions") {
  elliptic::Coefficients L;
  L.a1 = Field::parse("x1");
  L.a0 = Field::parse("0.5 * t");
  const auto P1 = parabolic::solve_profile_parabolic(L, Field::parse("1 + t^2"), 4.0, 0.4, 0.0, 0.5, 41, 81);
  CHECK(P1.alpha == doctest::Approx(0.25));
  CHECK(P1.lower_ok);
  CHECK(P1.upper_ok);
  const auto P2 = parabolic::solve_profile_parabolic(L, Field::parse("r^2"), 4.0, 0.4, 0.0, 0.5, 21, 41, 2);
  CHECK(P2.lower_ok);
  CHECK(P2.upper_ok);
  CHECK(P2.v[20 * 21 * 21 + 10 * 21 + 10] == 1.0);
}

TEST_CASE("time-slice maximum is nonincreasing for nonnegative potentials") {
  elliptic::Coefficients L;
  L.a0 = Field(0.5);
  const auto P = parabolic::solve_profile_parabolic(L, Field::parse("x1^2"), 9.0, 0.3, 1.0, 0.5, 41, 201);
  for (std::size_t level = 1; level < P.n_t; ++level) {
    CHECK(max_time_slice(P, level) <= max_time_slice(P, level - 1) + 1e-12);
  }
}

TEST_CASE("second-order space-time refinement") {
  elliptic::Coefficients L;
  L.a1 = Field::parse("x1");
  L.a0 = Field(0.5);
  const Field g = Field::parse("1 + x1^2");
  auto run = [&](std::size_t nx) {
    return parabolic::solve_profile_parabolic(L, g, 4.0, 0.5, 1.0, 0.5, nx, 2 * nx - 1);
  };
  const auto a = run(21), b = run(41), c = run(81);
  // Compare the coarse grid at t = T against the next refinement (every other node).
  auto diff = [](const parabolic::ParabolicProfile& coarse, const parabolic::ParabolicProfile& fine) {
    double d = 0.0;
    for (std::size_t i = 0; i < coarse.n_x; ++i) {
      d = std::max(d, std::abs(coarse.at(coarse.n_t - 1, i) - fine.at(fine.n_t - 1, 2 * i)));
    }
    return d;
  };
  const double order = std::log2(diff(a, b) / diff(b, c));
  CHECK(order >= 1.8);
}

TEST_CASE("parabolic preconditions") {
  elliptic::Coefficients L;
  CHECK_THROWS_WITH_AS(parabolic::solve_profile_parabolic(L, Field(1.0), 1, 0.3, 1, 0.5, 41, 21),
                       doctest::Contains("step-ratio"), PreconditionError);
  CHECK_THROWS_AS(parabolic::solve_profile_parabolic(L, Field(1.0), 1, 0.3, 1, 0.5, 40, 81), PreconditionError);
  CHECK_THROWS_AS(parabolic::solve_profile_parabolic(L, Field(1.0), 0.5, 0.3, 1, 0.5, 41, 81), PreconditionError);
  CHECK_THROWS_AS(parabolic::solve_profile_parabolic(L, Field::parse("t"), 1, 0.3, 1, 0.5, 41, 81),
                  PreconditionError);
}

TEST_CASE("table rows against the alpha < 1/p criterion") {
  const auto rows = parabolic::default_table1_rows();
  REQUIRE(rows.size() == 2);
  for (const double alpha : {1.5, 0.5, 3.0}) {
    const auto a = coeff::parse_coeff("exp(-abs(y)^(-" + num(alpha) + "))");
    const auto rep = parabolic::table1_experiment(a, alpha, rows);
    CAPTURE(alpha);
    CHECK(rep.all_agree);
    const bool half_holds = rep.rows[0].verdict == superlog::Verdict::holds;
    const bool one_holds = rep.rows[1].verdict == superlog::Verdict::holds;
    CHECK(half_holds == (alpha < 2.0));
    CHECK(one_holds == (alpha < 1.0));
  }
}
