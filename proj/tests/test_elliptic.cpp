#include <doctest.h>

#include <hypolab/elliptic.hpp>
#include <hypolab/error.hpp>

#include "property.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <numbers>

using namespace hypolab;
using elliptic::Coefficients;
using coeff::Field;

namespace {

Coefficients laplacian() { return {}; }

Coefficients drift_laplacian() {
  Coefficients L;
  L.a1 = Field::parse("x1");
  L.a0 = Field(1.0);
  return L;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double max_abs_diff_on_coarse(const elliptic::ProfileSolution& coarse, const elliptic::ProfileSolution& fine) {
  double d = 0.0;
  for (std::size_t i = 0; i < coarse.n; ++i) d = std::max(d, std::abs(coarse.u[i] - fine.u[2 * i]));
  return d;
}

}  // namespace

TEST_CASE("barrier parameters follow the closed formulas") {
  const auto a = elliptic::barrier_params(1, 0, 0, 0, 1);
  CHECK(a.beta == 1.0);
  CHECK(a.r0 == doctest::Approx(std::numbers::ln2 / 2).epsilon(1e-15));
  CHECK(a.r0 == doctest::Approx(0.346574).epsilon(1e-6));

  const auto b = elliptic::barrier_params(1, 1, 1, 1, 1);
  CHECK(b.beta0 == 2.0);
  CHECK(b.beta1 == 4.0);
  CHECK(b.beta == 4.0);
  CHECK(b.r0 == doctest::Approx(0.086643).epsilon(1e-5));

  // A tiny beta caps r0 at 1.
  CHECK(elliptic::barrier_params(100, 0, 0, 0, 1).r0 == 1.0);
  CHECK_THROWS_AS(elliptic::barrier_params(0, 0, 0, 0, 1), PreconditionError);
  CHECK_THROWS_AS(elliptic::barrier_params(-1, 0, 0, 0, 1), PreconditionError);
  CHECK_THROWS_AS(elliptic::barrier_params(1, 0, 0, 0, 0.5), PreconditionError);
}

TEST_CASE("c0 is the smallest constant making the lower solution a subsolution") {
  // (1, 0, 0, 1) at lambda_min = 1 solves c^2 = 1.
  const auto bp = elliptic::barrier_params(1, 0, 0, 1, 1);
  CHECK(bp.c0 == doctest::Approx(1.0).epsilon(1e-15));

  prop::for_all(300, 11, [](prop::Gen& gen) {
    const double a11 = gen.log_uniform(0.1, 10), a1 = gen.uniform(0, 5), a0 = gen.uniform(0, 5);
    const double g = gen.uniform(0, 5), lmin = gen.log_uniform(1, 1e4);
    const auto p = elliptic::barrier_params(a11, a1, a0, g, lmin);
    // Pointwise substitution: -a11 c^2 lambda + a1 c sqrt(lambda) + g lambda + a0 <= 0 at worst-case signs.
    for (const double lam : {lmin, 2 * lmin, 10 * lmin, 1e3 * lmin}) {
      const double t = -a11 * p.c0 * p.c0 * lam + a1 * p.c0 * std::sqrt(lam) + g * lam + a0;
      CHECK(t <= 1e-9 * (a11 * p.c0 * p.c0 * lam));
    }
    if (p.c0 > 0) {
      const double c = p.c0 * (1 - 1e-6);
      CHECK(-a11 * c * c * lmin + a1 * c * std::sqrt(lmin) + g * lmin + a0 > 0);
    }
  });
}

TEST_CASE("barrier inequality and range of w") {
  const Field one(1.0);
  const auto bp = elliptic::barrier_params(1, 0, 0, 1, 1);
  for (int dim : {1, 2}) {
    const auto chk = elliptic::verify_barrier(laplacian(), one, bp, 10.0, 41, dim);
    CHECK(chk.ok);
    CHECK(chk.min_slack >= 0);
    CHECK(chk.w_in_range);
    CHECK(chk.min_w == doctest::Approx(1.0));
    CHECK(chk.max_w == 2.0);
  }

  // Negative constant zeroth-order term at its bound.
  Coefficients L;
  L.a0 = Field(-2.5);
  const auto bn = elliptic::barrier_params(1, 0, 2.5, 0, 1);
  CHECK(bn.beta == 10.0);
  const auto chk = elliptic::verify_barrier(L, Field(0.0), bn, 1.0, 101);
  CHECK(chk.ok);
  CHECK(chk.w_in_range);

  // g = 0 reduces to the pure L1 check.
  CHECK(elliptic::verify_barrier(drift_laplacian(), Field(0.0), elliptic::barrier_params(1, 1, 1, 0, 1), 5.0, 51, 2)
            .ok);
}

TEST_CASE("barrier check names the violated norm") {
  const auto bp = elliptic::barrier_params(1, 0, 0, 1, 1);
  Coefficients L = drift_laplacian();
  try {
    elliptic::verify_barrier(L, Field(1.0), bp, 1.0, 11);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("norm_a1") != std::string::npos);
  }
  Coefficients soft;
  soft.a11 = Field(0.5);
  CHECK_THROWS_WITH_AS(elliptic::verify_barrier(soft, Field(1.0), bp, 1.0, 11),
                       doctest::Contains("inf_a11"), PreconditionError);
  CHECK_THROWS_WITH_AS(elliptic::verify_barrier(laplacian(), Field(3.0), bp, 1.0, 11), doctest::Contains("norm_g"),
                       PreconditionError);
}

TEST_CASE("barrier inequality on random bounded fields") {
  prop::for_all(100, 5, [](prop::Gen& gen) {
    Coefficients L;
    const double m = gen.uniform(0.5, 2), s = gen.uniform(0, 0.4);
    const double b = gen.uniform(-3, 3), q = gen.uniform(-2, 2), gg = gen.uniform(0, 4);
    L.a11 = Field::parse(num(m) + " + " + num(s) + " * x1^2");
    L.a1 = Field::parse(num(b) + " * x1");
    L.a0 = Field::parse(num(q) + " * x1^3");
    const Field g = Field::parse(num(gg) + " * x1^2");
    const auto bp = elliptic::barrier_params(m, std::abs(b), std::abs(q), gg, 1);
    const auto chk = elliptic::verify_barrier(L, g, bp, gen.log_uniform(1, 1e4), 201);
    CHECK(chk.ok);
    CHECK(chk.w_in_range);
  });
}

TEST_CASE("stencil keeps off-diagonals nonpositive") {
  prop::for_all(500, 3, [](prop::Gen& gen) {
    const double a = gen.log_uniform(1e-3, 10), b = gen.uniform(-100, 100), h = gen.log_uniform(1e-4, 0.1);
    const auto s = elliptic::stencil(a, b, 0.0, h);
    CHECK(s.lower <= 0);
    CHECK(s.upper <= 0);
    CHECK(s.diag + s.lower + s.upper == doctest::Approx(0.0).epsilon(1e-12).scale(s.diag));
  });
  const auto up = elliptic::stencil(1.0, 100.0, 0.0, 0.1);
  CHECK(up.upper == doctest::Approx(-100.0));
  CHECK(up.lower == doctest::Approx(-1100.0));
}

TEST_CASE("g = 0 in one dimension gives the chord") {
  Coefficients L;
  const auto ps = elliptic::solve_profile(L, Field(0.0), 4.0, 0.25, 1.0, 101);
  CHECK(ps.c == 1.0);
  CHECK(ps.r == 0.25);
  const double left = std::exp(-1.0);
  for (std::size_t i = 0; i < ps.n; ++i) {
    const double t = (ps.x[i] + 0.25) / 0.5;
    CHECK(ps.u[i] == doctest::Approx(left + t * (1 - left)).epsilon(1e-12));
  }
  CHECK(ps.lower_ok);
  CHECK(ps.upper_ok);
  CHECK(ps.v[50] == 1.0);
  double vmax = *std::max_element(ps.v.begin(), ps.v.end());
  CHECK(vmax == doctest::Approx(1.0 / ((left + 1) / 2)).epsilon(1e-12));
  CHECK(vmax == doctest::Approx(1.462).epsilon(1e-3));
  CHECK(elliptic::profile_upper_check(ps, ps.c, 1.0));
}

TEST_CASE("constant coefficients match the two-point closed form") {
  const double r = 0.25;
  const auto ps = elliptic::solve_profile(laplacian(), Field(1.0), 4.0, r, 1.0, 2001);
  CHECK(ps.c == 1.0);
  // u = A e^{2x} + B e^{-2x}, u(-r) = e^{-1}, u(r) = 1.
  const double ul = std::exp(-1.0), ur = 1.0;
  const double det = std::exp(2 * r) * std::exp(2 * r) - std::exp(-2 * r) * std::exp(-2 * r);
  const double A = (ur * std::exp(2 * r) - ul * std::exp(-2 * r)) / det;
  const double B = (ul * std::exp(2 * r) - ur * std::exp(-2 * r)) / det;
  double err = 0.0;
  for (std::size_t i = 0; i < ps.n; ++i) {
    err = std::max(err, std::abs(ps.u[i] - (A * std::exp(2 * ps.x[i]) + B * std::exp(-2 * ps.x[i]))));
  }
  CHECK(err <= 1e-6);
  CHECK(ps.lower_ok);
  CHECK(ps.upper_ok);
}

TEST_CASE("two-dimensional radial weight satisfies both bounds") {
  const auto bp = elliptic::barrier_params(elliptic::measure_norms(laplacian(), Field::parse("r^2"), 2),
                                           std::exp(2.0));
  CHECK(bp.inputs.norm_g == doctest::Approx(2.0));
  const auto ps = elliptic::solve_profile(laplacian(), Field::parse("r^2"), std::exp(2.0), bp.r0, bp.c0, 81, 2);
  CHECK(ps.r == bp.r0);
  CHECK(ps.c == doctest::Approx(bp.c0));
  CHECK(ps.lower_ok);
  CHECK(ps.upper_ok);
  CHECK(ps.v[40 * 81 + 40] == 1.0);
  CHECK(elliptic::profile_upper_check(ps, ps.c, 1.0));

  // Discrete maximum principle through w <= 2.
  double boundary = 0.0, interior = 0.0;
  for (std::size_t j = 0; j < ps.n; ++j) {
    for (std::size_t i = 0; i < ps.n; ++i) {
      const bool edge = i == 0 || j == 0 || i + 1 == ps.n || j + 1 == ps.n;
      (edge ? boundary : interior) = std::max(edge ? boundary : interior, ps.at(i, j));
    }
  }
  CHECK(interior <= 2 * boundary);
}

TEST_CASE("clamping of r and c to the admissible range") {
  const auto ps = elliptic::solve_profile(drift_laplacian(), Field(1.0), 1.0, 0.5, 0.0, 51);
  CHECK(ps.r == ps.r0);
  CHECK(ps.r0 == doctest::Approx(std::numbers::ln2 / 8));
  CHECK(ps.c == ps.c0);
  CHECK(ps.c0 > 0);
}

TEST_CASE("profile bounds over operators, weights, dimensions and lambda") {
  const Field weights[] = {Field(1.0), Field::parse("x1^2"), Field::parse("r^2")};
  const Coefficients ops[] = {laplacian(), drift_laplacian()};
  for (const auto& L : ops) {
    for (const auto& g : weights) {
      for (int dim : {1, 2}) {
        for (double lam : {1.0, std::exp(2.0), std::exp(4.0)}) {
          const auto ps = elliptic::solve_profile(L, g, lam, 1.0, 0.0, dim == 1 ? 401 : 41, dim);
          CHECK(ps.lower_ok);
          CHECK(ps.upper_ok);
          CHECK(ps.v[dim == 1 ? 200 : 20 * 41 + 20] == 1.0);
          CHECK(elliptic::profile_upper_check(ps, ps.c, 1.0));
        }
      }
    }
  }
}

TEST_CASE("strong drift keeps the bounds") {
  // r <= r0 forces |a1| h / (2 a11) < log 2 / 4, so the central stencil is already monotone.
  Coefficients L;
  L.a1 = Field(-80.0);
  const auto ps = elliptic::solve_profile(L, Field(1.0), 9.0, 1.0, 0.0, 3);
  CHECK_FALSE(ps.upwinded);
  CHECK(ps.lower_ok);
  CHECK(ps.upper_ok);
}

TEST_CASE("second-order grid convergence for smooth coefficients") {
  const auto L = drift_laplacian();
  const Field g = Field::parse("x1^2");
  const double lam = std::exp(2.0);
  const auto a = elliptic::solve_profile(L, g, lam, 1.0, 0.0, 41);
  const auto b = elliptic::solve_profile(L, g, lam, 1.0, 0.0, 81);
  const auto c = elliptic::solve_profile(L, g, lam, 1.0, 0.0, 161);
  const double ratio = max_abs_diff_on_coarse(a, b) / max_abs_diff_on_coarse(b, c);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("fabricated profile below the lower bound fails the growth check") {
  auto ps = elliptic::solve_profile(laplacian(), Field(1.0), 4.0, 0.25, 1.0, 101);
  ps.u_center = 1e-6;
  for (std::size_t i = 0; i < ps.u.size(); ++i) ps.v[i] = ps.u[i] / ps.u_center;
  CHECK_FALSE(elliptic::profile_upper_check(ps, ps.c, 1.0));
}

TEST_CASE("solver preconditions") {
  CHECK_THROWS_AS(elliptic::solve_profile(laplacian(), Field(1.0), 0.5, 0.1, 1, 11), PreconditionError);
  CHECK_THROWS_AS(elliptic::solve_profile(laplacian(), Field(1.0), 2, 0.1, 1, 10), PreconditionError);
  CHECK_THROWS_AS(elliptic::solve_profile(laplacian(), Field(1.0), 2, 0.1, 1, 11, 3), PreconditionError);
  CHECK_THROWS_AS(elliptic::solve_profile(laplacian(), Field::parse("x1"), 2, 0.1, 1, 11), PreconditionError);
}
