#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sector_blowup/ode_blowup.hpp"

using namespace sector_blowup;

TEST_CASE("closed-form blow-up times") {
  // K = B0 - A0^2/2 > 0: arctan branch.
  auto t = riccati_blowup_time(1.0, 0.0, 1.0);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-14));

  // K = 0 with A0 > 0: T = 2/(c A0).
  t = riccati_blowup_time(2.0, 1.0, 0.5);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(1.0).epsilon(1e-14));

  // K < 0 with A0 > sqrt(-2K): logarithmic branch.
  t = riccati_blowup_time(1.0, 2.0, 1.0);  // K = -1, a = sqrt(2)
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(std::log((2.0 + std::sqrt(2.0)) /
                                       (2.0 - std::sqrt(2.0))) /
                              std::sqrt(2.0))
                  .epsilon(1e-12));

  // Finite branches.
  CHECK_FALSE(riccati_blowup_time(1.0, -1.0, 0.5).has_value());  // K = 0, A0 < 0
  CHECK_FALSE(riccati_blowup_time(1.0, 0.5, 0.0).has_value());   // K < 0, small A0
  CHECK_FALSE(riccati_blowup_time(1.0, -2.0, 1.0).has_value());
}

TEST_CASE("integration reproduces the closed form") {
  const double rtol = 1e-8;
  struct Case { double c, a0, b0; };
  for (const Case k : {Case{1.0, 0.0, 1.0}, Case{0.5, 1.0, 2.0},
                       Case{2.0, 1.0, 0.5}}) {
    const auto exact = riccati_blowup_time(k.c, k.a0, k.b0);
    REQUIRE(exact.has_value());
    const auto tr = integrate_riccati({0.0, k.a0, k.b0, k.c}, 2.0 * *exact, rtol);
    REQUIRE(tr.halt == OdeHalt::BlowupDetected);
    CHECK(tr.blowup_time == doctest::Approx(*exact).epsilon(1e-5));
    CHECK(tr.invariant_drift() <= 10.0 * rtol);
  }
}

TEST_CASE("non-blow-up trajectory completes") {
  const auto tr = integrate_riccati({0.0, -1.0, 0.5, 1.0}, 5.0, 1e-8);
  CHECK(tr.halt == OdeHalt::Completed);
  CHECK(tr.t.back() == doctest::Approx(5.0));
  CHECK(tr.invariant_drift() <= 1e-7);
}

TEST_CASE("invariant drift detects a corrupted trajectory") {
  auto tr = integrate_riccati({0.0, 0.0, 1.0, 1.0}, 1.5, 1e-8);
  REQUIRE(tr.t.size() > 10);
  for (std::size_t i = tr.t.size() / 2; i < tr.t.size(); ++i)
    tr.B[i] *= 1.25;
  CHECK(tr.invariant_drift() >= 0.1);
}

TEST_CASE("corner first integrals at the reference point") {
  const double beta = 0.25;
  const CornerState s0{0.0, 1.0, -1.0, 1.0, beta};
  CHECK(beta * beta * s0.B * s0.B - s0.C * s0.C ==
        doctest::Approx(-15.0 / 16.0).epsilon(1e-14));
  CHECK(s0.B + s0.A * s0.A / (2.0 * (1.0 - beta * beta)) ==
        doctest::Approx(-7.0 / 15.0).epsilon(1e-14));

  const auto tr = integrate_corner(s0, 50.0, 1e-8);
  CHECK(tr.halt == OdeHalt::BlowupDetected);
  const auto drift = corner_invariants(tr);
  CHECK(drift.quadratic <= 1e-7);
  CHECK(drift.energy <= 1e-7);
}

TEST_CASE("corner blow-up time is tolerance reproducible") {
  const CornerState s0{0.0, 1.0, -1.0, 1.0, 0.25};
  const auto coarse = integrate_corner(s0, 50.0, 1e-8);
  const auto fine = integrate_corner(s0, 50.0, 1e-9);
  REQUIRE(coarse.halt == OdeHalt::BlowupDetected);
  REQUIRE(fine.halt == OdeHalt::BlowupDetected);
  CHECK(coarse.blowup_time ==
        doctest::Approx(fine.blowup_time).epsilon(1e-4));
}

TEST_CASE("stationary corner data stays put") {
  // A = C = 0 is an equilibrium line of the system.
  const auto tr = integrate_corner({0.0, 0.0, 2.0, 0.0, 0.3}, 3.0, 1e-8);
  CHECK(tr.halt == OdeHalt::Completed);
  CHECK(std::fabs(tr.A.back()) < 1e-12);
  CHECK(tr.B.back() == doctest::Approx(2.0).epsilon(1e-12));
}
