#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sector_blowup/elliptic.hpp"

using namespace sector_blowup;

namespace {
ThetaField sin2(const AngularGrid& grid) {
  return ThetaField::sample(grid, Parity::Odd,
                            [](double t) { return std::sin(2.0 * t); });
}
double exact_G(double t) { return -t / 4.0 * std::cos(2.0 * t); }
}  // namespace

TEST_CASE("fd solver second order against the closed form") {
  double prev = 0.0;
  for (std::size_t n : {129, 257, 513}) {
    const auto grid = make_grid(M_PI / 4.0, n);
    const auto sol = solve_stream_fd(sin2(grid));
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::fabs(sol.G[i] - exact_G(grid.node(i))));
    if (prev > 0.0) CHECK(prev / err > 3.4);
    prev = err;
    CHECK(sol.residual_inf() < 1e-9);
  }
}

TEST_CASE("numerov solver fourth order") {
  double prev = 0.0;
  for (std::size_t n : {65, 129, 257}) {
    const auto grid = make_grid(M_PI / 4.0, n);
    const auto sol = solve_stream_numerov(sin2(grid));
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::fabs(sol.G[i] - exact_G(grid.node(i))));
    if (prev > 0.0) CHECK(prev / err > 10.0);
    prev = err;
  }
}

TEST_CASE("kernel solver agrees and gates on the angle") {
  const auto grid = make_grid(M_PI / 4.0, 257);
  const auto sol = solve_stream_kernel(sin2(grid));
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    err = std::max(err, std::fabs(sol.G[i] - exact_G(grid.node(i))));
  CHECK(err < 1e-7);

  const auto off = make_grid(0.6, 257);
  CHECK_THROWS(solve_stream_kernel(sin2(off)));
}

TEST_CASE("boundary derivatives from the quadrature identities") {
  const auto grid = make_grid(M_PI / 4.0, 513);
  const auto bd = gprime_boundary(sin2(grid));
  CHECK(bd.at_zero == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(bd.at_L == doctest::Approx(M_PI / 8.0).epsilon(1e-9));
}

TEST_CASE("boundary derivatives match the solved field on a generic angle") {
  const auto grid = make_grid(0.6, 513);
  const auto g = ThetaField::sample(grid, Parity::Odd, [](double t) {
    return std::sin(M_PI * t / 0.6) * t;
  });
  const auto sol = solve_stream_numerov(g);
  const auto bd = gprime_boundary(g);
  CHECK(sol.Gp[0] == doctest::Approx(bd.at_zero).epsilon(1e-5));
  CHECK(sol.Gp[grid.size() - 1] == doctest::Approx(bd.at_L).epsilon(1e-5));
}

TEST_CASE("mass bound constant") {
  const double L = M_PI / 4.0;
  CHECK(mass_bound_constant(L) ==
        doctest::Approx(0.5 * std::sin(L)).epsilon(1e-12));
  CHECK(mass_bound_constant(0.3) > 0.0);
}

TEST_CASE("velocity respects no-penetration at both rays") {
  const auto grid = make_grid(M_PI / 4.0, 257);
  const auto sol = solve_stream_numerov(sin2(grid));
  for (double r : {0.5, 1.0, 2.0}) {
    // On theta = 0 the angular component is 2 r G(0) = 0; same at theta = L.
    const auto u0 = velocity_from_g(sol, r, 0.0);
    const auto uL = velocity_from_g(sol, r, M_PI / 4.0);
    // normal at theta=0 is (0,1); at theta=L=pi/4 it is (-1,1)/sqrt(2)
    CHECK(std::fabs(u0[1]) < 1e-10);
    CHECK(std::fabs(-uL[0] + uL[1]) / std::sqrt(2.0) < 1e-8);
  }
}
