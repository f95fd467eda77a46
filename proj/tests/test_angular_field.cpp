#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sector_blowup/angular.hpp"

using namespace sector_blowup;

TEST_CASE("grid guards") {
  CHECK_THROWS(make_grid(M_PI / 2.0, 65));   // coercivity limit
  CHECK_THROWS(make_grid(-0.1, 65));
  CHECK_THROWS(make_grid(0.6, 1));
  const auto grid = make_grid(M_PI / 4.0, 65);
  CHECK(grid.size() == 65);
  CHECK(grid.node(64) == doctest::Approx(M_PI / 4.0));
  CHECK(grid.spacing() == doctest::Approx(M_PI / 4.0 / 64.0));
}

TEST_CASE("parity reflection in value_at") {
  const auto grid = make_grid(M_PI / 4.0, 129);
  const auto odd = ThetaField::sample(grid, Parity::Odd,
                                      [](double t) { return std::sin(2.0 * t); });
  const auto even = ThetaField::sample(grid, Parity::Even,
                                       [](double t) { return std::cos(2.0 * t); });
  for (double t : {0.05, 0.2, 0.7}) {
    CHECK(odd.value_at(-t) == doctest::Approx(-odd.value_at(t)).epsilon(1e-12));
    CHECK(even.value_at(-t) == doctest::Approx(even.value_at(t)).epsilon(1e-12));
  }
  CHECK(odd.value_at(0.1) == doctest::Approx(std::sin(0.2)).epsilon(1e-6));
}

TEST_CASE("derivative is 4th order and flips parity") {
  double prev_err = 0.0;
  for (std::size_t n : {65, 129, 257}) {
    const auto grid = make_grid(M_PI / 4.0, n);
    const auto f = ThetaField::sample(grid, Parity::Odd,
                                      [](double t) { return std::sin(2.0 * t); });
    const auto d = f.derivative();
    CHECK(d.parity() == Parity::Even);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::fabs(d[i] - 2.0 * std::cos(2.0 * grid.node(i))));
    if (prev_err > 0.0) CHECK(prev_err / err > 12.0);  // ~2^4 per halving
    prev_err = err;
  }
}

TEST_CASE("integral quadrature") {
  const auto grid = make_grid(M_PI / 4.0, 129);
  const auto f = ThetaField::sample(grid, Parity::Odd,
                                    [](double t) { return std::sin(2.0 * t); });
  CHECK(f.integral() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ThetaField::zeros(grid, Parity::Even).integral() == 0.0);
}

TEST_CASE("holder norm of planar samples") {
  PlanarSample flat;
  flat.alpha = 0.5;
  for (int i = 0; i < 5; ++i) {
    flat.x1.push_back(0.2 * i);
    flat.x2.push_back(0.1);
    flat.values.push_back(3.0);
  }
  CHECK(holder_seminorm(flat) == doctest::Approx(0.0));
  CHECK(holder_norm(flat) == doctest::Approx(3.0));

  // |x|^alpha has seminorm exactly 1 witnessed by pairs through the origin.
  PlanarSample root = flat;
  for (std::size_t i = 0; i < root.values.size(); ++i)
    root.values[i] = std::pow(std::hypot(root.x1[i], root.x2[i]), 0.5);
  CHECK(holder_seminorm(root) <= 1.0 + 1e-12);
  CHECK(holder_seminorm(root) > 0.5);
}

TEST_CASE("ring norm drops the weighted origin sample") {
  PlanarSample s;
  s.alpha = 0.5;
  s.x1 = {0.0, 0.5, 1.0};
  s.x2 = {0.0, 0.0, 0.0};
  s.values = {7.0, 1.0, 1.0};
  std::vector<double> deriv = {std::nan(""), 2.0, 2.0};
  const double n = ring_holder_norm(s, 1, &deriv);
  CHECK(std::isfinite(n));
  CHECK(n >= 7.0);  // sup term still sees the origin value
}

TEST_CASE("product rule probe is finite and scale free") {
  PlanarSample f, h;
  f.alpha = h.alpha = 0.5;
  for (int i = 0; i <= 8; ++i) {
    const double x = 0.125 * i;
    f.x1.push_back(x);
    f.x2.push_back(0.3);
    f.values.push_back(x);  // vanishes at the first (origin) sample
    h.x1.push_back(x);
    h.x2.push_back(0.3);
    h.values.push_back(std::cos(x));
  }
  f.x1[0] = f.x2[0] = 0.0;
  h.x1[0] = h.x2[0] = 0.0;
  h.values[0] = 1.0;
  const double c = product_rule_probe(f, h, 0.5);
  CHECK(c > 0.0);
  CHECK(c < 50.0);
}

TEST_CASE("1d holder norm of a smooth odd profile") {
  const auto grid = make_grid(M_PI / 4.0, 129);
  const auto f = ThetaField::sample(grid, Parity::Odd,
                                    [](double t) { return std::sin(2.0 * t); });
  const double n = field_holder_norm(f, 0.5);
  CHECK(n >= 1.0);   // sup term alone is 1
  CHECK(n <= 6.0);   // Lipschitz constant 2 over width pi/2
}
