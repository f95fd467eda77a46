#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "sector_blowup/presets.hpp"
#include "sector_blowup/sector_green.hpp"

using namespace sector_blowup;
using cplx = std::complex<double>;

namespace {
QuadratureSpec fast_quad() {
  QuadratureSpec q;
  q.radial_panels = 32;
  q.angular_panels = 10;
  q.gauss_order = 6;
  q.singular_depth = 10;
  return q;
}
}  // namespace

TEST_CASE("spec guards") {
  CHECK_THROWS(SectorSpec(0.0));
  CHECK_THROWS(SectorSpec(0.6));
  const SectorSpec spec(0.25);
  CHECK(spec.opening() == doctest::Approx(M_PI / 4.0));
  CHECK(spec.contains(std::polar(1.0, 0.3)));
  CHECK_FALSE(spec.contains(std::polar(1.0, 1.0)));
  CHECK_FALSE(spec.contains(cplx(1.0, 0.0)));  // boundary ray is not interior
}

TEST_CASE("green function symmetry, sign, boundary vanishing") {
  const SectorSpec spec(0.4);
  const cplx z = std::polar(0.8, 0.5), w = std::polar(1.3, 0.9);
  CHECK(green(spec, z, w) == doctest::Approx(green(spec, w, z)).epsilon(1e-12));
  CHECK(green(spec, z, w) < 0.0);
  // Dirichlet condition on both rays.
  CHECK(std::fabs(green(spec, std::polar(0.7, 1e-13), w)) < 1e-9);
  CHECK(std::fabs(green(spec, std::polar(0.7, spec.opening() - 1e-13), w)) <
        1e-9);
}

TEST_CASE("truncated green function vanishes on the arc too") {
  const SectorSpec spec(0.4);
  const double R = 2.0;
  const cplx w = std::polar(1.1, 0.6);
  CHECK(std::fabs(green_disk(spec, R, std::polar(R, 0.5), w)) < 1e-9);
  CHECK(std::fabs(green_disk(spec, R, std::polar(0.7, 1e-13), w)) < 1e-9);
  // Deep inside, the truncation barely matters for nearby points.
  const cplx z = std::polar(0.9, 0.7);
  CHECK(green_disk(spec, 50.0, z, w) ==
        doctest::Approx(green(spec, z, w)).epsilon(1e-6));
}

TEST_CASE("kernel K is the z-derivative of green") {
  const SectorSpec spec(0.4);
  const cplx z = std::polar(0.9, 0.5), w = std::polar(1.2, 0.8);
  const double h = 1e-6;
  const double gx = (green(spec, z + h, w) - green(spec, z - h, w)) / (2 * h);
  const double gy =
      (green(spec, z + cplx(0, h), w) - green(spec, z - cplx(0, h), w)) /
      (2 * h);
  const cplx K = kernel_K(spec, z, w);
  // dG/dz = (dx - i dy)/2
  CHECK(K.real() == doctest::Approx(gx / 2.0).epsilon(1e-5));
  CHECK(K.imag() == doctest::Approx(-gy / 2.0).epsilon(1e-5));
}

TEST_CASE("kernel P is the z-derivative of K") {
  const SectorSpec spec(0.4);
  const cplx z = std::polar(0.9, 0.5), w = std::polar(1.2, 0.8);
  const double h = 1e-6;
  const cplx kx = (kernel_K(spec, z + h, w) - kernel_K(spec, z - h, w)) /
                  (2.0 * h);
  const cplx ky = (kernel_K(spec, z + cplx(0, h), w) -
                   kernel_K(spec, z - cplx(0, h), w)) /
                  (2.0 * h);
  const cplx P = kernel_P(spec, z, w);
  const cplx fd = (kx - cplx(0, 1) * ky) / 2.0;
  CHECK(std::abs(P - fd) / std::abs(P) < 1e-4);
}

TEST_CASE("P kernel has the Calderon-Zygmund size") {
  const SectorSpec spec(0.4);
  const cplx z = std::polar(0.8, 0.6);
  double worst = 0.0;
  for (double rr : {0.1, 0.4, 1.0, 2.5}) {
    for (double tt : {0.2, 0.6, 1.1}) {
      const cplx w = std::polar(rr, tt);
      const double d = std::abs(z - w);
      if (d < 1e-6) continue;
      worst = std::max(worst, std::abs(kernel_P(spec, z, w)) * d * d);
    }
  }
  CHECK(worst < 10.0);
}

TEST_CASE("poisson solve reproduces the quarter-sector quadratic") {
  const SectorSpec spec(0.25);
  const auto f = make_sector_preset("constant_one", 0.25);
  const auto quad = fast_quad();
  const std::vector<cplx> targets = {std::polar(0.5, 0.2),
                                     std::polar(1.0, 0.4),
                                     std::polar(1.4, 0.6)};
  const auto psi = poisson_solve(spec, f, quad, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double x1 = targets[i].real(), x2 = targets[i].imag();
    CHECK(psi[i] ==
          doctest::Approx((x2 * x2 - x1 * x2) / 2.0).epsilon(5e-3));
  }
  // Boundary targets return exactly zero.
  const auto zero = poisson_solve(spec, f, quad, {cplx(1.0, 0.0)});
  CHECK(zero[0] == 0.0);
}

TEST_CASE("hessian matches the closed form and refuses boundary points") {
  const SectorSpec spec(0.25);
  const auto f = make_sector_preset("constant_one", 0.25);
  const auto quad = fast_quad();
  const auto H = hessian_psi(spec, f, quad, std::polar(1.0, 0.4));
  CHECK(std::fabs(H.h11) < 2e-3);
  CHECK(H.h12 == doctest::Approx(-0.5).epsilon(2e-3));
  CHECK(H.h22 == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(H.trace() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS(hessian_psi(spec, f, quad, cplx(1.0, 0.0)));
}

TEST_CASE("corner fit vanishes on the diagonal in the symmetric frame") {
  const SectorSpec spec(0.25);
  const auto f = make_sector_preset("constant_one", 0.25);
  const auto fit = taylor_corner_probe(spec, f, fast_quad());
  CHECK(std::fabs(fit.sym_d1u1) < 5e-3);
  CHECK(std::fabs(fit.sym_d2u2) < 5e-3);
  CHECK(fit.d1u1 == doctest::Approx(0.5).epsilon(0.02));
  CHECK(fit.d2u2 == doctest::Approx(-0.5).epsilon(0.02));
}

TEST_CASE("sector presets") {
  CHECK(is_sector_preset("bump"));
  CHECK_FALSE(is_sector_preset("nope"));
  CHECK_THROWS(make_sector_preset("nope", 0.4));
  const auto f = make_sector_preset("homogeneous_half", 0.4);
  // Homogeneity degree 1/2 in r.
  CHECK(f(4.0, 0.3) == doctest::Approx(2.0 * f(1.0, 0.3)).epsilon(1e-12));
}
