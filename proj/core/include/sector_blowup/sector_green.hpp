#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace sector_blowup {

// Wedge Omega_beta = { (r, theta) : 0 < theta < beta*pi } with the conformal
// exponent a = 1/beta. beta <= 1/2 keeps the mapped angles inside (-pi, pi)
// on the principal branch.
struct SectorSpec {
  explicit SectorSpec(double beta_in);
  double beta;
  double exponent() const { return 1.0 / beta; }
  double opening() const;          // beta * pi
  bool contains(std::complex<double> z) const;  // open sector membership
};

// Point with both Cartesian and polar coordinates kept consistent.
struct SectorPoint {
  double x1, x2;
  double r, theta;

  static SectorPoint from_cartesian(double x1, double x2);
  static SectorPoint from_polar(double r, double theta);
  std::complex<double> z() const { return {x1, x2}; }
};

// Panel quadrature parameters for integrals over the (truncated) sector.
struct QuadratureSpec {
  double r_max = 40.0;
  int radial_panels = 48;
  int angular_panels = 12;
  int singular_depth = 12;
  int gauss_order = 8;
  int threads = 0;  // 0 = hardware default; applies across targets
};

// Dirichlet Green's function of the sector: conformal image of the
// half-plane kernel, (1/2pi) ln(|z^a - w^a| / |conj(z)^a - w^a|).
double green(const SectorSpec& spec, std::complex<double> z,
             std::complex<double> w);

// Green's function of the sector truncated by the arc r = R (half-disk
// image in the mapped plane, with S = R^a playing the disk radius).
double green_disk(const SectorSpec& spec, double R, std::complex<double> z,
                  std::complex<double> w);

// z-derivative kernels of the Green's function: K gives the gradient of the
// Poisson integral, P = dK/dz gives its Hessian.
std::complex<double> kernel_K(const SectorSpec& spec, std::complex<double> z,
                              std::complex<double> w);
std::complex<double> kernel_P(const SectorSpec& spec, std::complex<double> z,
                              std::complex<double> w);

// Scalar field on the sector given in polar form.
using SectorField = std::function<double(double r, double theta)>;

// Psi(z) = int_Omega G(z, w) f(w) dA(w) at each target; boundary targets
// return exactly 0.
std::vector<double> poisson_solve(const SectorSpec& spec, const SectorField& f,
                                  const QuadratureSpec& quad,
                                  const std::vector<std::complex<double>>& targets);

// Gradient of Psi from the K-kernel quadrature.
std::array<double, 2> grad_psi(const SectorSpec& spec, const SectorField& f,
                               const QuadratureSpec& quad,
                               std::complex<double> z);

struct HessianPsi {
  double h11, h12, h22;
  double trace() const { return h11 + h22; }
};

// Hessian of Psi: P-kernel quadrature with the singular value subtracted,
// int P(z,w) (f(w) - f(z)) dw, plus the exact constant contribution of
// f(z) itself (calibrated once against the f == 1 closed form).
HessianPsi hessian_psi(const SectorSpec& spec, const SectorField& f,
                       const QuadratureSpec& quad, std::complex<double> z);

// Planar Biot-Savart kernel (x - y)^perp / (2 pi |x - y|^2) symmetrized over
// the 4 reflections of the quadrant; returns the velocity at x from the
// quadrant vorticity.
std::array<double, 2> symmetrized_velocity(
    const std::function<double(double, double)>& omega, double support_radius,
    const QuadratureSpec& quad, std::array<double, 2> x);

// max over targets of |u(x)| / sup |y| |omega(y)|; the comparison bound says
// this cannot exceed 1.
double symmetrized_velocity_bound(
    const std::function<double(double, double)>& omega, double support_radius,
    const QuadratureSpec& quad);

// sup over dyadic targets |x| in {2^-4 .. 1} of |u(x)| / |x|^(1+alpha), for
// quadrant vorticities with |omega(y)| <= C |y|^alpha.
double decay_probe(double alpha,
                   const std::function<double(double, double)>& omega,
                   double support_radius, const QuadratureSpec& quad);

// Quadratic-coefficient fit of Psi near the corner, reported in two sector
// orientation conventions: the ambient one (rays theta = 0 and beta*pi) and
// the symmetric one (rays theta = +-beta*pi/2). Velocity is u = (-d2 Psi,
// d1 Psi).
struct CornerFit {
  // Fitted quadratic form Psi ~ (c11 x1^2 + 2 c12 x1 x2 + c22 x2^2) / 2.
  double c11, c12, c22;
  // Velocity gradient entries implied by the fit, ambient orientation.
  double d1u1, d2u2, d1u2, d2u1;
  // Same after rotating the sector to be symmetric about the x1-axis.
  double sym_d1u1, sym_d2u2, sym_d1u2, sym_d2u1;
  // Vertex predictions omega0/(1-beta^2) and beta^2*omega0/(1-beta^2).
  double predicted_d1u2, predicted_d2u1;
};
CornerFit taylor_corner_probe(const SectorSpec& spec, const SectorField& omega,
                              const QuadratureSpec& quad);

// Discrete Holder data for the explicit critical-regularity example
// Psi = r^a ln(r) sin(a theta) at alpha = a - 2: the mixed second
// derivative's C^alpha seminorm on grids of spacing h, h/2, h/4, ... versus
// the bounded seminorms of the source and of the subcritical exponent.
struct CounterexampleProbe {
  std::vector<double> mixed_seminorm;        // at alpha: grows like log(1/h)
  std::vector<double> source_seminorm;       // at alpha: stays bounded
  std::vector<double> subcritical_seminorm;  // at alpha/2: stays bounded
};
CounterexampleProbe critical_counterexample_probe(double beta, int refinements,
                                                  int threads = 0);

}  // namespace sector_blowup
