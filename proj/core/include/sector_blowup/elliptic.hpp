#pragma once

#include <array>
#include <cstddef>

#include "sector_blowup/angular.hpp"

namespace sector_blowup {

// Solution bundle for the angular elliptic problem G'' + 4G = g, G(0)=G(L)=0,
// g odd. Gpp is recovered algebraically as g - 4G so no differencing order is
// lost at the boundary.
struct StreamSolution {
  ThetaField G;
  ThetaField Gp;
  ThetaField Gpp;
  ThetaField source;

  double residual_inf() const;  // max |4G + G'' - g|
};

// Closed-form kernel solve, valid only at L = pi/4:
//   G(t) = 1/4 int_0^{pi/4} (|sin(2t-2s)| - |sin(2t+2s)|) g(s) ds
// with G' from its explicit representation. Quadrature panels split at the
// kernel kink s = t.
StreamSolution solve_stream_kernel(const ThetaField& g);

// Second-order centered boundary-value discretization for any 0 < L < pi/2,
// solved on [0, L] with G(0) = G(L) = 0 pinned by oddness.
StreamSolution solve_stream_fd(const ThetaField& g);

// Numerov (4th-order compact) variant of the same boundary-value problem.
// Used by the time integrator, whose residual diagnostics need better than
// O(h^2) from the stream solve.
StreamSolution solve_stream_numerov(const ThetaField& g);

// Boundary derivatives straight from the quadrature identities
//   G'(L) = (1/sin 2L) int g sin(2t) dt
//   G'(0) = (cos 2L / sin 2L) int g sin(2t) dt - int g cos(2t) dt,
// independent of any global solve.
struct BoundaryDerivatives {
  double at_zero;
  double at_L;
};
BoundaryDerivatives gprime_boundary(const ThetaField& g);

// Lower-bound constant of the monotone-mass estimate G'(L) >= c(L) int g
// for g, g' >= 0 (half of the mass sits in [L/2, L] where sin(2t) is
// bounded below).
double mass_bound_constant(double L);

// Homogeneous-velocity reconstruction u = 2 r G theta_hat - r G' r_hat.
std::array<double, 2> velocity_from_g(const StreamSolution& sol, double r,
                                      double theta);

}  // namespace sector_blowup
