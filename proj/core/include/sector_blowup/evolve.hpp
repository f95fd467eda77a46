#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/elliptic.hpp"

namespace sector_blowup {

// Instantaneous state of the angular system
//   dg/dt + 2 G dg/dtheta = sin(theta) P + cos(theta) dP/dtheta
//   dP/dt + 2 G dP/dtheta = P dG/dtheta
// together with the stream solve G'' + 4G = g kept current.
struct State1D {
  double t = 0.0;
  ThetaField g;      // odd
  ThetaField P;      // even
  StreamSolution stream;
};

// Minima over [0, L] of the quantities whose nonnegativity the transport
// structure preserves.
struct SignReport {
  double min_g;
  double min_gp;
  double min_P;
  double min_Pp;
  double min_PplusPpp;

  bool nonnegative(double tol) const {
    return min_g >= -tol && min_gp >= -tol && min_P >= -tol &&
           min_Pp >= -tol && min_PplusPpp >= -tol;
  }
};

// Discrete check of the three blow-up hypotheses on the initial data.
struct HypothesisReport {
  bool g_nonneg_increasing;   // g0 >= 0 and g0' >= 0
  bool P_sign_structure;      // P0, P0', P0 + P0'' >= 0
  bool boundary_gap;          // P0(L) > sqrt(2) P0(0)

  bool all() const {
    return g_nonneg_increasing && P_sign_structure && boundary_gap;
  }
};

struct DiagnosticsRow {
  double t;
  double dt;
  double g_linf;
  double g_l1;               // int_0^L g
  double P_at_L;
  double P_at_0;
  double Gp_at_L;
  double Gp_at_0;
  double blowup_functional;  // g_l1 * sqrt(max(P_at_L, 0))
  double min_g;
  double min_gp;
  double min_P;
  double min_Pp;
  double min_PplusPpp;
  double balance_residual;
};

enum class RunHalt { Completed, BlowupDetected, StepCollapse, BlowupSuspected };

struct RunConfig {
  double t_end = 1.0;
  double cfl = 0.5;
  double dt_init = 0.0;      // 0 = derive from CFL
  double dt_min = 1e-10;
  double blowup_cap = 1e6;   // multiples of the initial data scale
  std::size_t output_stride = 1;
  std::size_t max_steps = 50'000'000;
};

struct RunResult {
  RunHalt halt;
  State1D final_state;
  std::vector<DiagnosticsRow> diagnostics;
  // Per-row comparison constant for the quadratic minorant system, and its
  // running minimum (what the comparison trajectory actually uses).
  std::vector<double> comparison_c;
  double comparison_c_min = 0.0;
};

// Build the t=0 state: validates parities, solves the stream problem.
State1D init_state(const ThetaField& g0, const ThetaField& P0);

HypothesisReport hypothesis_report(const State1D& s);

SignReport check_signs(const State1D& s);

// One explicit RK4 step of the method of lines; the stream problem is
// re-solved at every stage. The caller owns the CFL restriction.
State1D step(const State1D& s, double dt);

// Right side of the mass balance identity
//   d/dt int_0^L g = 2 int sin(theta) P + P(L) cos(L) - P(0)
//                    + G'(L)^2 - G'(0)^2
// with the boundary derivatives taken from the quadrature identities.
double balance_rhs(const State1D& s);

// Integrate until t_end or until a stopping rule fires. Diagnostics are
// emitted every output_stride steps; the balance_residual column is filled
// after the run by 5-point time differencing of the mass column.
RunResult run(const State1D& s0, const RunConfig& cfg);

// Max deviations of the boundary trace ODEs d/dt P(L) = G'(L) P(L) and
// d/dt P(0) = G'(0) P(0) along recorded diagnostics, skipping the final 5%
// of a blow-up run where the traces steepen beyond the output cadence.
struct BoundaryOdeResiduals {
  double at_L;
  double at_zero;
};
BoundaryOdeResiduals boundary_ode_residual(const std::vector<DiagnosticsRow>& diag);

// Least-squares fit of 1/||g||_inf against t over the final decade of
// growth; the intercept extrapolates the blow-up time. nullopt = NoFit.
struct BlowupFit {
  double t_star;
  double width;  // rms fit residual translated into time units
};
std::optional<BlowupFit> estimate_blowup_time(const std::vector<DiagnosticsRow>& diag);

// Twin-run separation ratio max_t (||g-gbar||_C0 + ||P-Pbar||_C1) / eps over
// a short window, with the twin seeded at distance eps from base.
struct StabilityResult {
  bool conclusive;
  double ratio;
};
StabilityResult stability_probe(const State1D& base, double eps,
                                double window = 0.05);

}  // namespace sector_blowup
