#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace sector_blowup {

enum class OdeHalt { Completed, BlowupDetected };

// (A, B) state of the comparison system A' = cB, B' = cBA. The combination
// B - A^2/2 is an exact first integral.
struct RiccatiState {
  double t = 0.0;
  double A = 0.0;
  double B = 0.0;
  double c = 1.0;
};

struct RiccatiTrajectory {
  std::vector<double> t, A, B;
  OdeHalt halt = OdeHalt::Completed;
  double blowup_time = 0.0;  // meaningful when halt == BlowupDetected

  // Max drift of B - A^2/2, relative to the running magnitude.
  double invariant_drift() const;
};

RiccatiTrajectory integrate_riccati(const RiccatiState& s0, double t_end,
                                    double rtol);

// Closed-form blow-up time of the reduced scalar equation
// A' = c(K + A^2/2), K = B0 - A0^2/2; nullopt when the B-component stays
// finite for all time.
std::optional<double> riccati_blowup_time(double c, double A0, double B0);

// (A, B, C) corner state: A' = C, B' = -AC/(1-b^2), C' = -b^2 AB/(1-b^2)
// with b = beta. Exact first integrals: b^2 B^2 - C^2 and B + A^2/(2(1-b^2)).
struct CornerState {
  double t = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double beta = 0.25;
};

struct CornerTrajectory {
  std::vector<double> t, A, B, C;
  double beta = 0.25;
  OdeHalt halt = OdeHalt::Completed;
  double blowup_time = 0.0;
};

CornerTrajectory integrate_corner(const CornerState& s0, double t_end,
                                  double rtol);

// Max relative drifts of the two corner first integrals along a trajectory.
struct CornerInvariantDrift {
  double quadratic;   // beta^2 B^2 - C^2
  double energy;      // B + A^2 / (2 (1 - beta^2))
};
CornerInvariantDrift corner_invariants(const CornerTrajectory& traj);

// Magnitude at which a trajectory is declared blown up; quadratic growth
// makes the estimate insensitive to the exact value at this size.
inline constexpr double kOdeBlowupThreshold = 1e12;

}  // namespace sector_blowup
