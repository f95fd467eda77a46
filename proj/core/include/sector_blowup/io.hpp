#pragma once

#include <string>
#include <vector>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/evolve.hpp"
#include "sector_blowup/ode_blowup.hpp"

namespace sector_blowup {

// All writers emit the shortest round-trippable decimal form, so identical
// runs produce byte-identical files.

// ThetaField CSV: "# parity=odd|even" header line, then theta,value rows.
void write_theta_field(const std::string& path, const ThetaField& field);
ThetaField read_theta_field(const std::string& path);

// Planar samples: x1,x2,value rows.
void write_planar_sample(const std::string& path, const PlanarSample& sample);
PlanarSample read_planar_sample(const std::string& path, double alpha);

// Per-step run diagnostics; column order is part of the interface:
// t,dt,g_linf,g_l1,P_at_L,P_at_0,Gp_at_L,Gp_at_0,blowup_functional,
// min_g,min_gp,min_P,min_Pp,min_PplusPpp,balance_residual
void write_diagnostics(const std::string& path,
                       const std::vector<DiagnosticsRow>& rows);

// Per-target sector solve output: x1,x2,psi,du1,du2,h11,h12,h22.
struct SectorOutputRow {
  double x1, x2, psi, du1, du2, h11, h12, h22;
};
void write_sector_output(const std::string& path,
                         const std::vector<SectorOutputRow>& rows);

// ODE trajectories with running relative invariant drift column(s).
void write_riccati_trajectory(const std::string& path,
                              const RiccatiTrajectory& traj);
void write_corner_trajectory(const std::string& path,
                             const CornerTrajectory& traj);

// Sector field samples in polar form: r,theta,value rows.
struct PolarSamples {
  std::vector<double> r, theta, value;
};
PolarSamples read_polar_samples(const std::string& path);

}  // namespace sector_blowup
