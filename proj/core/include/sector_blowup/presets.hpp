#pragma once

#include <string>
#include <vector>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/sector_green.hpp"

namespace sector_blowup {

// Named 1D initial data on a given grid.
struct Preset1D {
  ThetaField g0;
  ThetaField P0;
};

// names: zero, blowup_quadratic (g=0, P=theta^2), euler_sin2theta
// (g=sin 2theta, P=0). Unknown names raise with the valid list.
Preset1D make_preset_1d(const std::string& name, const AngularGrid& grid);
bool is_preset_1d(const std::string& name);

// Named sector sources for Poisson solves and probes.
// names: constant_one, critical_source (the log-example Laplacian
// 2a r^(a-2) sin(a theta)), homogeneous_half (r^(1/2) sin(a theta)), bump
// (compact radial bump).
SectorField make_sector_preset(const std::string& name, double beta);
bool is_sector_preset(const std::string& name);

std::vector<std::string> preset_names_1d();
std::vector<std::string> sector_preset_names();

}  // namespace sector_blowup
