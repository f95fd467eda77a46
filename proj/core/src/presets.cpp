#include "sector_blowup/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace sector_blowup {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names_1d() {
  return {"zero", "blowup_quadratic", "euler_sin2theta"};
}

std::vector<std::string> sector_preset_names() {
  return {"constant_one", "critical_source", "homogeneous_half", "bump"};
}

bool is_preset_1d(const std::string& name) {
  for (const auto& n : preset_names_1d()) {
    if (n == name) return true;
  }
  return false;
}

bool is_sector_preset(const std::string& name) {
  for (const auto& n : sector_preset_names()) {
    if (n == name) return true;
  }
  return false;
}

Preset1D make_preset_1d(const std::string& name, const AngularGrid& grid) {
  if (name == "zero") {
    return {ThetaField::zeros(grid, Parity::Odd),
            ThetaField::zeros(grid, Parity::Even)};
  }
  if (name == "blowup_quadratic") {
    return {ThetaField::zeros(grid, Parity::Odd),
            ThetaField::sample(grid, Parity::Even,
                               [](double t) { return t * t; })};
  }
  if (name == "euler_sin2theta") {
    return {ThetaField::sample(grid, Parity::Odd,
                               [](double t) { return std::sin(2.0 * t); }),
            ThetaField::zeros(grid, Parity::Even)};
  }
  throw std::invalid_argument("unknown 1D preset '" + name +
                              "'; valid: " + join(preset_names_1d()));
}

SectorField make_sector_preset(const std::string& name, double beta) {
  const double a = 1.0 / beta;
  if (name == "constant_one") {
    return [](double, double) { return 1.0; };
  }
  if (name == "critical_source") {
    // Laplacian of r^a ln(r) sin(a theta); homogeneity exponent a - 2.
    return [a](double r, double t) {
      return 2.0 * a * std::pow(r, a - 2.0) * std::sin(a * t);
    };
  }
  if (name == "homogeneous_half") {
    return [a](double r, double t) {
      return std::sqrt(r) * std::sin(a * t);
    };
  }
  if (name == "bump") {
    // Compact radial bump, vanishing on both rays.
    return [a](double r, double t) {
      if (r >= 1.5) return 0.0;
      const double s = r / 1.5;
      return std::exp(-1.0 / (1.0 - s * s)) * std::sin(a * t);
    };
  }
  throw std::invalid_argument("unknown sector preset '" + name +
                              "'; valid: " + join(sector_preset_names()));
}

}  // namespace sector_blowup
