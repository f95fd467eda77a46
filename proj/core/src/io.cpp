#include "sector_blowup/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sector_blowup {

namespace {

// Shortest decimal form that round-trips a double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::vector<double> split_row(const std::string& line, const std::string& path) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    try {
      out.push_back(std::stod(line.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw std::runtime_error("malformed CSV row in " + path + ": " + line);
    }
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

}  // namespace

void write_theta_field(const std::string& path, const ThetaField& field) {
  std::ofstream out = open_out(path);
  out << "# parity=" << (field.parity() == Parity::Odd ? "odd" : "even") << "\n";
  out << "theta,value\n";
  for (std::size_t i = 0; i < field.grid().size(); ++i) {
    out << fmt(field.grid().node(i)) << ',' << fmt(field[i]) << "\n";
  }
}

ThetaField read_theta_field(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# parity=", 0) != 0) {
    throw std::runtime_error("missing parity header in " + path);
  }
  const std::string tag = line.substr(9);
  Parity parity;
  if (tag == "odd") {
    parity = Parity::Odd;
  } else if (tag == "even") {
    parity = Parity::Even;
  } else {
    throw std::runtime_error("unknown parity '" + tag + "' in " + path);
  }
  std::vector<double> thetas, values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("theta", 0) == 0) continue;
    const std::vector<double> row = split_row(line, path);
    if (row.size() != 2) throw std::runtime_error("expected 2 columns in " + path);
    thetas.push_back(row[0]);
    values.push_back(row[1]);
  }
  if (thetas.size() < 3) throw std::runtime_error("too few rows in " + path);
  if (thetas.front() != 0.0) {
    throw std::runtime_error("grid must start at theta=0 in " + path);
  }
  const double L = thetas.back();
  const double h = L / static_cast<double>(thetas.size() - 1);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (std::abs(thetas[i] - static_cast<double>(i) * h) > 1e-9 * std::max(1.0, L)) {
      throw std::runtime_error("non-uniform grid in " + path);
    }
  }
  return ThetaField(make_grid(L, thetas.size()), std::move(values), parity);
}

void write_planar_sample(const std::string& path, const PlanarSample& sample) {
  std::ofstream out = open_out(path);
  out << "x1,x2,value\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out << fmt(sample.x1[i]) << ',' << fmt(sample.x2[i]) << ','
        << fmt(sample.values[i]) << "\n";
  }
}

PlanarSample read_planar_sample(const std::string& path, double alpha) {
  std::ifstream in = open_in(path);
  PlanarSample s;
  s.alpha = alpha;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x1", 0) == 0) continue;
    const std::vector<double> row = split_row(line, path);
    if (row.size() != 3) throw std::runtime_error("expected 3 columns in " + path);
    s.x1.push_back(row[0]);
    s.x2.push_back(row[1]);
    s.values.push_back(row[2]);
  }
  return s;
}

void write_diagnostics(const std::string& path,
                       const std::vector<DiagnosticsRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,dt,g_linf,g_l1,P_at_L,P_at_0,Gp_at_L,Gp_at_0,blowup_functional,"
         "min_g,min_gp,min_P,min_Pp,min_PplusPpp,balance_residual\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.dt) << ',' << fmt(r.g_linf) << ','
        << fmt(r.g_l1) << ',' << fmt(r.P_at_L) << ',' << fmt(r.P_at_0) << ','
        << fmt(r.Gp_at_L) << ',' << fmt(r.Gp_at_0) << ','
        << fmt(r.blowup_functional) << ',' << fmt(r.min_g) << ','
        << fmt(r.min_gp) << ',' << fmt(r.min_P) << ',' << fmt(r.min_Pp) << ','
        << fmt(r.min_PplusPpp) << ',' << fmt(r.balance_residual) << "\n";
  }
}

void write_sector_output(const std::string& path,
                         const std::vector<SectorOutputRow>& rows) {
  std::ofstream out = open_out(path);
  out << "x1,x2,psi,du1,du2,h11,h12,h22\n";
  for (const auto& r : rows) {
    out << fmt(r.x1) << ',' << fmt(r.x2) << ',' << fmt(r.psi) << ','
        << fmt(r.du1) << ',' << fmt(r.du2) << ',' << fmt(r.h11) << ','
        << fmt(r.h12) << ',' << fmt(r.h22) << "\n";
  }
}

void write_riccati_trajectory(const std::string& path,
                              const RiccatiTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,A,B,invariant_drift\n";
  if (traj.t.empty()) return;
  const double I0 = traj.B[0] - traj.A[0] * traj.A[0] / 2.0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double I = traj.B[i] - traj.A[i] * traj.A[i] / 2.0;
    const double sc = std::max(1.0, std::abs(traj.B[i]) +
                                        traj.A[i] * traj.A[i] / 2.0);
    out << fmt(traj.t[i]) << ',' << fmt(traj.A[i]) << ',' << fmt(traj.B[i])
        << ',' << fmt(std::abs(I - I0) / sc) << "\n";
  }
}

void write_corner_trajectory(const std::string& path,
                             const CornerTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,A,B,C,quadratic_drift,energy_drift\n";
  if (traj.t.empty()) return;
  const double b2 = traj.beta * traj.beta;
  const double inv = 1.0 / (1.0 - b2);
  const double q0 = b2 * traj.B[0] * traj.B[0] - traj.C[0] * traj.C[0];
  const double e0 = traj.B[0] + 0.5 * inv * traj.A[0] * traj.A[0];
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double q = b2 * traj.B[i] * traj.B[i] - traj.C[i] * traj.C[i];
    const double e = traj.B[i] + 0.5 * inv * traj.A[i] * traj.A[i];
    const double qs = std::max(1.0, b2 * traj.B[i] * traj.B[i] +
                                        traj.C[i] * traj.C[i]);
    const double es = std::max(1.0, std::abs(traj.B[i]) +
                                        0.5 * inv * traj.A[i] * traj.A[i]);
    out << fmt(traj.t[i]) << ',' << fmt(traj.A[i]) << ',' << fmt(traj.B[i])
        << ',' << fmt(traj.C[i]) << ',' << fmt(std::abs(q - q0) / qs) << ','
        << fmt(std::abs(e - e0) / es) << "\n";
  }
}

PolarSamples read_polar_samples(const std::string& path) {
  std::ifstream in = open_in(path);
  PolarSamples s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("r,", 0) == 0) continue;
    const std::vector<double> row = split_row(line, path);
    if (row.size() != 3) throw std::runtime_error("expected 3 columns in " + path);
    s.r.push_back(row[0]);
    s.theta.push_back(row[1]);
    s.value.push_back(row[2]);
  }
  return s;
}

}  // namespace sector_blowup
