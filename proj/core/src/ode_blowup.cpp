#include "sector_blowup/ode_blowup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace sector_blowup {

namespace {

// Adaptive RK4 with step halving. Error control is per unit time, and the
// supplied first integrals take part in step acceptance alongside the
// embedded error estimate.
template <std::size_t N>
struct AdaptiveRk4 {
  using Vec = std::array<double, N>;
  std::function<Vec(const Vec&)> rhs;
  std::vector<std::function<double(const Vec&)>> invariants;
  // Per-invariant magnitude of the constituent terms, used to normalize
  // drift (the integrals are differences of large quantities near blow-up).
  std::vector<std::function<double(const Vec&)>> invariant_scales;
  double rtol = 1e-8;

  Vec rk4_step(const Vec& y, double h) const {
    const Vec k1 = rhs(y);
    Vec tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const Vec k2 = rhs(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const Vec k3 = rhs(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    const Vec k4 = rhs(tmp);
    Vec out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
  }

  static double magnitude(const Vec& y) {
    double m = 0.0;
    for (double v : y) m += std::abs(v);
    return m;
  }

  // Integrate until t_end or the blow-up threshold; on_sample is called at
  // every accepted step (including t = 0).
  OdeHalt run(Vec y, double t_end, double& blowup_time,
              const std::function<void(double, const Vec&)>& on_sample) const {
    double t = 0.0;
    double h = std::min(1e-2, t_end > 0.0 ? t_end / 16.0 : 1e-2);
    on_sample(t, y);

    const std::size_t max_steps = 20'000'000;
    for (std::size_t step = 0; step < max_steps && t < t_end; ++step) {
      h = std::min(h, t_end - t);
      if (h < 1e-15 * std::max(1.0, t)) {
        // Step collapse against the singularity counts as a detection.
        blowup_time = t;
        return OdeHalt::BlowupDetected;
      }
      const Vec coarse = rk4_step(y, h);
      const Vec fine = rk4_step(rk4_step(y, 0.5 * h), 0.5 * h);
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        err = std::max(err, std::abs(coarse[i] - fine[i]) / 15.0 /
                                std::max(1.0, std::abs(fine[i])));
      }
      // Per-unit-time budgets: total error and total relative invariant
      // drift both stay near rtol * elapsed time.
      const double tol = rtol * h;
      double inv_err = 0.0;
      for (std::size_t k = 0; k < invariants.size(); ++k) {
        const double drift = std::abs(invariants[k](fine) - invariants[k](y));
        const double sc = std::max(1.0, invariant_scales[k](fine));
        inv_err = std::max(inv_err, drift / sc);
      }
      if (err > tol || inv_err > tol) {
        h *= std::clamp(0.9 * std::pow(tol / std::max(std::max(err, inv_err), 1e-300), 0.25),
                        0.1, 0.5);
        continue;
      }
      if (magnitude(fine) > kOdeBlowupThreshold) {
        // Bisect the final step to localize the crossing time.
        double lo = 0.0, hi = h;
        for (int it = 0; it < 80 && hi - lo > 1e-16 * std::max(1.0, t + hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (magnitude(rk4_step(y, mid)) > kOdeBlowupThreshold) hi = mid;
          else lo = mid;
        }
        y = rk4_step(y, hi);
        t += hi;
        on_sample(t, y);
        blowup_time = t;
        return OdeHalt::BlowupDetected;
      }
      y = fine;
      t += h;
      on_sample(t, y);
      h *= std::clamp(0.9 * std::pow(tol / std::max(err, 1e-300), 0.25), 0.5, 2.0);
    }
    blowup_time = 0.0;
    return OdeHalt::Completed;
  }
};

}  // namespace

double RiccatiTrajectory::invariant_drift() const {
  if (t.empty()) return 0.0;
  const double I0 = B[0] - A[0] * A[0] / 2.0;
  double drift = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    scale = std::max(scale, std::abs(B[i]) + A[i] * A[i] / 2.0);
    drift = std::max(drift, std::abs(B[i] - A[i] * A[i] / 2.0 - I0) / scale);
  }
  return drift;
}

RiccatiTrajectory integrate_riccati(const RiccatiState& s0, double t_end,
                                    double rtol) {
  if (!(s0.c > 0.0)) throw std::invalid_argument("integrate_riccati: c must be positive");
  AdaptiveRk4<2> solver;
  const double c = s0.c;
  solver.rtol = rtol;
  solver.rhs = [c](const std::array<double, 2>& y) {
    return std::array<double, 2>{c * y[1], c * y[1] * y[0]};
  };
  solver.invariants = {[](const std::array<double, 2>& y) {
    return y[1] - y[0] * y[0] / 2.0;
  }};
  solver.invariant_scales = {[](const std::array<double, 2>& y) {
    return std::abs(y[1]) + y[0] * y[0] / 2.0;
  }};
  RiccatiTrajectory traj;
  traj.halt = solver.run({s0.A, s0.B}, t_end, traj.blowup_time,
                         [&](double t, const std::array<double, 2>& y) {
                           traj.t.push_back(s0.t + t);
                           traj.A.push_back(y[0]);
                           traj.B.push_back(y[1]);
                         });
  if (traj.halt == OdeHalt::BlowupDetected) traj.blowup_time += s0.t;
  return traj;
}

std::optional<double> riccati_blowup_time(double c, double A0, double B0) {
  if (!(c > 0.0)) throw std::invalid_argument("riccati_blowup_time: c must be positive");
  const double K = B0 - A0 * A0 / 2.0;  // invariant value; B = K + A^2/2
  if (K > 0.0) {
    const double s = std::sqrt(2.0 * K);
    return (M_PI / 2.0 - std::atan(A0 / s)) / (c * std::sqrt(K / 2.0));
  }
  if (K == 0.0) {
    if (A0 > 0.0) return 2.0 / (c * A0);
    return std::nullopt;  // A relaxes to 0, B stays A^2/2 -> bounded
  }
  const double a = std::sqrt(-2.0 * K);
  if (A0 > a) return std::log((A0 + a) / (A0 - a)) / (c * a);
  return std::nullopt;  // trapped below the separatrix
}

CornerTrajectory integrate_corner(const CornerState& s0, double t_end,
                                  double rtol) {
  if (!(s0.beta > 0.0) || !(s0.beta < 0.5)) {
    throw std::invalid_argument("integrate_corner: beta must lie in (0, 1/2)");
  }
  const double b2 = s0.beta * s0.beta;
  const double inv = 1.0 / (1.0 - b2);
  AdaptiveRk4<3> solver;
  solver.rtol = rtol;
  solver.rhs = [b2, inv](const std::array<double, 3>& y) {
    return std::array<double, 3>{y[2], -inv * y[0] * y[2], -b2 * inv * y[0] * y[1]};
  };
  solver.invariants = {
      [b2](const std::array<double, 3>& y) { return b2 * y[1] * y[1] - y[2] * y[2]; },
      [inv](const std::array<double, 3>& y) {
        return y[1] + 0.5 * inv * y[0] * y[0];
      }};
  solver.invariant_scales = {
      [b2](const std::array<double, 3>& y) {
        return b2 * y[1] * y[1] + y[2] * y[2];
      },
      [inv](const std::array<double, 3>& y) {
        return std::abs(y[1]) + 0.5 * inv * y[0] * y[0];
      }};
  CornerTrajectory traj;
  traj.beta = s0.beta;
  traj.halt = solver.run({s0.A, s0.B, s0.C}, t_end, traj.blowup_time,
                         [&](double t, const std::array<double, 3>& y) {
                           traj.t.push_back(s0.t + t);
                           traj.A.push_back(y[0]);
                           traj.B.push_back(y[1]);
                           traj.C.push_back(y[2]);
                         });
  if (traj.halt == OdeHalt::BlowupDetected) traj.blowup_time += s0.t;
  return traj;
}

CornerInvariantDrift corner_invariants(const CornerTrajectory& traj) {
  if (traj.t.size() < 2) return {0.0, 0.0};
  const double b2 = traj.beta * traj.beta;
  const double inv = 1.0 / (1.0 - b2);
  const double q0 = b2 * traj.B[0] * traj.B[0] - traj.C[0] * traj.C[0];
  const double e0 = traj.B[0] + 0.5 * inv * traj.A[0] * traj.A[0];
  CornerInvariantDrift d{0.0, 0.0};
  double qscale = 1.0, escale = 1.0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double q = b2 * traj.B[i] * traj.B[i] - traj.C[i] * traj.C[i];
    const double e = traj.B[i] + 0.5 * inv * traj.A[i] * traj.A[i];
    qscale = std::max(qscale, b2 * traj.B[i] * traj.B[i] + traj.C[i] * traj.C[i]);
    escale = std::max(escale, std::abs(traj.B[i]) + 0.5 * inv * traj.A[i] * traj.A[i]);
    d.quadratic = std::max(d.quadratic, std::abs(q - q0) / qscale);
    d.energy = std::max(d.energy, std::abs(e - e0) / escale);
  }
  return d;
}

}  // namespace sector_blowup
