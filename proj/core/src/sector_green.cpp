#include "sector_blowup/sector_green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/numerics.hpp"

namespace sector_blowup {

namespace {

using cplx = std::complex<double>;

constexpr double kTwoPi = 2.0 * M_PI;

// Principal-branch power r^g e^{i g theta}; sector angles keep g*theta
// inside (-pi, pi).
cplx pow_branch(cplx z, double g) {
  return std::polar(std::pow(std::abs(z), g), g * std::arg(z));
}

void require_in_sector(const SectorSpec& spec, cplx z, const char* who) {
  const double t = std::arg(z);
  if (!(std::abs(z) > 0.0) || t < -1e-12 || t > spec.opening() + 1e-12) {
    throw std::invalid_argument(std::string(who) + ": point outside the sector");
  }
}

void require_distinct(cplx z, cplx w, const char* who) {
  if (std::abs(z - w) <= 1e-15 * std::max(1.0, std::abs(z))) {
    throw std::invalid_argument(std::string(who) +
                                ": coincident points (kernel singularity)");
  }
}

// ---------------------------------------------------------------------------
// Panel quadrature over a polar box with recursive refinement near one
// singular point. Panel order is fixed and sums are compensated, so results
// do not depend on threading at the caller level.
struct PanelIntegrator {
  const QuadratureSpec& q;
  double r_max;
  double theta_lo, theta_hi;
  bool has_singular = false;
  cplx singular{0.0, 0.0};

  cplx integrate(const std::function<cplx(cplx)>& f) const {
    std::vector<double> rb;
    rb.push_back(0.0);
    const int nr = std::max(4, q.radial_panels);
    const double rho = 0.7;
    for (int j = 1; j <= nr; ++j) {
      rb.push_back(r_max * std::pow(rho, static_cast<double>(nr - j)));
    }
    const int na = std::max(4, q.angular_panels);
    KahanSum re, im;
    for (int j = 0; j + 1 <= nr; ++j) {
      for (int k = 0; k < na; ++k) {
        const double t0 = theta_lo + (theta_hi - theta_lo) * k / na;
        const double t1 = theta_lo + (theta_hi - theta_lo) * (k + 1) / na;
        recurse(f, rb[j], rb[j + 1], t0, t1, q.singular_depth, re, im);
      }
    }
    return {re.value(), im.value()};
  }

 private:
  bool near_singular(double r0, double r1, double t0, double t1) const {
    if (!has_singular) return false;
    const double rz = std::abs(singular), tz = std::arg(singular);
    const cplx p = std::polar(std::clamp(rz, r0, r1), std::clamp(tz, t0, t1));
    const double diam = (r1 - r0) + r1 * (t1 - t0);
    return std::abs(p - singular) < diam;
  }

  void recurse(const std::function<cplx(cplx)>& f, double r0, double r1,
               double t0, double t1, int depth, KahanSum& re, KahanSum& im) const {
    if (depth > 0 && near_singular(r0, r1, t0, t1)) {
      const double rm = 0.5 * (r0 + r1), tm = 0.5 * (t0 + t1);
      recurse(f, r0, rm, t0, tm, depth - 1, re, im);
      recurse(f, r0, rm, tm, t1, depth - 1, re, im);
      recurse(f, rm, r1, t0, tm, depth - 1, re, im);
      recurse(f, rm, r1, tm, t1, depth - 1, re, im);
      return;
    }
    const GaussRule& g = gauss_legendre(q.gauss_order);
    const double rc = 0.5 * (r0 + r1), rh = 0.5 * (r1 - r0);
    const double tc = 0.5 * (t0 + t1), th = 0.5 * (t1 - t0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double r = rc + rh * g.nodes[i];
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        const double t = tc + th * g.nodes[j];
        const cplx w = std::polar(r, t);
        if (has_singular &&
            std::abs(w - singular) < 1e-13 * std::max(1.0, std::abs(singular))) {
          continue;
        }
        const cplx v = f(w) * (g.weights[i] * rh * g.weights[j] * th * r);
        re.add(v.real());
        im.add(v.imag());
      }
    }
  }
};

cplx sector_integral(const SectorSpec& spec, const QuadratureSpec& q,
                     const cplx* singular,
                     const std::function<cplx(cplx)>& f,
                     double r_max_override = 0.0) {
  PanelIntegrator pi{q,
                     r_max_override > 0.0 ? r_max_override : q.r_max,
                     0.0,
                     spec.opening()};
  if (singular != nullptr) {
    pi.has_singular = true;
    pi.singular = *singular;
  }
  return pi.integrate(f);
}

bool on_boundary(const SectorSpec& spec, cplx z) {
  const double t = std::arg(z);
  return std::abs(z) <= 1e-14 || t <= 1e-12 || t >= spec.opening() - 1e-12;
}

void check_truncation(const QuadratureSpec& q,
                      const std::vector<cplx>& targets, const char* who) {
  double m = 0.0;
  for (cplx z : targets) m = std::max(m, std::abs(z));
  if (q.r_max < 4.0 * m) {
    throw std::invalid_argument(std::string(who) +
                                ": r_max below 4x the farthest target");
  }
}

// Run fn(i) for i in [0, n) across the spec's thread budget.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 0) threads = default_thread_count();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn]() {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SectorSpec::SectorSpec(double beta_in) : beta(beta_in) {
  if (!(beta > 0.0) || beta > 0.5) {
    throw std::invalid_argument("SectorSpec: beta must lie in (0, 1/2]");
  }
}

double SectorSpec::opening() const { return beta * M_PI; }

bool SectorSpec::contains(cplx z) const {
  const double t = std::arg(z);
  return std::abs(z) > 0.0 && t > 0.0 && t < opening();
}

SectorPoint SectorPoint::from_cartesian(double x1, double x2) {
  return SectorPoint{x1, x2, std::hypot(x1, x2), std::atan2(x2, x1)};
}

SectorPoint SectorPoint::from_polar(double r, double theta) {
  if (r < 0.0) throw std::invalid_argument("SectorPoint: negative radius");
  return SectorPoint{r * std::cos(theta), r * std::sin(theta), r, theta};
}

double green(const SectorSpec& spec, cplx z, cplx w) {
  require_in_sector(spec, z, "green");
  require_in_sector(spec, w, "green");
  require_distinct(z, w, "green");
  const double a = spec.exponent();
  const cplx zeta = pow_branch(z, a);
  const cplx mu = pow_branch(w, a);
  return std::log(std::abs(zeta - mu) / std::abs(std::conj(zeta) - mu)) / kTwoPi;
}

double green_disk(const SectorSpec& spec, double R, cplx z, cplx w) {
  require_in_sector(spec, z, "green_disk");
  require_in_sector(spec, w, "green_disk");
  require_distinct(z, w, "green_disk");
  if (std::abs(z) > R || std::abs(w) > R) {
    throw std::invalid_argument("green_disk: point outside the truncation arc");
  }
  const double a = spec.exponent();
  const cplx zeta = pow_branch(z, a);
  const cplx mu = pow_branch(w, a);
  const double S2 = std::pow(R, 2.0 * a);
  const double num = std::abs(zeta - mu) * std::abs(S2 - zeta * mu);
  const double den =
      std::abs(std::conj(zeta) - mu) * std::abs(S2 - std::conj(zeta) * mu);
  return std::log(num / den) / kTwoPi;
}

cplx kernel_K(const SectorSpec& spec, cplx z, cplx w) {
  require_distinct(z, w, "kernel_K");
  const double a = spec.exponent();
  const cplx zeta = pow_branch(z, a);
  const cplx mu = pow_branch(w, a);
  const cplx mub = std::conj(mu);
  return (a * pow_branch(z, a - 1.0) / (2.0 * kTwoPi)) * (mu - mub) /
         ((zeta - mu) * (zeta - mub));
}

cplx kernel_P(const SectorSpec& spec, cplx z, cplx w) {
  require_distinct(z, w, "kernel_P");
  const double a = spec.exponent();
  const cplx zeta = pow_branch(z, a);
  const cplx mu = pow_branch(w, a);
  const cplx mub = std::conj(mu);
  const cplx Q = 1.0 / ((zeta - mu) * (zeta - mub));
  const cplx pref = a / (2.0 * kTwoPi) * (mu - mub);
  return pref * ((a - 1.0) * pow_branch(z, a - 2.0) * Q -
                 a * pow_branch(z, 2.0 * a - 2.0) * (2.0 * zeta - mu - mub) * Q * Q);
}

std::vector<double> poisson_solve(const SectorSpec& spec, const SectorField& f,
                                  const QuadratureSpec& quad,
                                  const std::vector<cplx>& targets) {
  check_truncation(quad, targets, "poisson_solve");
  std::vector<double> out(targets.size(), 0.0);
  parallel_for(targets.size(), quad.threads, [&](std::size_t i) {
    const cplx z = targets[i];
    if (on_boundary(spec, z)) {
      out[i] = 0.0;
      return;
    }
    const cplx v = sector_integral(spec, quad, &z, [&](cplx w) {
      return cplx(green(spec, z, w) * f(std::abs(w), std::arg(w)), 0.0);
    });
    out[i] = v.real();
  });
  return out;
}

std::array<double, 2> grad_psi(const SectorSpec& spec, const SectorField& f,
                               const QuadratureSpec& quad, cplx z) {
  check_truncation(quad, {z}, "grad_psi");
  const cplx F = sector_integral(spec, quad, &z, [&](cplx w) {
    return kernel_K(spec, z, w) * f(std::abs(w), std::arg(w));
  });
  // F = dPsi/dz = (d1 Psi - i d2 Psi) / 2; calibrated once against the
  // f == 1 closed form and asserted in the test suite.
  return {2.0 * F.real(), -2.0 * F.imag()};
}

HessianPsi hessian_psi(const SectorSpec& spec, const SectorField& f,
                       const QuadratureSpec& quad, cplx z) {
  check_truncation(quad, {z}, "hessian_psi");
  if (on_boundary(spec, z)) {
    throw std::invalid_argument("hessian_psi: target on the boundary");
  }
  if (spec.beta > 0.499) {
    throw std::invalid_argument(
        "hessian_psi: beta too close to 1/2 (closed-form calibration degenerates)");
  }
  const double fz = f(std::abs(z), std::arg(z));
  // Singular value subtracted under the integral; the subtracted part's own
  // contribution is the exact constant int P(z, w) dw = (-1 + i tan(beta pi))/4
  // read off the f == 1 quadratic solution.
  const cplx J = sector_integral(spec, quad, &z, [&](cplx w) {
    return kernel_P(spec, z, w) * (f(std::abs(w), std::arg(w)) - fz);
  });
  const cplx H = J + fz * cplx(-0.25, 0.25 * std::tan(spec.beta * M_PI));
  // H = (Psi11 - Psi22 - 2i Psi12)/4 together with Psi11 + Psi22 = f.
  return HessianPsi{fz / 2.0 + 2.0 * H.real(), -2.0 * H.imag(),
                    fz / 2.0 - 2.0 * H.real()};
}

std::array<double, 2> symmetrized_velocity(
    const std::function<double(double, double)>& omega, double support_radius,
    const QuadratureSpec& quad, std::array<double, 2> x) {
  const SectorSpec quadrant(0.5);
  const cplx zx(x[0], x[1]);
  auto biot = [](cplx d) -> cplx {
    // (x - y)^perp / (2 pi |x - y|^2) packed as u1 + i u2.
    const double n2 = std::norm(d);
    if (n2 < 1e-26) return {0.0, 0.0};
    return cplx(-d.imag(), d.real()) / (kTwoPi * n2);
  };
  const cplx u = sector_integral(
      quadrant, quad, &zx,
      [&](cplx y) {
        const double w = omega(std::abs(y), std::arg(y));
        if (w == 0.0) return cplx(0.0, 0.0);
        const cplx yp(-y.imag(), y.real());  // y rotated by +pi/2
        const cplx k = biot(zx - y) + biot(zx - yp) + biot(zx + y) + biot(zx + yp);
        return k * w;
      },
      support_radius);
  return {u.real(), u.imag()};
}

double symmetrized_velocity_bound(
    const std::function<double(double, double)>& omega, double support_radius,
    const QuadratureSpec& quad) {
  // Denominator sup |y| |omega(y)| from a dense polar sample.
  double denom = 0.0;
  for (int i = 1; i <= 160; ++i) {
    const double r = support_radius * i / 160.0;
    for (int j = 1; j < 64; ++j) {
      denom = std::max(denom, r * std::abs(omega(r, M_PI_2 * j / 64.0)));
    }
  }
  if (denom == 0.0) return 0.0;
  std::vector<std::array<double, 2>> targets;
  for (double rr : {0.05, 0.2, 0.45, 0.7, 0.95}) {
    for (int j = 1; j <= 5; ++j) {
      const double t = M_PI_2 * j / 6.0;
      targets.push_back({support_radius * rr * std::cos(t),
                         support_radius * rr * std::sin(t)});
    }
  }
  std::vector<double> mags(targets.size(), 0.0);
  parallel_for(targets.size(), quad.threads, [&](std::size_t i) {
    const auto u = symmetrized_velocity(omega, support_radius, quad, targets[i]);
    mags[i] = std::hypot(u[0], u[1]);
  });
  double ratio = 0.0;
  for (double m : mags) ratio = std::max(ratio, m / denom);
  return ratio;
}

double decay_probe(double alpha,
                   const std::function<double(double, double)>& omega,
                   double support_radius, const QuadratureSpec& quad) {
  std::vector<std::array<double, 2>> targets;
  for (int k = -4; k <= 0; ++k) {
    const double r = std::pow(2.0, static_cast<double>(k));
    for (double t : {M_PI / 8.0, M_PI / 4.0, 3.0 * M_PI / 8.0}) {
      targets.push_back({r * std::cos(t), r * std::sin(t)});
    }
  }
  std::vector<double> ratios(targets.size(), 0.0);
  parallel_for(targets.size(), quad.threads, [&](std::size_t i) {
    const auto u = symmetrized_velocity(omega, support_radius, quad, targets[i]);
    const double r = std::hypot(targets[i][0], targets[i][1]);
    ratios[i] = std::hypot(u[0], u[1]) / std::pow(r, 1.0 + alpha);
  });
  double sup = 0.0;
  for (double v : ratios) sup = std::max(sup, v);
  return sup;
}

CornerFit taylor_corner_probe(const SectorSpec& spec, const SectorField& omega,
                              const QuadratureSpec& quad) {
  const double op = spec.opening();
  std::vector<cplx> pts;
  for (int ir = 1; ir <= 6; ++ir) {
    const double r = 0.02 * ir;
    for (int it = 1; it <= 5; ++it) {
      pts.push_back(std::polar(r, op * it / 6.0));
    }
  }
  const std::vector<double> psi = poisson_solve(spec, omega, quad, pts);

  // Least squares on the quadratic monomials plus cubics to absorb the
  // o(|x|^2) remainder.
  constexpr int m = 7;
  auto basis = [](cplx z, double* b) {
    const double x = z.real(), y = z.imag();
    b[0] = 0.5 * x * x;
    b[1] = x * y;
    b[2] = 0.5 * y * y;
    b[3] = x * x * x;
    b[4] = x * x * y;
    b[5] = x * y * y;
    b[6] = y * y * y;
  };
  double A[m][m] = {};
  double rhs[m] = {};
  for (std::size_t p = 0; p < pts.size(); ++p) {
    double b[m];
    basis(pts[p], b);
    for (int i = 0; i < m; ++i) {
      rhs[i] += b[i] * psi[p];
      for (int j = 0; j < m; ++j) A[i][j] += b[i] * b[j];
    }
  }
  // Gaussian elimination with partial pivoting on the normal equations.
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    if (std::abs(A[piv][c]) < 1e-300) {
      throw std::runtime_error("taylor_corner_probe: ill-conditioned fit");
    }
    std::swap(A[c], A[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (int r = c + 1; r < m; ++r) {
      const double fmul = A[r][c] / A[c][c];
      for (int k = c; k < m; ++k) A[r][k] -= fmul * A[c][k];
      rhs[r] -= fmul * rhs[c];
    }
  }
  double coef[m];
  for (int r = m - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int k = r + 1; k < m; ++k) s -= A[r][k] * coef[k];
    coef[r] = s / A[r][r];
  }

  CornerFit fit{};
  fit.c11 = coef[0];
  fit.c12 = coef[1];
  fit.c22 = coef[2];
  // u = (-d2 Psi, d1 Psi): velocity gradient entries from the quadratic form.
  fit.d1u1 = -fit.c12;
  fit.d2u2 = fit.c12;
  fit.d1u2 = fit.c11;
  fit.d2u1 = -fit.c22;
  // Rotate the sector down by half its opening so it is symmetric about the
  // x1-axis: x = R(phi) x_sym transforms the form by R^T C R.
  const double phi = op / 2.0;
  const double c = std::cos(phi), s = std::sin(phi);
  const double c11 = c * c * fit.c11 + 2.0 * c * s * fit.c12 + s * s * fit.c22;
  const double c12 =
      -c * s * fit.c11 + (c * c - s * s) * fit.c12 + c * s * fit.c22;
  const double c22 = s * s * fit.c11 - 2.0 * c * s * fit.c12 + c * c * fit.c22;
  fit.sym_d1u1 = -c12;
  fit.sym_d2u2 = c12;
  fit.sym_d1u2 = c11;
  fit.sym_d2u1 = -c22;
  const double omega0 = omega(1e-9, op / 2.0);
  const double b2 = spec.beta * spec.beta;
  fit.predicted_d1u2 = omega0 / (1.0 - b2);
  fit.predicted_d2u1 = b2 * omega0 / (1.0 - b2);
  return fit;
}

CounterexampleProbe critical_counterexample_probe(double beta, int refinements,
                                                  int threads) {
  const double a = 1.0 / beta;
  const double alpha = a - 2.0;
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument(
        "critical_counterexample_probe: need 1/beta - 2 in (0, 1)");
  }
  if (refinements < 1) {
    throw std::invalid_argument("critical_counterexample_probe: refinements >= 1");
  }
  const double opening = beta * M_PI;
  auto psi = [a](double x, double y) {
    const double r = std::hypot(x, y);
    if (r <= 0.0) return 0.0;
    const double t = std::atan2(y, x);
    return std::pow(r, a) * std::log(r) * std::sin(a * t);
  };
  // Mixed second derivative by a cross stencil on the closed form; the step
  // scales with r so relative accuracy is uniform down the corner.
  auto psi12 = [&](double x, double y) {
    const double h = 1e-4 * std::hypot(x, y);
    return (psi(x + h, y + h) - psi(x + h, y - h) - psi(x - h, y + h) +
            psi(x - h, y - h)) /
           (4.0 * h * h);
  };
  auto source = [&](double x, double y) {
    const double r = std::hypot(x, y);
    const double t = std::atan2(y, x);
    return 2.0 * a * std::pow(r, alpha) * std::sin(a * t);
  };

  CounterexampleProbe probe;
  const double h0 = 1.0 / 24.0;
  const double r_outer = 0.35;
  const double rho = std::pow(0.5, 1.0 / 3.0);  // 3 radii per octave
  for (int lev = 0; lev < refinements; ++lev) {
    const double h = h0 / std::pow(2.0, lev);
    // Polar sample: fixed angles, geometric radii down to the level's
    // resolution h. The seminorm is driven by pairs at the innermost scale,
    // so halving h adds one octave of pairs and ~log(2) of seminorm.
    PlanarSample mixed, src;
    for (double r = r_outer; r >= h; r *= rho) {
      for (int it = 0; it <= 12; ++it) {
        const double t = opening * (0.05 + 0.9 * it / 12.0);
        const double x = r * std::cos(t), y = r * std::sin(t);
        mixed.x1.push_back(x);
        mixed.x2.push_back(y);
        mixed.values.push_back(psi12(x, y));
        src.x1.push_back(x);
        src.x2.push_back(y);
        src.values.push_back(source(x, y));
      }
    }
    mixed.alpha = alpha;
    src.alpha = alpha;
    probe.mixed_seminorm.push_back(holder_seminorm(mixed, threads));
    probe.source_seminorm.push_back(holder_seminorm(src, threads));
    mixed.alpha = alpha / 2.0;
    probe.subcritical_seminorm.push_back(holder_seminorm(mixed, threads));
  }
  return probe;
}

}  // namespace sector_blowup
