#include "sector_blowup/elliptic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sector_blowup/numerics.hpp"

namespace sector_blowup {

namespace {
constexpr double kQuarterPi = 0.7853981633974483;

void require_odd(const ThetaField& g, const char* who) {
  if (g.parity() != Parity::Odd) {
    throw std::invalid_argument(std::string(who) + ": source must be odd");
  }
}

ThetaField gpp_from(const ThetaField& g, const ThetaField& G) {
  std::vector<double> gpp(g.grid().size());
  for (std::size_t i = 0; i < gpp.size(); ++i) gpp[i] = g[i] - 4.0 * G[i];
  return ThetaField(g.grid(), std::move(gpp), Parity::Odd);
}

}  // namespace

double StreamSolution::residual_inf() const {
  // Independent check: difference G twice rather than reuse Gpp = g - 4G.
  const std::size_t n = G.grid().size();
  const double h = G.grid().spacing();
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = (G[i - 1] - 2.0 * G[i] + G[i + 1]) / (h * h);
    m = std::max(m, std::abs(4.0 * G[i] + d2 - source[i]));
  }
  return m;
}

StreamSolution solve_stream_kernel(const ThetaField& g) {
  require_odd(g, "solve_stream_kernel");
  const AngularGrid& grid = g.grid();
  const double L = grid.half_angle();
  if (std::abs(L - kQuarterPi) > 1e-12) {
    throw std::invalid_argument(
        "solve_stream_kernel: closed-form kernel requires L = pi/4; use "
        "solve_stream_fd for other angles");
  }
  const std::size_t n = grid.size();
  const double h = grid.spacing();

  std::vector<double> Gv(n, 0.0);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.node(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = grid.node(j);
      integrand[j] =
          (std::abs(std::sin(2.0 * t - 2.0 * s)) - std::abs(std::sin(2.0 * t + 2.0 * s))) *
          g[j];
    }
    // |sin(2t-2s)| has a kink at s = t (a grid node): split the panels there.
    const double left = integrate_uniform_range(integrand, h, 0, i);
    const double right = integrate_uniform_range(integrand, h, i, n - 1);
    Gv[i] = 0.25 * (left + right);
  }
  Gv[0] = 0.0;
  Gv[n - 1] = 0.0;

  // G'(t) = sin(2t) int_0^t g sin(2s) ds - cos(2t) int_t^{pi/4} g cos(2s) ds.
  std::vector<double> gsin(n), gcos(n), Gpv(n);
  for (std::size_t j = 0; j < n; ++j) {
    gsin[j] = g[j] * std::sin(2.0 * grid.node(j));
    gcos[j] = g[j] * std::cos(2.0 * grid.node(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.node(i);
    const double head = integrate_uniform_range(gsin, h, 0, i);
    const double tail = integrate_uniform_range(gcos, h, i, n - 1);
    Gpv[i] = std::sin(2.0 * t) * head - std::cos(2.0 * t) * tail;
  }

  ThetaField G(grid, std::move(Gv), Parity::Odd);
  ThetaField Gp(grid, std::move(Gpv), Parity::Even);
  ThetaField Gpp = gpp_from(g, G);
  return StreamSolution{std::move(G), std::move(Gp), std::move(Gpp), g};
}

StreamSolution solve_stream_fd(const ThetaField& g) {
  require_odd(g, "solve_stream_fd");
  const AngularGrid& grid = g.grid();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const std::size_t m = n - 2;  // interior unknowns, G(0) = G(L) = 0

  std::vector<double> lower(m - 1, 1.0 / (h * h));
  std::vector<double> upper(m - 1, 1.0 / (h * h));
  std::vector<double> diag(m, -2.0 / (h * h) + 4.0);
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = g[i + 1];

  std::vector<double> interior = solve_tridiagonal(std::move(lower), std::move(diag),
                                                   std::move(upper), std::move(rhs));
  std::vector<double> Gv(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) Gv[i + 1] = interior[i];

  ThetaField G(grid, std::move(Gv), Parity::Odd);
  ThetaField Gp = G.derivative();
  ThetaField Gpp = gpp_from(g, G);
  return StreamSolution{std::move(G), std::move(Gp), std::move(Gpp), g};
}

StreamSolution solve_stream_numerov(const ThetaField& g) {
  require_odd(g, "solve_stream_numerov");
  const AngularGrid& grid = g.grid();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const std::size_t m = n - 2;
  const double off = 1.0 + h * h / 3.0;
  const double mid = -2.0 + 10.0 * h * h / 3.0;

  std::vector<double> lower(m - 1, off);
  std::vector<double> upper(m - 1, off);
  std::vector<double> diag(m, mid);
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = h * h / 12.0 * (g[i] + 10.0 * g[i + 1] + g[i + 2]);
  }
  std::vector<double> interior = solve_tridiagonal(std::move(lower), std::move(diag),
                                                   std::move(upper), std::move(rhs));
  std::vector<double> Gv(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) Gv[i + 1] = interior[i];

  ThetaField G(grid, std::move(Gv), Parity::Odd);
  ThetaField Gp = G.derivative();
  ThetaField Gpp = gpp_from(g, G);
  return StreamSolution{std::move(G), std::move(Gp), std::move(Gpp), g};
}

BoundaryDerivatives gprime_boundary(const ThetaField& g) {
  const AngularGrid& grid = g.grid();
  const double L = grid.half_angle();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  std::vector<double> gsin(n), gcos(n);
  for (std::size_t j = 0; j < n; ++j) {
    gsin[j] = g[j] * std::sin(2.0 * grid.node(j));
    gcos[j] = g[j] * std::cos(2.0 * grid.node(j));
  }
  const double Isin = integrate_uniform(gsin, h);
  const double Icos = integrate_uniform(gcos, h);
  const double s2L = std::sin(2.0 * L);
  const double c2L = std::cos(2.0 * L);
  BoundaryDerivatives b;
  b.at_L = Isin / s2L;
  b.at_zero = c2L / s2L * Isin - Icos;
  return b;
}

double mass_bound_constant(double L) {
  // min of sin(2t) over [L/2, L] sits at an endpoint; the 1/2 covers the
  // half-of-the-mass argument for nondecreasing g.
  const double m = std::min(std::sin(L), std::sin(2.0 * L));
  return 0.5 * m / std::sin(2.0 * L);
}

std::array<double, 2> velocity_from_g(const StreamSolution& sol, double r,
                                      double theta) {
  if (r < 0.0) throw std::invalid_argument("velocity_from_g: negative radius");
  const double G = sol.G.value_at(theta);
  const double Gp = sol.Gp.value_at(theta);
  const double ct = std::cos(theta), st = std::sin(theta);
  // u = 2 r G theta_hat - r G' r_hat with theta_hat = (-sin, cos).
  return {2.0 * r * G * (-st) - r * Gp * ct, 2.0 * r * G * ct - r * Gp * st};
}

}  // namespace sector_blowup
