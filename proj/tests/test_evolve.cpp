#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sector_blowup/evolve.hpp"
#include "sector_blowup/presets.hpp"

using namespace sector_blowup;

namespace {
State1D preset_state(const char* name, std::size_t n) {
  const auto grid = make_grid(M_PI / 4.0, n);
  const auto pre = make_preset_1d(name, grid);
  return init_state(pre.g0, pre.P0);
}
}  // namespace

TEST_CASE("init_state validates parities") {
  const auto grid = make_grid(M_PI / 4.0, 65);
  const auto odd = ThetaField::sample(grid, Parity::Odd,
                                      [](double t) { return std::sin(2.0 * t); });
  const auto even = ThetaField::sample(grid, Parity::Even,
                                       [](double t) { return t * t; });
  CHECK_NOTHROW(init_state(odd, even));
  CHECK_THROWS(init_state(even, odd));
}

TEST_CASE("blow-up hypotheses hold for the quadratic preset") {
  const auto s = preset_state("blowup_quadratic", 129);
  const auto h = hypothesis_report(s);
  CHECK(h.g_nonneg_increasing);
  CHECK(h.P_sign_structure);
  CHECK(h.boundary_gap);
  CHECK(h.all());

  const auto sr = check_signs(s);
  CHECK(sr.nonnegative(1e-12));
}

TEST_CASE("one step converges at fourth order in dt") {
  const auto s0 = preset_state("blowup_quadratic", 129);
  const double dt = 0.02;
  const auto big = step(s0, dt);
  auto half = step(step(s0, dt / 2.0), dt / 2.0);
  auto quarter = s0;
  for (int k = 0; k < 4; ++k) quarter = step(quarter, dt / 4.0);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < s0.g.grid().size(); ++i) {
    e1 = std::max(e1, std::fabs(big.g[i] - quarter.g[i]));
    e2 = std::max(e2, std::fabs(half.g[i] - quarter.g[i]));
  }
  CHECK(e1 / e2 > 10.0);  // (dt^4 - (dt/4)^4) vs ((dt/2)^4 - (dt/4)^4) ~ 17x
}

TEST_CASE("balance identity at t=0") {
  const auto s0 = preset_state("blowup_quadratic", 513);
  const double rhs = balance_rhs(s0);
  CHECK(rhs == doctest::Approx(0.61374).epsilon(1e-3));
  const double dt = 1e-3;
  const auto s1 = step(s0, dt);
  CHECK((s1.g.integral() - s0.g.integral()) / dt ==
        doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("short run bookkeeping") {
  const auto s0 = preset_state("blowup_quadratic", 129);
  RunConfig cfg;
  cfg.t_end = 0.5;
  cfg.output_stride = 5;
  const auto res = run(s0, cfg);
  CHECK(res.halt == RunHalt::Completed);
  CHECK(res.final_state.t == doctest::Approx(0.5));
  CHECK(res.diagnostics.front().t == 0.0);
  CHECK(res.diagnostics.back().t == doctest::Approx(0.5));
  CHECK(res.comparison_c.size() == res.diagnostics.size());
  CHECK(res.comparison_c_min > 0.0);
  for (const auto& r : res.diagnostics) {
    CHECK(r.g_l1 >= 0.0);
    CHECK(r.P_at_L >= r.P_at_0);
  }
  // No fit this early in the run: the functional has not entered its final
  // growth decade.
  CHECK_FALSE(estimate_blowup_time(res.diagnostics).has_value());
}

TEST_CASE("pure transport conserves the sup norm") {
  const auto s0 = preset_state("euler_sin2theta", 257);
  RunConfig cfg;
  cfg.t_end = 1.0;
  cfg.output_stride = 10;
  const auto res = run(s0, cfg);
  CHECK(res.halt == RunHalt::Completed);
  for (const auto& r : res.diagnostics) {
    CHECK(r.g_linf == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::fabs(r.P_at_L) < 1e-14);
  }
}

TEST_CASE("boundary trace residuals stay small early in the run") {
  const auto s0 = preset_state("blowup_quadratic", 257);
  RunConfig cfg;
  cfg.t_end = 1.0;
  cfg.output_stride = 1;
  const auto res = run(s0, cfg);
  const auto resid = boundary_ode_residual(res.diagnostics);
  CHECK(resid.at_L >= 0.0);
  CHECK(resid.at_zero >= 0.0);
  CHECK(resid.at_L < 1e-3);
  CHECK(resid.at_zero < 1e-3);
}

TEST_CASE("stability probe guards and trivial case") {
  const auto s0 = preset_state("blowup_quadratic", 129);
  CHECK_THROWS(stability_probe(s0, 0.3));
  const auto zero = stability_probe(s0, 0.0);
  CHECK(zero.conclusive);
  CHECK(zero.ratio == doctest::Approx(0.0));
  const auto r = stability_probe(s0, 1e-4);
  CHECK(r.conclusive);
  CHECK(r.ratio < 2.05);
}

TEST_CASE("unknown preset lists the valid names") {
  const auto grid = make_grid(M_PI / 4.0, 65);
  CHECK_THROWS_WITH_AS(make_preset_1d("nope", grid),
                       doctest::Contains("blowup_quadratic"),
                       std::invalid_argument);
  CHECK(is_preset_1d("zero"));
  CHECK_FALSE(is_preset_1d("nope"));
}
