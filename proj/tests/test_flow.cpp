#include <cmath>

#include "doctest.h"
#include "xcflab/flow.hpp"

using namespace xcf;

namespace {

MetricGrid hyperbolic_grid(double K0, int n, double h, double z0 = 1.0) {
  return MetricGrid::from_family(std::make_shared<HyperbolicHalfspace>(K0), {n, n, n}, {h, h, h},
                                 {0.0, 0.0, z0});
}

double max_rel_to(const VelocityField& v, const MetricGrid& g, double factor) {
  double e = 0.0;
  const IndexBox all = g.nodes(), in = g.interior();
  for (std::size_t n = 0; n < in.size(); ++n) {
    const std::size_t k = all.linear(in.unlinear(n));
    e = std::max(e, max_abs(v[k] - factor * g.values[k]) / (std::max(std::fabs(factor), 1.0) * max_abs(g.values[k])));
  }
  return e;
}

}  // namespace

TEST_CASE("xcf velocity of constant curvature is K0^2 times twice the metric") {
  const double e1 = max_rel_to(xcf_rhs(initial_state(hyperbolic_grid(-2.0, 9, 1.0 / 16)), 2),
                               hyperbolic_grid(-2.0, 9, 1.0 / 16), 8.0);
  const double e2 = max_rel_to(xcf_rhs(initial_state(hyperbolic_grid(-2.0, 9, 1.0 / 32)), 2),
                               hyperbolic_grid(-2.0, 9, 1.0 / 32), 8.0);
  CHECK(e1 < 5e-2);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  const FlowState s = initial_state(hyperbolic_grid(-1.0, 7, 1.0 / 32));
  CHECK(max_rel_to(xcf_rhs(s, 2), s.metric, 2.0) < 1.2e-2);
  CHECK(max_rel_to(xcf_rhs(s, 4), s.metric, 2.0) < 1e-4);
}

TEST_CASE("flat metric: zero xcf velocity and -2K^2 g normalized velocity") {
  const MetricGrid g = MetricGrid::from_family(std::make_shared<FlatFamily>(), {7, 7, 7},
                                               {0.1, 0.1, 0.1}, {0, 0, 0});
  const FlowState s = initial_state(g);
  CHECK(max_rel_to(xcf_rhs(s, 2), g, 0.0) == 0.0);
  CHECK(max_rel_to(normalized_rhs(s, -1.0, 2), g, -2.0) < 1e-15);
  CHECK(max_rel_to(deturck_rhs(s, 2), g, 0.0) == 0.0);
}

TEST_CASE("normalized velocity vanishes on its fixed point and is 6K^2 g at curvature 2K") {
  const FlowState s = initial_state(hyperbolic_grid(-1.0, 7, 1.0 / 32));
  CHECK(max_rel_to(normalized_rhs(s, -1.0, 4), s.metric, 0.0) < 2e-4);
  const FlowState s2 = initial_state(hyperbolic_grid(-2.0, 7, 1.0 / 32));
  CHECK(max_rel_to(normalized_rhs(s2, -1.0, 4), s2.metric, 6.0) < 1e-4);
}

TEST_CASE("DeTurck velocity is the xcf velocity plus the Lie term") {
  const auto fam = std::make_shared<PerturbedHyperbolic>(-1.0, 0.05, Vec3{0.15, 0.15, 1.2}, 0.4);
  MetricGrid g = MetricGrid::from_family(fam, {9, 9, 9}, {1.0 / 32, 1.0 / 32, 1.0 / 32}, {0, 0, 1.075});
  MetricGrid ref = MetricGrid::from_family(std::make_shared<HyperbolicHalfspace>(-1.0), g.dims,
                                           g.spacing, g.origin);
  FlowState s{0.0, 0, g, std::make_shared<const MetricGrid>(ref)};
  const VelocityField a = deturck_rhs(s, 2), b = xcf_rhs(s, 2);
  const NodeField<SymMat3> lie = deturck_lie_term(g, ref, 2);
  double lie_max = 0.0, diff = 0.0;
  for (std::size_t n = 0; n < lie.size(); ++n) {
    const std::size_t k = g.nodes().linear(lie.box().unlinear(n));
    lie_max = std::max(lie_max, max_abs(lie[n]));
    diff = std::max(diff, max_abs(a[k] - b[k] - lie[n]));
  }
  CHECK(lie_max > 1e-3);
  CHECK(diff <= 1e-10);
  // Hyperbolic reference and a rescaled hyperbolic metric share Christoffel symbols.
  const NodeField<Vec3> w = deturck_field(hyperbolic_grid(-2.0, 7, 1.0 / 32), hyperbolic_grid(-1.0, 7, 1.0 / 32),
                                          2, IndexBox{{1, 1, 1}, {6, 6, 6}});
  for (std::size_t n = 0; n < w.size(); ++n)
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(w[n][k]) < 1e-9);
}

TEST_CASE("step guards: CFL bound and reference layout") {
  const FlowState s = initial_state(hyperbolic_grid(-1.0, 7, 1.0 / 32));
  const double bound = cfl_dt_bound(s.metric, 2, 0.2);
  CHECK(bound > 0.0);
  try {
    step(s, 1.5 * bound, FlowSpec{});
    FAIL("expected CflViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CflViolation);
  }
  CHECK_NOTHROW(step(s, bound, FlowSpec{}));
  CHECK_THROWS_AS(deturck_field(hyperbolic_grid(-1.0, 7, 1.0 / 32), hyperbolic_grid(-1.0, 9, 1.0 / 32), 2,
                                IndexBox{{1, 1, 1}, {6, 6, 6}}),
                  Error);
}

TEST_CASE("exact hyperbolic run follows the scale factor") {
  const MetricGrid g0 = hyperbolic_grid(-1.0, 17, 1.0 / 32, 1.0);
  GridRunOptions opt;
  opt.t_end = 0.001;
  opt.cfl = 0.1;
  FlowSpec spec;
  spec.stencil_order = 4;
  const GridRun run = run_grid_flow(g0, spec, opt);
  CHECK(run.status == RunStatus::Completed);
  CHECK(static_cast<long>(run.rows.size()) == run.steps + 1);
  const double s = std::sqrt(4.0 * opt.t_end + 1.0);
  double e = 0.0;
  for (std::size_t n = 0; n < g0.values.size(); ++n)
    e = std::max(e, max_abs(run.final_state.metric.values[n] - s * g0.values[n]) / max_abs(s * g0.values[n]));
  CHECK(e < 1e-6);
  CHECK_FALSE(run.rows.front().dVolResidual.has_value());
  CHECK_FALSE(run.rows.back().resDtEin.has_value());
  for (std::size_t n = 1; n + 1 < run.rows.size(); ++n) {
    const MonitorRow& r = run.rows[n];
    REQUIRE(r.dVolResidual);
    CHECK(*r.dVolResidual <= 1e-3 * r.intH);
    CHECK(*r.resDtEin <= 1e-3);
    CHECK(*r.resDtDetE <= 1e-3);
    CHECK(std::fabs(r.J) < 1e-6 * r.vol);
  }
}

namespace {

std::pair<double, double> early_residuals(FamilyPtr f, double h) {
  const int n = static_cast<int>(std::lround(1.0 / h)) + 1;
  const MetricGrid g = MetricGrid::from_family(f, {n, n, n}, {h, h, h}, {0.0, 0.0, 1.0});
  FlowSpec spec;
  const FlowState s0 = initial_state(g);
  const double dt = cfl_dt_bound(s0.metric, 2, 0.1);
  const FlowState s1 = step(s0, dt, spec);
  const FlowState s2 = step(s1, dt, spec);
  StateAnalysis mid = analyze(s1, 2);
  restrict_residual_region(mid, g, {0.25, 0.25, 1.25}, {0.75, 0.75, 1.75});
  return evolution_residuals(analyze(s0, 2), mid, analyze(s2, 2));
}

}  // namespace

TEST_CASE("evolution residuals converge at second order") {
  for (FamilyPtr f : {FamilyPtr(std::make_shared<HyperbolicHalfspace>(-1.0)),
                      FamilyPtr(std::make_shared<PerturbedHyperbolic>(-1.0, 0.05, Vec3{0.5, 0.5, 1.5}, 0.6))}) {
    const auto coarse = early_residuals(f, 1.0 / 16);
    const auto fine = early_residuals(f, 1.0 / 32);
    CHECK(coarse.first / fine.first >= 3.4);
    CHECK(coarse.first / fine.first <= 4.6);
    CHECK(coarse.second / fine.second >= 3.4);
    CHECK(coarse.second / fine.second <= 4.6);
  }
}

TEST_CASE("normalized run keeps its hyperbolic fixed point") {
  GridRunOptions opt;
  opt.t_end = 0.01;
  opt.cfl = 0.2;
  FlowSpec spec;
  spec.variant = FlowVariant::Normalized;
  spec.K = -1.0;
  const MetricGrid g0 = hyperbolic_grid(-1.0, 7, 1.0 / 32);
  const GridRun run = run_grid_flow(g0, spec, opt);
  double e = 0.0;
  for (std::size_t n = 0; n < g0.values.size(); ++n)
    e = std::max(e, max_abs(run.final_state.metric.values[n] - g0.values[n]) / max_abs(g0.values[n]));
  CHECK(e < 1e-3);
  CHECK_FALSE(run.rows[1].resDtEin.has_value());
}

TEST_CASE("evolution residuals reject unequal time spacing") {
  const FlowState s0 = initial_state(hyperbolic_grid(-1.0, 7, 1.0 / 32));
  const double dt = cfl_dt_bound(s0.metric, 2, 0.2);
  const FlowState s1 = step(s0, dt, FlowSpec{});
  const FlowState s2 = step(s1, 0.5 * dt, FlowSpec{});
  try {
    evolution_residuals(s0, s1, s2, 2);
    FAIL("expected MismatchedGrids");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedGrids);
  }
}

TEST_CASE("run config guards") {
  const MetricGrid g0 = hyperbolic_grid(-1.0, 7, 1.0 / 32);
  GridRunOptions both;
  both.t_end = 0.01;
  both.dt = 1e-4;
  both.cfl = 0.2;
  CHECK_THROWS_AS(run_grid_flow(g0, FlowSpec{}, both), Error);
  GridRunOptions fast;
  fast.t_end = 0.01;
  fast.dt = 1.0;
  fast.compute_monitors = false;
  CHECK(run_grid_flow(g0, FlowSpec{}, fast).status == RunStatus::Completed);  // zero steps
  fast.t_end = 2.0;
  CHECK(run_grid_flow(g0, FlowSpec{}, fast).status == RunStatus::CflStall);
}
