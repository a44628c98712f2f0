#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "xcflab/frame.hpp"

using namespace xcf;
using namespace xcf::testing;

TEST_CASE("solvable hyperbolic algebra with identity metric") {
  const CurvaturePoint p = frame_curvature(solvable_frame(1, 1, SymMat3::identity()));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(sectional(p, i, j) == doctest::Approx(-1.0));
  CHECK(max_abs(p.ein - SymMat3::identity()) < 1e-14);
}

TEST_CASE("abelian algebra is flat") {
  FrameMetric fm;
  fm.m = SymMat3::diag(1, 2, 3);
  const CurvaturePoint p = frame_curvature(fm);
  for (double v : p.rm) CHECK(v == 0.0);
}

TEST_CASE("anisotropic solvable metric has distinct Ein eigenvalues") {
  const CurvaturePoint p = frame_curvature(solvable_frame(1, 2, SymMat3::identity()));
  CHECK(p.ein_spd);
  CHECK(p.lambda[0] == doctest::Approx(1.0));
  CHECK(p.lambda[1] == doctest::Approx(2.0));
  CHECK(p.lambda[2] == doctest::Approx(4.0));
  CHECK(rel_diff(cross_via_ricci_e(p), p.adj_ein) < 1e-12);
  // every metric on the ad = I algebra is hyperbolic
  const CurvaturePoint q = frame_curvature(solvable_frame(1, 1, SymMat3::diag(1, 1, 4)));
  CHECK(q.lambda[0] == doctest::Approx(q.lambda[2]));
}

TEST_CASE("Jacobi violation is detected") {
  FrameMetric fm;
  fm.m = SymMat3::identity();
  // [e1,e2] = e3, [e2,e3] = e3: fails Jacobi
  fm.c[t3(2, 0, 1)] = 1;
  fm.c[t3(2, 1, 0)] = -1;
  fm.c[t3(2, 1, 2)] = 1;
  fm.c[t3(2, 2, 1)] = -1;
  fm.c[t3(0, 0, 2)] = 1;
  fm.c[t3(0, 2, 0)] = -1;
  try {
    frame_curvature(fm);
    FAIL("expected JacobiViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::JacobiViolation);
  }
}

TEST_CASE("raw ODE reproduces the hyperbolic scale factor with fourth-order accuracy") {
  const FrameMetric fm0 = solvable_frame(1, 1, SymMat3::identity());
  auto err = [&](double dt) {
    const OdeRun run = xcf_ode_run(fm0, 2.0, dt, {});
    double e = 0.0;
    for (std::size_t n = 0; n < run.times.size(); ++n)
      e = std::max(e, std::fabs(run.states[n].m(0, 0) / std::sqrt(4 * run.times[n] + 1) - 1.0));
    return e;
  };
  const double e1 = err(1e-3);
  CHECK(e1 < 1e-8);
  const double ea = err(0.1), eb = err(0.05);
  CHECK(ea / eb == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("normalized flow fixes the hyperbolic metric") {
  const OdeRun run = xcf_ode_run(solvable_frame(1, 1, SymMat3::identity()), 10.0, 0.01,
                                 {FrameVariant::Normalized, -1.0});
  CHECK(max_abs(run.states.back().m - SymMat3::identity()) < 1e-10);
  for (const auto& r : run.monitors) CHECK(std::fabs(r.J) < 1e-10);
}

TEST_CASE("Harnack spot value on the frame hyperbolic run") {
  const OdeRun run = xcf_ode_run(solvable_frame(1, 1, SymMat3::identity()), 2.0, 1e-3, {});
  const auto& row = run.monitors[1000];
  CHECK(row.t == doctest::Approx(1.0));
  REQUIRE(row.harnackMin.has_value());
  CHECK(*row.harnackMin == doctest::Approx(std::pow(5.0, -0.75) * (0.75 - 0.6)).epsilon(1e-6));
}

TEST_CASE("evolution-equation residuals on an anisotropic frame run are time-differencing error") {
  auto worst = [](double dt) {
    const OdeRun run = xcf_ode_run(solvable_frame(1, 2, SymMat3::diag(1, 1, 1.2)), 0.02, dt, {});
    double e = 0.0, d = 0.0;
    for (std::size_t n = 1; n + 1 < run.monitors.size(); ++n) {
      e = std::max(e, *run.monitors[n].resDtEin);
      d = std::max(d, *run.monitors[n].resDtDetE);
    }
    return std::pair{e, d};
  };
  auto [e1, d1] = worst(2e-3);
  auto [e2, d2] = worst(1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("scaling m by r scales adjEin by 1/r") {
  std::mt19937_64 rng(2);
  const SymMat3 m = random_spd(rng, 1.0);
  const CurvaturePoint a = frame_curvature(solvable_frame(1, 2, m));
  const CurvaturePoint b = frame_curvature(solvable_frame(1, 2, 3.0 * m));
  CHECK(rel_diff(b.adj_ein, (1.0 / 3.0) * a.adj_ein) < 1e-12);
}
