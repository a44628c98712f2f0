#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "xcflab/frame.hpp"
#include "xcflab/minkowski.hpp"
#include "xcflab/third_order.hpp"

using namespace xcf;
using namespace xcf::testing;

namespace {

MetricGrid halfspace(double h) {
  const int n = static_cast<int>(std::lround(0.5 / h)) + 1;
  return MetricGrid::from_family(std::make_shared<HyperbolicHalfspace>(-1.0), {n, n, n}, {h, h, h},
                                 {0.0, 0.0, 1.0});
}

MetricGrid perturbed(double eps) {
  const double h = 1.0 / 32;
  return MetricGrid::from_family(
      std::make_shared<PerturbedHyperbolic>(-1.0, eps, Vec3{0.25, 0.25, 1.25}, 0.4), {17, 17, 17},
      {h, h, h}, {0.0, 0.0, 1.0});
}

}  // namespace

TEST_CASE("principal curvatures from Ein eigenvalues") {
  const CurvaturePoint p = model_point(SymMat3::identity(), SymMat3::diag(6, 3, 2));
  const WeingartenPoint w = weingarten_point(p);
  CHECK(w.K == doctest::Approx(6.0));
  CHECK(w.kappa[0] == doctest::Approx(1.0));
  CHECK(w.kappa[1] == doctest::Approx(2.0));
  CHECK(w.kappa[2] == doctest::Approx(3.0));
  CHECK(det(w.W) == doctest::Approx(w.K));
  CHECK_THROWS_AS(weingarten_point(model_point(SymMat3::identity(), SymMat3::diag(1, -1, 1))), Error);
}

TEST_CASE("Gauss equation holds for A = Ob and fails for a perturbed A") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const CurvaturePoint p = model_point(random_spd(rng), random_spd(rng));
    const GaussResidual r = gauss_residual(p, p.ob);
    const double s = std::max(1.0, max_abs(p.ob) * max_abs(p.ob));
    CHECK(r.full <= 1e-10 * s);
    CHECK(r.contracted <= 1e-10 * s);
    CHECK(r.scalar <= 1e-10 * s);
    SymMat3 bad = p.ob;
    bad(0, 1) += 0.1 * max_abs(p.ob);
    CHECK(gauss_residual(p, bad).full > 1e-3 * s);
  }
  const EmbeddingInput in = embedding_input(halfspace(1.0 / 16), 2);
  const GaussResidual g = gauss_residual(in.pack, in.A);
  CHECK(g.full <= 1e-12);
  CHECK(g.contracted <= 1e-12);
  CHECK(g.scalar <= 1e-12);
  CHECK(gcf_identity_residual(in.pack) <= 1e-10);
}

TEST_CASE("constant curvature embeds on the unit hyperboloid") {
  const MetricGrid g = halfspace(1.0 / 32);
  const EmbeddingState s = embed(g, 2);
  const QuadricFit q = quadric_fit(s, -1.0);
  CHECK(q.deviation <= 1e-3);
  CHECK(q.mean == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(s.residuals.metric <= 1e-3);
  CHECK(s.residuals.path <= 1e-3);
  CHECK(s.residuals.normal <= 1e-3);
  const std::size_t b = g.nodes().linear(s.base);
  for (int i = 0; i < 4; ++i) CHECK(s.F[b][i] == 0.0);
  CHECK(s.nu[b][3] == 1.0);
}

TEST_CASE("embedding residuals converge at second order") {
  const EmbeddingState c = embed(halfspace(1.0 / 16), 2);
  const EmbeddingState f = embed(halfspace(1.0 / 32), 2);
  CHECK(c.residuals.metric / f.residuals.metric == doctest::Approx(4.0).epsilon(0.15));
  CHECK(c.residuals.path / f.residuals.path == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("path residual grows with the Codazzi defect") {
  double prev = 0.0;
  for (double eps : {0.02, 0.05, 0.1}) {
    const EmbeddingState s = embed(perturbed(eps), 2);
    CHECK(s.residuals.path > prev);
    CHECK(s.residuals.path > 10.0 * s.residuals.metric);
    prev = s.residuals.path;
  }
}

TEST_CASE("integrability test") {
  const IntegrabilityResult hyp = is_integrable(halfspace(1.0 / 64), 1e-6);
  CHECK(hyp.integrable);
  const IntegrabilityResult pert = is_integrable(perturbed(0.1), 1e-6);
  CHECK_FALSE(pert.integrable);
  CHECK(pert.defect > 1e-3);
  const MetricGrid even = MetricGrid::from_family(std::make_shared<HyperbolicHalfspace>(-1.0), {16, 16, 16},
                                                  {1.0 / 32, 1.0 / 32, 1.0 / 32}, {0, 0, 1});
  CHECK_THROWS_AS(is_integrable(even, 1e-6), Error);
}

TEST_CASE("Gauss curvature flow of hyperboloids is XCF") {
  for (double r0 : {1.0, 2.0})
    for (double t : {0.0, 1.0, 2.0}) {
      const GcfXcfReport r = gcf_xcf_correspondence(r0, t);
      CHECK(r.max_diff <= 1e-12);
      CHECK(r.extrinsic == doctest::Approx(2.0 / (r.r * r.r)));
      CHECK(r.r * r.r == doctest::Approx(r.xcf_exact));
    }
  const HyperboloidFamily f{1.5};
  const double t = 0.7, d = 1e-5;
  CHECK((f.radius(t + d) - f.radius(t - d)) / (2 * d) == doctest::Approx(f.radius_rate(t)).epsilon(1e-8));
}

TEST_CASE("frame and chart backends agree on the Codazzi defect") {
  const SymMat3 m0 = SymMat3::identity();
  const FrameChartFamily chart(1.0, 2.0, m0);
  const ThirdOrderPoint fr = frame_third_order(solvable_frame(1.0, 2.0, m0));
  CHECK(fr.defect_e2 > 1e-2);
  for (const Vec3& x : {Vec3{0, 0, 0}, Vec3{0.3, -0.2, 0.4}}) {
    const ThirdOrderPoint ch = third_order_exact(chart, x, 0.0);
    CHECK(std::fabs(ch.defect_e2 - fr.defect_e2) <= 1e-8 * fr.defect_e2);
    CHECK(std::fabs(ch.devil_v2 - fr.devil_v2) <= 1e-8 * fr.devil_v2);
  }
}

TEST_CASE("embedding guards") {
  const MetricGrid g = halfspace(1.0 / 16);
  const EmbeddingInput in = embedding_input(g, 2);
  CHECK_THROWS_AS(integrate_embedding(g, in.pack, in.A, {0, 0, 1}), Error);
  const CurvaturePack small = curvature_pack(g, 2);
  CHECK_THROWS_AS(integrate_embedding(g, small, in.A, {0, 1, 2}), Error);
}
