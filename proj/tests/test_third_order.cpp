#include <memory>

#include "doctest.h"
#include "support.hpp"
#include "xcflab/frame.hpp"
#include "xcflab/third_order.hpp"

using namespace xcf;
using namespace xcf::testing;

namespace {

std::shared_ptr<PerturbedHyperbolic> perturbed(double eps) {
  return std::make_shared<PerturbedHyperbolic>(-1.0, eps, Vec3{0.0, 0.0, 1.2}, 0.4);
}

MetricGrid perturbed_grid(double eps, double h, int n) {
  const double half = 0.5 * (n - 1) * h;
  return MetricGrid::from_family(perturbed(eps), {n, n, n}, {h, h, h},
                                 {-half, -half, 1.2 - half});
}

}  // namespace

TEST_CASE("exact-jet Devil identities on the perturbed hyperbolic family") {
  auto fam = perturbed(0.05);
  for (double x : {-0.1, 0.0, 0.07})
    for (double z : {1.1, 1.2, 1.31}) {
      const ThirdOrderPoint p = third_order_exact(*fam, {x, 0.03, z}, 0.0);
      CHECK(p.devil_v2 > 0.0);
      CHECK(p.lemma_residual < 1e-8);
      CHECK(p.antisym_residual < 1e-10);
      CHECK(p.cyclic_residual < 1e-10);
      CHECK(p.trace_residual < 1e-10);
      CHECK(p.bianchi_norm() < 1e-10);
    }
}

TEST_CASE("constant curvature has vanishing third-order data") {
  HyperbolicHalfspace fam(-1.0);
  const ThirdOrderPoint p = third_order_exact(fam, {0.2, -0.3, 1.4}, 0.3);
  double m = 0.0;
  for (double v : p.T) m = std::max(m, std::fabs(v));
  CHECK(m < 1e-12);
  CHECK(p.bianchi_norm() < 1e-12);
  CHECK(p.devil_v2 < 1e-20);
}

TEST_CASE("grid Devil lemma is algebraic and traces converge") {
  const MetricGrid grid = perturbed_grid(0.05, 1.0 / 16, 11);
  const CurvaturePack pack = curvature_pack(grid, 2);
  const ThirdOrderField f = third_order(grid, pack);
  CHECK(f.max_lemma_residual() < 1e-8);
  CHECK(f.max_antisym_residual() < 1e-12);
  CHECK(f.max_cyclic_residual() < 1e-12);
}

TEST_CASE("Bianchi-type residual decays at stencil order") {
  auto ratio = [](int order) {
    const MetricGrid a = perturbed_grid(0.05, 1.0 / 16, 9);
    const MetricGrid b = perturbed_grid(0.05, 1.0 / 32, 17);
    const double ra = bianchi_cross_residual(a, curvature_pack(a, order));
    const double rb = bianchi_cross_residual(b, curvature_pack(b, order));
    MESSAGE("order ", order, ": ", ra, " -> ", rb, " ratio ", ra / rb);
    return ra / rb;
  };
  const double r2 = ratio(2);
  CHECK(r2 >= 3.4);
  CHECK(r2 <= 4.6);
  const double r4 = ratio(4);
  CHECK(r4 >= 12.0);
  CHECK(r4 <= 20.0);
}

TEST_CASE("non-positive Ein is rejected") {
  CHECK_THROWS_AS(third_order_point(SymMat3::identity(), SymMat3::diag(1, -1, 1), {}), Error);
}
