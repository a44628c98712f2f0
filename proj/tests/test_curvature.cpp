#include <memory>

#include "doctest.h"
#include "support.hpp"
#include "xcflab/curvature.hpp"

using namespace xcf;
using namespace xcf::testing;

namespace {

MetricGrid hyperbolic_grid(double K0, double h, int n = 9) {
  auto fam = std::make_shared<HyperbolicHalfspace>(K0);
  return MetricGrid::from_family(fam, {n, n, n}, {h, h, h}, {-0.1, 0.05, 1.0});
}

double max_ein_error(const MetricGrid& grid, int order, double K0) {
  const CurvaturePack pack = curvature_pack(grid, order);
  double err = 0.0;
  for (std::size_t n = 0; n < pack.points.size(); ++n) {
    const auto& p = pack.points[n];
    err = std::max(err, max_abs(p.ein - (-K0) * p.g) / max_abs(p.g));
  }
  return err;
}

}  // namespace

TEST_CASE("hyperbolic K0=-1 pack matches constant-curvature closed forms") {
  const MetricGrid grid = hyperbolic_grid(-1.0, 1.0 / 64);
  const CurvaturePack pack = curvature_pack(grid, 4);
  const auto& p = pack.at({4, 4, 4});
  CHECK(max_abs(p.ric + 2.0 * p.g) < 1e-5);
  CHECK(p.sc == doctest::Approx(-6.0).epsilon(1e-6));
  CHECK(max_abs(p.ein - p.g) < 1e-5);
  for (double l : p.lambda) CHECK(l == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(max_abs(p.adj_ein - p.g) < 1e-5);
  CHECK(p.det_e == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sectional(p, 0, 1) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(max_abs(cross_via_ricci_e(p) - p.g) < 1e-5);
}

TEST_CASE("flat metric has vanishing curvature") {
  auto fam = std::make_shared<FlatFamily>();
  const MetricGrid grid = MetricGrid::from_family(fam, {5, 5, 5}, {0.1, 0.1, 0.1}, {0, 0, 0});
  const CurvaturePack pack = curvature_pack(grid, 2);
  const auto& p = pack.at({2, 2, 2});
  for (double v : p.rm) CHECK(v == 0.0);
  CHECK(max_abs(p.ein) == 0.0);
  CHECK(max_abs(p.adj_ein) == 0.0);
  CHECK_FALSE(p.ein_spd);
}

TEST_CASE("K0=-2 Ein converges at second order") {
  const double e1 = max_ein_error(hyperbolic_grid(-2.0, 1.0 / 16), 2, -2.0);
  const double e2 = max_ein_error(hyperbolic_grid(-2.0, 1.0 / 32, 17), 2, -2.0);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
  const CurvaturePack pack = curvature_pack(hyperbolic_grid(-2.0, 1.0 / 64, 9), 4);
  const auto& p = pack.at({4, 4, 4});
  CHECK(max_abs(p.adj_ein - 4.0 * p.g) / max_abs(p.g) < 1e-4);
  CHECK(p.det_e == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("fourth-order stencils converge at fourth order") {
  const double e1 = max_ein_error(hyperbolic_grid(-1.0, 1.0 / 16), 4, -1.0);
  const double e2 = max_ein_error(hyperbolic_grid(-1.0, 1.0 / 32, 17), 4, -1.0);
  CHECK(e1 / e2 > 12.0);
}

TEST_CASE("cross curvature via Ricci contraction equals the adjugate route on random jets") {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const CurvaturePoint p = point_from_jet(random_jet(rng));
    worst = std::max(worst, rel_diff(cross_via_ricci_e(p), p.adj_ein));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Ricci decomposition is exact in three dimensions") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) CHECK(ricci_decomposition_residual(point_from_jet(random_jet(rng))) < 1e-10);
}

TEST_CASE("curvature tensor symmetries on random jets") {
  std::mt19937_64 rng(3);
  const CurvaturePoint p = point_from_jet(random_jet(rng));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          CHECK(p.rm[t4(a, b, c, d)] == doctest::Approx(-p.rm[t4(b, a, c, d)]));
          CHECK(p.rm[t4(a, b, c, d)] == doctest::Approx(p.rm[t4(c, d, a, b)]));
          CHECK(p.rm[t4(a, b, c, d)] + p.rm[t4(b, c, a, d)] + p.rm[t4(c, a, b, d)] ==
                doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("eigen model with lambda = (1,2,3)") {
  const SymMat3 g = SymMat3::identity();
  const CurvaturePoint p = model_point(g, SymMat3::diag(1, 2, 3));
  CHECK(p.lambda[0] == doctest::Approx(1.0));
  CHECK(p.lambda[2] == doctest::Approx(3.0));
  CHECK(sectional(p, 0, 1) == doctest::Approx(-3.0));
  CHECK(sectional(p, 1, 2) == doctest::Approx(-1.0));
  CHECK(max_abs(cross_via_ricci_e(p) - SymMat3::diag(6, 3, 2)) < 1e-12);
  CHECK(max_abs(p.adj_ein - SymMat3::diag(6, 3, 2)) < 1e-12);
  CHECK(p.det_e == doctest::Approx(6.0));
}

TEST_CASE("adjugate eigenvalues are pairwise products; Ein SPD iff all sectionals negative") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const SymMat3 g = random_spd(rng), e = random_sym(rng);
    const CurvaturePoint p = model_point(g, e);
    const CurvaturePoint adj = model_point(g, p.adj_ein);
    const auto& l = p.lambda;
    std::array<double, 3> prods{l[0] * l[1], l[0] * l[2], l[1] * l[2]};
    std::sort(prods.begin(), prods.end());
    for (int i = 0; i < 3; ++i)
      CHECK(adj.lambda[i] == doctest::Approx(prods[i]).epsilon(1e-9).scale(1.0));
    bool all_negative = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) all_negative = all_negative && sectional(p, i, j) < 0.0;
    CHECK(all_negative == (p.lambda[0] > 0.0));
    CHECK(p.det_e == doctest::Approx(l[0] * l[1] * l[2]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("degenerate plane and stencil guards") {
  const CurvaturePoint p = model_point(SymMat3::identity(), SymMat3::identity());
  CHECK_THROWS_AS(sectional(p, Vec3{1, 0, 0}, Vec3{2, 0, 0}), Error);
  auto fam = std::make_shared<HyperbolicHalfspace>(-1.0);
  MetricGrid g = MetricGrid::from_family(fam, {5, 5, 5}, {0.1, 0.1, 0.1}, {0, 0, 1});
  g.at({2, 2, 2}) = SymMat3::diag(1, -1, 1);
  try {
    curvature_pack(g, 2);
    FAIL("expected NonPositiveMetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveMetric);
  }
}
