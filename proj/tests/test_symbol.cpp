#include <random>

#include "doctest.h"
#include "support.hpp"
#include "xcflab/curvature.hpp"
#include "xcflab/error.hpp"
#include "xcflab/symbol.hpp"

using namespace xcf;
using namespace xcf::testing;

namespace {

SymMat3 e(int i, int j) {
  SymMat3 b;
  b(i, j) = 1.0;
  return b;
}

const std::vector<double> kAmplitudes{1e-3, 5e-4, 2.5e-4, 1.25e-4};

}  // namespace

TEST_CASE("hand substitutions") {
  const SymbolMatrix x = symbol_xcf(SymMat3::identity(), SymMat3::identity(), {1, 0, 0});
  CHECK(max_abs(x.apply(e(1, 1)) - (e(1, 1) + e(0, 0))) == 0.0);
  const RicciSymbols r = symbol_ricci(SymMat3::identity(), {0, 1, 0});
  CHECK(max_abs(r.raw.apply(e(1, 1))) == 0.0);
  CHECK_THROWS_AS(symbol_xcf(SymMat3::identity(), SymMat3::identity(), {0, 0, 0}), Error);
  try {
    symbol_ricci(SymMat3::identity(), {0, 0, 0});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ZeroCovector);
  }
}

TEST_CASE("kernel, homogeneity and gauge accounting on random contexts") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const SymMat3 g = random_spd(rng), E = random_spd(rng);
    const Vec3 xi{n(rng), n(rng), n(rng)}, w{n(rng), n(rng), n(rng)};
    const SymbolMatrix x = symbol_xcf(g, E, xi);
    CHECK(max_abs(x.apply(sym_outer(xi, w))) <= 1e-12 * x.M.norm());
    CHECK(max_abs(symbol_ricci(g, xi).raw.apply(sym_outer(xi, w))) <= 1e-12 * x.M.norm());
    const Vec3 xi2{2 * xi[0], 2 * xi[1], 2 * xi[2]};
    CHECK((symbol_xcf(g, E, xi2).M - 4.0 * x.M).cwiseAbs().maxCoeff() <= 1e-13 * x.M.norm());
    CHECK((symbol_deturck(g, E, xi2).M - 4.0 * symbol_deturck(g, E, xi).M).cwiseAbs().maxCoeff() <=
          1e-13 * x.M.norm());
    const RicciSymbols r = symbol_ricci(g, xi), r2 = symbol_ricci(g, xi2);
    CHECK((r2.raw.M - 4.0 * r.raw.M).cwiseAbs().maxCoeff() <= 1e-13 * r.raw.M.norm());
    const Eigen::Matrix<double, 6, 6> gauge = symbol_deturck(g, E, xi).M - x.M;
    CHECK((gauge - (r.deturck.M - r.raw.M)).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, gauge.norm()));
    CHECK(kernel_dimension(x) == 3);
  }
}

TEST_CASE("DeTurck symbols at E = g are the scaled identity") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const SymMat3 g = random_spd(rng);
    const Vec3 xi{0.3, -1.1, 0.7};
    const double len = quad(inverse(g), xi);
    const Eigen::Matrix<double, 6, 6> I = len * Eigen::Matrix<double, 6, 6>::Identity();
    CHECK((symbol_ricci(g, xi).deturck.M - I).cwiseAbs().maxCoeff() == 0.0);
    CHECK((symbol_deturck(g, g, xi).M - I).cwiseAbs().maxCoeff() <= 1e-12 * len);
  }
}

TEST_CASE("seeded scan: kernel dimension three and positive DeTurck spectrum") {
  const SymbolScan s = symbol_scan(1000, 42);
  CHECK(s.kernel_histogram.size() == 1);
  CHECK(s.kernel_histogram.at(3) == 1000);
  CHECK(s.deturck_min_real_part > 0.0);
  CHECK(s.failures.empty());
  CHECK(symbol_report(s).dump() == symbol_report(symbol_scan(1000, 42)).dump());
  CHECK(symbol_report(s).dump() != symbol_report(symbol_scan(1000, 43)).dump());
}

TEST_CASE("fd oracle reproduces the xcf symbol") {
  const Vec3 x{0.0, 0.0, 1.0}, xi{0.6, -0.3, 0.8};
  const HyperbolicHalfspace hyp(-1.0);
  const PerturbedHyperbolic pert(-1.0, 0.1, Vec3{0.1, 0.0, 1.1}, 0.4);
  std::mt19937_64 rng(3);
  for (const MetricFamily* f : {static_cast<const MetricFamily*>(&hyp), static_cast<const MetricFamily*>(&pert)}) {
    const CurvaturePoint p = point_from_jet(primal_jet(f->jet3(x, 0.0)));
    const SymbolMatrix s = symbol_xcf(p.g, p.ein, xi);
    for (const SymMat3& V : {p.g, random_sym(rng), e(0, 2)}) {
      const FdColumn c = symbol_fd_oracle(*f, x, 0.0, xi, V, kAmplitudes);
      const SymMat3 expect = s.apply(V);
      CHECK(max_abs(c.column - expect) <= 1e-2 * max_abs(expect));
    }
    const FdColumn k = symbol_fd_oracle(*f, x, 0.0, xi, sym_outer(xi, {1.0, 2.0, -0.5}), kAmplitudes);
    CHECK(max_abs(k.column) <= 1e-3 * s.M.norm());
    // the unextrapolated quotients shrink with δ
    CHECK(max_abs(k.raw.back()) < max_abs(k.raw.front()));
  }
  CHECK_THROWS_AS(symbol_fd_oracle(hyp, x, 0.0, xi, e(0, 0), {1e-3, 2e-3, 1e-4}), Error);
  CHECK_THROWS_AS(symbol_fd_oracle(hyp, x, 0.0, xi, e(0, 0), {1e-3, 1e-4}), Error);
}
