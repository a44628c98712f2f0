#include "xcflab/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "xcflab/curvature.hpp"
#include "xcflab/error.hpp"
#include "xcflab/parallel.hpp"

namespace xcf {

namespace {

Vec3 raise(const SymMat3& m, const Vec3& xi) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m(i, j) * xi[j];
  return r;
}

SymMat3 contravariant_e(const SymMat3& g, const SymMat3& E) {
  return congruence(inverse(g), E);
}

void check_context(const SymMat3& g, const Vec3& xi) {
  if (!is_spd(g)) throw Error(ErrorCode::NonPositiveMetric, "symbol context needs an SPD metric");
  if (xi[0] == 0.0 && xi[1] == 0.0 && xi[2] == 0.0)
    throw Error(ErrorCode::ZeroCovector, "symbol needs a non-zero covector");
}

SymMat3 basis(int s) {
  SymMat3 b;
  auto [i, j] = sym_pair(s);
  b(i, j) = 1.0;
  return b;
}

template <class F>
SymbolMatrix build(const SymMat3& g, const SymMat3& E, const Vec3& xi, F&& map) {
  SymbolMatrix out;
  out.context = {g, E, xi};
  for (int c = 0; c < 6; ++c) {
    const SymMat3 col = map(basis(c));
    for (int r = 0; r < 6; ++r) out.M(r, c) = col[r];
  }
  return out;
}

/// |ξ|²_P V − 2 Sym ξ⊗V(P ξ,·) + Tr_P V ξ⊗ξ for a contravariant form P.
SymMat3 ricci_like(const SymMat3& P, const Vec3& xi, const SymMat3& V) {
  const Vec3 s = raise(P, xi);
  return quad(P, xi) * V - 2.0 * sym_outer(xi, raise(V, s)) + contract(P, V) * sym_outer(xi, xi);
}

}  // namespace

SymMat3 SymbolMatrix::apply(const SymMat3& V) const {
  Eigen::Matrix<double, 6, 1> v;
  for (int s = 0; s < 6; ++s) v(s) = V[s];
  const Eigen::Matrix<double, 6, 1> r = M * v;
  SymMat3 out;
  for (int s = 0; s < 6; ++s) out[s] = r(s);
  return out;
}

SymMat3 sym_outer(const Vec3& a, const Vec3& b) {
  SymMat3 r;
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = sym_pair(s);
    r[s] = 0.5 * (a[i] * b[j] + a[j] * b[i]);
  }
  return r;
}

SymbolMatrix symbol_xcf(const SymMat3& g, const SymMat3& E, const Vec3& xi) {
  check_context(g, xi);
  const SymMat3 Eu = contravariant_e(g, E);
  return build(g, E, xi, [&](const SymMat3& V) { return ricci_like(Eu, xi, V); });
}

SymbolMatrix symbol_deturck(const SymMat3& g, const SymMat3& E, const Vec3& xi) {
  check_context(g, xi);
  const SymMat3 gi = inverse(g), Eu = contravariant_e(g, E);
  const Vec3 s = raise(gi, xi), sE = raise(Eu, xi);
  const Vec3 d{s[0] - sE[0], s[1] - sE[1], s[2] - sE[2]};
  return build(g, E, xi, [&](const SymMat3& V) {
    return quad(Eu, xi) * V + 2.0 * sym_outer(xi, raise(V, d)) +
           (contract(Eu, V) - contract(gi, V)) * sym_outer(xi, xi);
  });
}

RicciSymbols symbol_ricci(const SymMat3& g, const Vec3& xi) {
  check_context(g, xi);
  const SymMat3 gi = inverse(g);
  RicciSymbols r;
  r.raw = build(g, g, xi, [&](const SymMat3& V) { return ricci_like(gi, xi, V); });
  r.deturck = build(g, g, xi, [&](const SymMat3& V) { return quad(gi, xi) * V; });
  return r;
}

int kernel_dimension(const SymbolMatrix& s, double rel) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(s.M);
  const auto& sv = svd.singularValues();
  int k = 0;
  for (int i = 0; i < 6; ++i)
    if (sv(i) < rel * sv(0)) ++k;
  return k;
}

double min_real_eigenvalue(const SymbolMatrix& s) {
  const Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(s.M, false);
  return es.eigenvalues().real().minCoeff();
}

FdColumn symbol_fd_oracle(const MetricFamily& family, const Vec3& x, double t, const Vec3& xi,
                          const SymMat3& V, const std::vector<double>& amplitudes, double settle) {
  if (amplitudes.size() < 3)
    throw Error(ErrorCode::NonConvergentExtraction, "need at least three amplitudes");
  for (std::size_t k = 0; k < amplitudes.size(); ++k)
    if (!(amplitudes[k] > 0.0) || (k > 0 && !(amplitudes[k] < amplitudes[k - 1])))
      throw Error(ErrorCode::NonConvergentExtraction, "amplitudes must be positive and strictly decreasing");
  const MetricJet<double> base = primal_jet(family.jet3(x, t));
  check_context(base.g, xi);
  const CurvaturePoint bp = point_from_jet(base);

  auto velocity = [&](double a, double delta) {
    MetricJet<double> j = base;
    j.g += a * V;
    for (int s = 0; s < 6; ++s) {
      auto [p, q] = sym_pair(s);
      j.ddg[s] -= (a * xi[p] * xi[q] / (delta * delta)) * V;
    }
    return 2.0 * point_from_jet(j).adj_ein;
  };

  FdColumn out;
  std::vector<double> d2;
  for (double a : amplitudes) {
    const double delta = std::cbrt(a);
    d2.push_back(delta * delta);
    out.raw.push_back((-delta * delta / (2.0 * a)) * (velocity(a, delta) - velocity(-a, delta)));
  }
  for (std::size_t k = 0; k + 1 < out.raw.size(); ++k)
    out.extrapolated.push_back((1.0 / (d2[k] - d2[k + 1])) * (d2[k] * out.raw[k + 1] - d2[k + 1] * out.raw[k]));
  out.column = out.extrapolated.back();
  const double scale =
      std::max(max_abs(out.column), quad(contravariant_e(base.g, bp.ein), xi) * max_abs(V));
  const std::size_t m = out.extrapolated.size();
  out.change = max_abs(out.extrapolated[m - 1] - out.extrapolated[m - 2]) / std::max(scale, 1e-300);
  if (!(out.change <= settle))
    throw Error(ErrorCode::NonConvergentExtraction, "extrapolated symbol column did not settle");
  return out;
}

SymbolContext random_symbol_context(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(sq);
  std::normal_distribution<double> n(0.0, 1.0);
  auto spd = [&] {
    Mat3<double> a;
    for (auto& row : a.a)
      for (auto& v : row) v = n(rng);
    SymMat3 s = sym_part(a * transpose(a));
    for (int i = 0; i < 3; ++i) s(i, i) += 0.1;
    return s;
  };
  SymbolContext c;
  c.g = spd();
  c.E = spd();
  for (auto& v : c.xi) v = n(rng);
  const double len = std::sqrt(quad(inverse(c.g), c.xi));
  for (auto& v : c.xi) v /= len;
  return c;
}

SymbolScan symbol_scan(int samples, std::uint64_t seed, int kernel_samples) {
  if (samples <= 0) throw Error(ErrorCode::ConfigError, "samples must be positive");
  if (kernel_samples <= 0 || kernel_samples > samples) kernel_samples = samples;
  std::vector<int> kdim(samples, -1);
  std::vector<double> re(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t n) {
    const SymbolContext c = random_symbol_context(seed, n);
    if (static_cast<int>(n) < kernel_samples) kdim[n] = kernel_dimension(symbol_xcf(c.g, c.E, c.xi));
    re[n] = min_real_eigenvalue(symbol_deturck(c.g, c.E, c.xi)) / quad(contravariant_e(c.g, c.E), c.xi);
  });
  SymbolScan s;
  s.samples = samples;
  s.seed = seed;
  s.deturck_min_real_part = re[0];
  for (int n = 0; n < samples; ++n) {
    if (kdim[n] >= 0) ++s.kernel_histogram[kdim[n]];
    s.deturck_min_real_part = std::min(s.deturck_min_real_part, re[n]);
    if ((kdim[n] >= 0 && kdim[n] != 3) || !(re[n] > 0.0)) s.failures.push_back(random_symbol_context(seed, n));
  }
  return s;
}

nlohmann::json symbol_report(const SymbolScan& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (auto [k, v] : s.kernel_histogram) hist[std::to_string(k)] = v;
  nlohmann::json fails = nlohmann::json::array();
  for (const SymbolContext& c : s.failures)
    fails.push_back({{"g", c.g.c}, {"E", c.E.c}, {"xi", c.xi}});
  return {{"samples", s.samples},
          {"seed", s.seed},
          {"xcf_kernel_dim_histogram", hist},
          {"deturck_min_real_part", s.deturck_min_real_part},
          {"failures", fails}};
}

}  // namespace xcf
