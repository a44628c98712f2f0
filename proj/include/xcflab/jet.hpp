#pragma once

#include <array>

#include "xcflab/dual.hpp"
#include "xcflab/small_tensor.hpp"

namespace xcf {

/// Metric 2-jet at a point: g, its first and second coordinate derivatives.
/// Second derivatives are stored once per unordered pair (a,b), slot sym_index(a,b).
template <class T>
struct MetricJet {
  Sym3<T> g;
  std::array<Sym3<T>, 3> dg;
  std::array<Sym3<T>, 6> ddg;

  const Sym3<T>& second(int a, int b) const { return ddg[sym_index(a, b)]; }
};

template <class T>
MetricJet<T> operator+(MetricJet<T> a, const MetricJet<T>& b) {
  a.g += b.g;
  for (int i = 0; i < 3; ++i) a.dg[i] += b.dg[i];
  for (int i = 0; i < 6; ++i) a.ddg[i] += b.ddg[i];
  return a;
}

template <class T>
MetricJet<T> scaled(MetricJet<T> j, double s) {
  j.g *= T(s);
  for (auto& x : j.dg) x *= T(s);
  for (auto& x : j.ddg) x *= T(s);
  return j;
}

/// A 2-jet whose entries carry one more derivative: evaluating curvature on it
/// gives the curvature's first coordinate derivatives exactly.
using MetricJet3 = MetricJet<Dual1>;

/// Converts a family value computed on Dual3 into a MetricJet3.
inline MetricJet3 jet3_from_dual(const Sym3<Dual3>& G) {
  MetricJet3 j;
  for (int s = 0; s < 6; ++s) {
    const Dual3& x = G[s];
    j.g[s].v = x.v.v.v;
    for (int c = 0; c < 3; ++c) j.g[s].d[c] = x.d[c].v.v;
    for (int a = 0; a < 3; ++a) {
      j.dg[a][s].v = x.d[a].v.v;
      for (int c = 0; c < 3; ++c) j.dg[a][s].d[c] = x.d[a].d[c].v;
    }
    for (int p = 0; p < 6; ++p) {
      auto [a, b] = sym_pair(p);
      j.ddg[p][s].v = x.d[a].d[b].v;
      for (int c = 0; c < 3; ++c) j.ddg[p][s].d[c] = x.d[a].d[b].d[c];
    }
  }
  return j;
}

/// Drops the extra derivative layer.
inline MetricJet<double> primal_jet(const MetricJet3& j) {
  MetricJet<double> r;
  for (int s = 0; s < 6; ++s) {
    r.g[s] = j.g[s].v;
    for (int a = 0; a < 3; ++a) r.dg[a][s] = j.dg[a][s].v;
    for (int p = 0; p < 6; ++p) r.ddg[p][s] = j.ddg[p][s].v;
  }
  return r;
}

}  // namespace xcf
