#include "xcflab/grid.hpp"

#include <algorithm>
#include <string>

namespace xcf {

const char* to_string(BoundaryMode m) {
  return m == BoundaryMode::DirichletAnalytic ? "dirichlet-analytic" : "periodic";
}

IndexBox MetricGrid::interior() const {
  if (boundary == BoundaryMode::PeriodicSynthetic) return nodes();
  return nodes().grown(-1);
}

bool MetricGrid::is_boundary(const Index3& p) const {
  return !interior().contains(p);
}

SymMat3 MetricGrid::sample(const Index3& p) const {
  if (nodes().contains(p)) return at(p);
  if (boundary == BoundaryMode::PeriodicSynthetic) {
    Index3 q;
    for (int a = 0; a < 3; ++a) q[a] = ((p[a] % dims[a]) + dims[a]) % dims[a];
    return at(q);
  }
  return family->metric(position(p), time);
}

double MetricGrid::min_spacing() const {
  return std::min({spacing[0], spacing[1], spacing[2]});
}

void MetricGrid::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 5)
      throw Error(ErrorCode::ConfigError, "grid dims must be >= 5 on every axis");
    if (!(spacing[a] > 0.0)) throw Error(ErrorCode::ConfigError, "grid spacing must be positive");
  }
  if (values.size() != nodes().size())
    throw Error(ErrorCode::ConfigError, "grid values length " + std::to_string(values.size()) +
                                            " does not match dims");
  if (boundary == BoundaryMode::DirichletAnalytic && !family)
    throw Error(ErrorCode::ConfigError, "dirichlet-analytic grid needs a family");
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!is_spd(values[n])) {
      Index3 p = nodes().unlinear(n);
      throw Error(ErrorCode::NonPositiveMetric,
                  "metric not positive-definite at node (" + std::to_string(p[0]) + "," +
                      std::to_string(p[1]) + "," + std::to_string(p[2]) + ")");
    }
  }
}

bool MetricGrid::same_layout(const MetricGrid& o) const {
  return dims == o.dims && spacing == o.spacing && origin == o.origin && boundary == o.boundary;
}

MetricGrid MetricGrid::from_family(FamilyPtr family, const Index3& dims, const Vec3& spacing,
                                   const Vec3& origin, BoundaryMode mode, double t) {
  MetricGrid g;
  g.dims = dims;
  g.spacing = spacing;
  g.origin = origin;
  g.boundary = mode;
  g.family = std::move(family);
  g.time = t;
  g.values.resize(g.nodes().size());
  for (std::size_t n = 0; n < g.values.size(); ++n)
    g.values[n] = g.family->metric(g.position(g.nodes().unlinear(n)), t);
  g.validate();
  return g;
}

int stencil_radius(int order) {
  if (order == 2) return 1;
  if (order == 4) return 2;
  throw Error(ErrorCode::ConfigError, "stencil order must be 2 or 4");
}

void require_stencil(const MetricGrid& grid, int order) {
  const int r = stencil_radius(order);
  // A periodic axis needs 2r+1 distinct nodes; a Dirichlet one needs an interior node.
  for (int a = 0; a < 3; ++a)
    if (grid.dims[a] < 2 * r + 1 || grid.dims[a] < 3)
      throw Error(ErrorCode::StencilUnderflow,
                  "axis " + std::to_string(a) + " has " + std::to_string(grid.dims[a]) +
                      " nodes, too few for order " + std::to_string(order));
}

MetricJet<double> fd_jet(const MetricGrid& grid, const Index3& p, int order) {
  MetricJet<double> j;
  const auto& h = grid.spacing;
  auto S = [&](int a, int da, int b, int db) {
    Index3 q = p;
    q[a] += da;
    q[b] += db;
    return grid.sample(q);
  };
  const SymMat3 g0 = grid.sample(p);
  j.g = g0;
  if (order == 2) {
    for (int a = 0; a < 3; ++a) {
      SymMat3 gp = S(a, 1, a, 0), gm = S(a, -1, a, 0);
      j.dg[a] = (0.5 / h[a]) * (gp - gm);
      j.ddg[sym_index(a, a)] = (1.0 / (h[a] * h[a])) * (gp + gm - 2.0 * g0);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        j.ddg[sym_index(a, b)] =
            (0.25 / (h[a] * h[b])) * (S(a, 1, b, 1) - S(a, 1, b, -1) - S(a, -1, b, 1) + S(a, -1, b, -1));
    return j;
  }
  // Fourth order: standard 5-point first/second derivatives, tensor-product mixed terms.
  for (int a = 0; a < 3; ++a) {
    SymMat3 p1 = S(a, 1, a, 0), m1 = S(a, -1, a, 0), p2 = S(a, 2, a, 0), m2 = S(a, -2, a, 0);
    j.dg[a] = (1.0 / (12.0 * h[a])) * (8.0 * (p1 - m1) - (p2 - m2));
    j.ddg[sym_index(a, a)] =
        (1.0 / (12.0 * h[a] * h[a])) * (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * g0);
  }
  constexpr int off[4] = {1, -1, 2, -2};
  constexpr double w[4] = {8.0, -8.0, -1.0, 1.0};
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      SymMat3 acc;
      for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v) acc += (w[u] * w[v]) * S(a, off[u], b, off[v]);
      j.ddg[sym_index(a, b)] = (1.0 / (144.0 * h[a] * h[b])) * acc;
    }
  return j;
}

}  // namespace xcf
