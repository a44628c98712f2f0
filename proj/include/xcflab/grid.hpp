#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "xcflab/error.hpp"
#include "xcflab/families.hpp"
#include "xcflab/jet.hpp"
#include "xcflab/small_tensor.hpp"

namespace xcf {

using Index3 = std::array<int, 3>;

/// Half-open box of node indices [lo, hi). Indices may be negative or exceed the
/// grid: fields over extended boxes hold padding-derived data.
struct IndexBox {
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};

  int extent(int a) const { return hi[a] - lo[a]; }
  std::size_t size() const {
    return static_cast<std::size_t>(extent(0)) * extent(1) * extent(2);
  }
  bool contains(const Index3& p) const {
    for (int a = 0; a < 3; ++a)
      if (p[a] < lo[a] || p[a] >= hi[a]) return false;
    return true;
  }
  std::size_t linear(const Index3& p) const {
    return (static_cast<std::size_t>(p[2] - lo[2]) * extent(1) + (p[1] - lo[1])) * extent(0) +
           (p[0] - lo[0]);
  }
  Index3 unlinear(std::size_t n) const {
    Index3 p;
    p[0] = lo[0] + static_cast<int>(n % extent(0));
    n /= extent(0);
    p[1] = lo[1] + static_cast<int>(n % extent(1));
    p[2] = lo[2] + static_cast<int>(n / extent(1));
    return p;
  }
  IndexBox grown(int r) const {
    IndexBox b = *this;
    for (int a = 0; a < 3; ++a) {
      b.lo[a] -= r;
      b.hi[a] += r;
    }
    return b;
  }
};

template <class T>
class NodeField {
 public:
  NodeField() = default;
  explicit NodeField(const IndexBox& box) : box_(box), data_(box.size()) {}

  const IndexBox& box() const { return box_; }
  T& operator()(const Index3& p) { return data_[box_.linear(p)]; }
  const T& operator()(const Index3& p) const { return data_[box_.linear(p)]; }
  T& operator[](std::size_t n) { return data_[n]; }
  const T& operator[](std::size_t n) const { return data_[n]; }
  std::size_t size() const { return data_.size(); }

 private:
  IndexBox box_;
  std::vector<T> data_;
};

enum class BoundaryMode { DirichletAnalytic, PeriodicSynthetic };

const char* to_string(BoundaryMode m);

/// Sampled Riemannian metric on a coordinate box. Node (i1,i2,i3) sits at
/// origin + (i1 h1, i2 h2, i3 h3); i1 runs fastest in `values`.
struct MetricGrid {
  Index3 dims{0, 0, 0};
  Vec3 spacing{0, 0, 0};
  Vec3 origin{0, 0, 0};
  std::vector<SymMat3> values;
  BoundaryMode boundary = BoundaryMode::DirichletAnalytic;
  FamilyPtr family;
  /// Flow time the values belong to; Dirichlet padding is taken from the family here.
  double time = 0.0;

  IndexBox nodes() const { return {{0, 0, 0}, dims}; }
  /// Nodes whose values evolve freely: all nodes when periodic, the grid minus
  /// its outer layer when Dirichlet.
  IndexBox interior() const;
  bool is_boundary(const Index3& p) const;

  Vec3 position(const Index3& p) const {
    return {origin[0] + p[0] * spacing[0], origin[1] + p[1] * spacing[1],
            origin[2] + p[2] * spacing[2]};
  }
  SymMat3& at(const Index3& p) { return values[nodes().linear(p)]; }
  const SymMat3& at(const Index3& p) const { return values[nodes().linear(p)]; }

  /// Metric at any node index: stored values inside, family padding (Dirichlet)
  /// or wrapped values (periodic) outside.
  SymMat3 sample(const Index3& p) const;

  double min_spacing() const;
  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }

  /// Throws NonPositiveMetric / ConfigError on inconsistent data.
  void validate() const;
  bool same_layout(const MetricGrid& o) const;

  static MetricGrid from_family(FamilyPtr family, const Index3& dims, const Vec3& spacing,
                                const Vec3& origin, BoundaryMode mode = BoundaryMode::DirichletAnalytic,
                                double t = 0.0);
};

/// Stencil radius for the supported orders (2 -> 1, 4 -> 2).
int stencil_radius(int order);

/// Throws StencilUnderflow unless every axis has room for `order`.
void require_stencil(const MetricGrid& grid, int order);

/// Finite-difference metric 2-jet at node p.
MetricJet<double> fd_jet(const MetricGrid& grid, const Index3& p, int order);

/// Offsets and weights (before division by h) of the central first-derivative stencil.
struct FirstDerivativeStencil {
  int count;
  std::array<int, 4> offset;
  std::array<double, 4> weight;
};

inline FirstDerivativeStencil first_derivative_stencil(int order) {
  if (order == 2) return {2, {1, -1, 0, 0}, {0.5, -0.5, 0, 0}};
  return {4, {1, -1, 2, -2}, {8.0 / 12.0, -8.0 / 12.0, -1.0 / 12.0, 1.0 / 12.0}};
}

/// Central first derivative along `axis` of any field readable at neighbouring
/// indices through `read(Index3)`.
template <class T, class Read>
T fd_first(const Read& read, const Index3& p, int axis, double h, int order) {
  Index3 q = p;
  auto at = [&](int off) {
    q[axis] = p[axis] + off;
    return read(q);
  };
  if (order == 2) {
    T r = at(1);
    r -= at(-1);
    r *= 1.0 / (2.0 * h);
    return r;
  }
  T r = at(1);
  r -= at(-1);
  r *= 8.0;
  r -= at(2);
  r += at(-2);
  r *= 1.0 / (12.0 * h);
  return r;
}

}  // namespace xcf
