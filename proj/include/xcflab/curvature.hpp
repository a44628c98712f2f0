#pragma once

// Pointwise curvature calculus. Conventions:
//   Rm(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y]Z,  R(∂a,∂b)∂c = R^m_abc ∂m,
//   R_abcd = g_dm R^m_abc,  Ric_bc = g^ad R_abcd,  Ein = Ric − (Sc/2) g.
// A space of constant curvature K has R = −(K/2) g⊼g and Ein = −K g.

#include <array>

#include "xcflab/grid.hpp"
#include "xcflab/jet.hpp"
#include "xcflab/small_tensor.hpp"

namespace xcf {

/// Curvature quantities that are polynomial in the metric 2-jet (and g⁻¹).
template <class T>
struct CurvatureCore {
  Tensor3<T> gamma{};  // Γ^k_ij at t3(k,i,j)
  Tensor4<T> rm{};     // R_abcd at t4(a,b,c,d)
  Sym3<T> ric;
  T sc{};
  Sym3<T> ein;
};

template <class T>
CurvatureCore<T> curvature_core(const MetricJet<T>& j) {
  CurvatureCore<T> out;
  const Sym3<T> gi = inverse(j.g);
  // Γ_{k,ij} = ½(∂i g_jk + ∂j g_ik − ∂k g_ij)
  Tensor3<T> low{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int jj = i; jj < 3; ++jj) {
        T v = (j.dg[i](jj, k) + j.dg[jj](i, k) - j.dg[k](i, jj)) * 0.5;
        low[t3(k, i, jj)] = v;
        low[t3(k, jj, i)] = v;
      }
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int jj = i; jj < 3; ++jj) {
        T acc = gi(k, 0) * low[t3(0, i, jj)];
        acc += gi(k, 1) * low[t3(1, i, jj)];
        acc += gi(k, 2) * low[t3(2, i, jj)];
        out.gamma[t3(k, i, jj)] = acc;
        out.gamma[t3(k, jj, i)] = acc;
      }
  auto& R = out.rm;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          T v = (j.second(a, c)(b, d) - j.second(a, d)(b, c) - j.second(b, c)(a, d) +
                 j.second(b, d)(a, c)) *
                0.5;
          for (int m = 0; m < 3; ++m)
            v += low[t3(m, b, d)] * out.gamma[t3(m, a, c)] - low[t3(m, a, d)] * out.gamma[t3(m, b, c)];
          R[t4(a, b, c, d)] = v;
        }
  for (int s = 0; s < 6; ++s) {
    auto [b, c] = sym_pair(s);
    T acc = T(0);
    for (int a = 0; a < 3; ++a)
      for (int d = 0; d < 3; ++d) acc += gi(a, d) * R[t4(a, b, c, d)];
    out.ric[s] = acc;
  }
  out.sc = contract(gi, out.ric);
  for (int s = 0; s < 6; ++s) out.ein[s] = out.ric[s] - j.g[s] * (out.sc * 0.5);
  return out;
}

/// Lowered cross curvature tensor g·adj(Ein)·g / det g (the adjugate of the
/// endomorphism g⁻¹Ein, with an index lowered). Polynomial, so defined for any Ein.
template <class T>
Sym3<T> adj_ein_lower(const Sym3<T>& g, const Sym3<T>& ein) {
  Sym3<T> r = congruence(g, adjugate(ein));
  T inv = T(1) / det(g);
  for (auto& v : r.c) v *= inv;
  return r;
}

/// Every pointwise field of the curvature pack at one node.
struct CurvaturePoint {
  SymMat3 g;
  Tensor3<double> gamma{};
  Tensor4<double> rm{};
  SymMat3 ric;
  double sc = 0.0;
  SymMat3 ein;
  Vec3 lambda{};         // eigenvalues of g⁻¹Ein, ascending
  Mat3<double> frame;    // columns: g-orthonormal eigenvectors E_i
  SymMat3 adj_ein;
  double det_e = 0.0;    // det(g⁻¹Ein)
  double trace_cross = 0.0;
  bool ein_spd = false;  // all lambda > 0; V and Ob are only filled then
  SymMat3 V;             // (g Ein⁻¹ g), the bilinear form of opEin⁻¹
  SymMat3 ob;            // √detE · V
};

/// Completes the derived fields (eigen-decomposition, adjugate, V, Ob).
CurvaturePoint finish_point(const SymMat3& g, const CurvatureCore<double>& core);

/// Point with the given (g, Ein) and the algebraic curvature tensor the Ricci
/// decomposition assigns to them (Rm = −Ein⊼g + (TrE/2) g⊼g). Γ is zero.
CurvaturePoint model_point(const SymMat3& g, const SymMat3& ein);

CurvaturePoint point_from_jet(const MetricJet<double>& jet);

/// Kulkarni–Nomizu product (h⊼k)_abcd = h_ac k_bd + h_bd k_ac − h_ad k_bc − h_bc k_ad.
Tensor4<double> kulkarni_nomizu(const SymMat3& h, const SymMat3& k);

/// Sectional curvature of the plane spanned by eigenvectors E_i, E_j.
double sectional(const CurvaturePoint& p, int i, int j);
/// Sectional curvature of the plane spanned by two arbitrary vectors.
double sectional(const CurvaturePoint& p, const Vec3& x, const Vec3& y);

/// −½ Tr(Z ↦ Rm(opEin Z, ·)·), lowered. No eigen-decomposition involved.
SymMat3 cross_via_ricci_e(const CurvaturePoint& p);

/// max|Rm − (−Ein⊼g + (TrE/2) g⊼g)| divided by max(|Rm|, 1).
double ricci_decomposition_residual(const CurvaturePoint& p);

/// Curvature data on a box of node indices (by default the grid interior).
struct CurvaturePack {
  int stencil_order = 2;
  NodeField<CurvaturePoint> points;

  const IndexBox& box() const { return points.box(); }
  const CurvaturePoint& at(const Index3& p) const { return points(p); }
};

/// Raw curvature core at a grid node from its finite-difference 2-jet.
CurvatureCore<double> grid_core(const MetricGrid& grid, const Index3& p, int order);

CurvaturePack curvature_pack(const MetricGrid& grid, int stencil_order);
CurvaturePack curvature_pack(const MetricGrid& grid, int stencil_order, const IndexBox& box);

/// Field-level helpers, maxima over the pack's nodes.
SymMat3 cross_via_ricci_e_at(const CurvaturePack& pack, const Index3& p);
double ricci_decomposition_residual(const CurvaturePack& pack);

}  // namespace xcf
