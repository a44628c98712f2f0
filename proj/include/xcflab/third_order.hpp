#pragma once

// Quantities built from the first covariant derivative of Ein: the T tensor,
// the Devil tensor, the Codazzi defect of Ob and the cross-curvature Bianchi
// residual. Everything follows from (g, Ein, ∇Ein) by the chain rule, so the
// same point routine serves grids, exact jets and homogeneous frames.

#include <array>
#include <memory>

#include "xcflab/curvature.hpp"
#include "xcflab/families.hpp"
#include "xcflab/grid.hpp"

namespace xcf {

struct ThirdOrderPoint {
  Sym3<double> e_up;           // E^{ij}
  std::array<SymMat3, 3> grad_e_up;  // ∇_l E^{ij}, slot l
  Vec3 grad_det_e{};           // ∇_l detE
  Tensor3<double> T{};         // T^{kij} at t3(k,i,j)
  Vec3 Ti{};                   // T^i
  Tensor3<double> D{};         // D^{ijk}
  Tensor3<double> defect{};    // ∇_i Ob_jk − ∇_j Ob_ik at t3(i,j,k)
  double devil_v2 = 0.0;       // |D|²_V
  double defect_e2 = 0.0;      // |defect|²_E
  double det_e = 0.0;
  double grad_sqrt_det_e2 = 0.0;  // |∇√detE|²_E
  Vec3 bianchi{};              // E^{ij}∇_i adjE_jk − ½ E^{ij}∇_k adjE_ij
  double max_grad_ob = 0.0;    // max |∇_i Ob_jk|

  // Identity residuals, each relative to the size of T.
  double lemma_residual = 0.0;   // ||D|²_V detE − |defect|²_E| / max(both, tiny)
  double antisym_residual = 0.0;
  double cyclic_residual = 0.0;
  double trace_residual = 0.0;   // max over the three V-traces

  double bianchi_norm() const;
};

/// Right-hand sides of the evolution equations for E^{ij} and detE under raw XCF,
/// given the second-order terms □E^{ij} and □detE (□ = E^{ab}∇²_ab).
struct EvolutionPrediction {
  SymMat3 dt_e_up;
  double dt_det_e = 0.0;
};
EvolutionPrediction evolution_prediction(const SymMat3& g, const ThirdOrderPoint& p,
                                         const SymMat3& box_e_up, double box_det_e,
                                         double trace_cross);

/// □E^{ij} when the frame components of ∇E are constant (left-invariant data).
SymMat3 homogeneous_box_e_up(const Tensor3<double>& gamma, const ThirdOrderPoint& p);

/// (∇_l Ein)_ab = ∂_l Ein_ab − Γ^p_la Ein_pb − Γ^p_lb Ein_ap.
std::array<SymMat3, 3> covariant_ein_derivative(const Tensor3<double>& gamma, const SymMat3& ein,
                                                const std::array<SymMat3, 3>& partial_ein);

/// Throws NonPositiveEin when Ein is not positive-definite.
ThirdOrderPoint third_order_point(const SymMat3& g, const SymMat3& ein,
                                  const std::array<SymMat3, 3>& nabla_ein);

/// Exact third-order data of a closed-form family at a chart point (the
/// derivative of Ein comes from the family's 3-jet, not from a stencil).
ThirdOrderPoint third_order_exact(const MetricFamily& family, const Vec3& x, double t);

struct ThirdOrderField {
  NodeField<ThirdOrderPoint> points;
  const IndexBox& box() const { return points.box(); }
  const ThirdOrderPoint& at(const Index3& p) const { return points(p); }

  double max_lemma_residual() const;
  double max_antisym_residual() const;
  double max_cyclic_residual() const;
  double max_trace_residual() const;
  double max_defect() const;
};

/// Ein on an arbitrary index box (padding supplies values beyond the grid).
NodeField<SymMat3> ein_field(const MetricGrid& grid, int order, const IndexBox& box);

/// Grid route: ∇Ein by central differences of Ein, Γ from the pack.
ThirdOrderField third_order(const MetricGrid& grid, const CurvaturePack& pack);

/// Max-norm of the Bianchi-type residual over the pack's nodes.
double bianchi_cross_residual(const MetricGrid& grid, const CurvaturePack& pack);
double bianchi_cross_residual(const ThirdOrderField& field);

}  // namespace xcf
