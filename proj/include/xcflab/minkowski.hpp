#pragma once

// Extrinsic side: the Weingarten map induced by the curvature, the Gauss
// equation, integration of the Gauss–Codazzi frame system into Minkowski space
// R^{3,1}, and the Gauss curvature flow of hyperboloids.

#include <array>
#include <optional>

#include "json.hpp"
#include "xcflab/curvature.hpp"
#include "xcflab/grid.hpp"

namespace xcf {

/// Signature (+,+,+,−).
using MinkVec = std::array<double, 4>;
double mink(const MinkVec& x, const MinkVec& y);

struct WeingartenPoint {
  Mat3<double> W;  // endomorphism W^i_j = √detE (opEin⁻¹)^i_j
  SymMat3 A;       // g·W
  double K = 0.0;  // det W = √detE
  Vec3 kappa{};    // principal curvatures, ascending
};

/// Throws NonPositiveEin.
WeingartenPoint weingarten_point(const CurvaturePoint& p);
NodeField<WeingartenPoint> weingarten_from_intrinsic(const CurvaturePack& pack);

/// Max-norms of Rm − (A_ac A_bd − A_ad A_bc), Ric − (A g⁻¹A − H A) and Sc − (|A|² − H²).
struct GaussResidual {
  double full = 0.0, contracted = 0.0, scalar = 0.0;
};
GaussResidual gauss_residual(const CurvaturePoint& p, const SymMat3& A);
GaussResidual gauss_residual(const CurvaturePack& pack, const NodeField<SymMat3>& A);

/// max |2K·A − 2adjEin| / max(|adjEin|, tiny) over the pack (A = Ob).
double gcf_identity_residual(const CurvaturePack& pack);

struct EmbeddingResiduals {
  double metric = 0.0;  // max |<e_i,e_j> − g_ij|
  double path = 0.0;    // max |F − F_reversed order|
  double normal = 0.0;  // max(|<ν,ν> + 1|, |<e_i,ν>|)
};

struct EmbeddingState {
  Index3 dims{0, 0, 0};
  Index3 base{0, 0, 0};
  std::array<int, 3> path_order{0, 1, 2};
  std::vector<MinkVec> F, nu;
  std::vector<std::array<MinkVec, 3>> frame;
  EmbeddingResiduals residuals;
};

/// A over every grid node (the pack must cover the grid grown by one node).
/// Transport runs from the central node along coordinate lines in the given
/// axis order with RK4; coefficients at half steps come from cubic
/// interpolation along the line. Throws NonPositiveEin / NonSymmetricA / ConfigError.
EmbeddingState integrate_embedding(const MetricGrid& grid, const CurvaturePack& pack,
                                   const NodeField<SymMat3>& A, std::array<int, 3> path_order);

/// Ob on every node of the grid grown by one, plus the pack it came from.
struct EmbeddingInput {
  CurvaturePack pack;
  NodeField<SymMat3> A;
};
EmbeddingInput embedding_input(const MetricGrid& grid, int order);

/// Both orders, residuals filled (path against the reversed order).
EmbeddingState embed(const MetricGrid& grid, int order, std::array<int, 3> path_order = {0, 1, 2});

struct QuadricFit {
  MinkVec center{};
  double mean = 0.0;       // mean of <F − c, F − c>
  double deviation = 0.0;  // max |<F − c, F − c> − target|
};
/// Least-squares c minimizing the variance of <F − c, F − c>; deviation measured
/// against `target` (mean when absent).
QuadricFit quadric_fit(const EmbeddingState& s, std::optional<double> target = std::nullopt);

nlohmann::json embedding_to_json(const EmbeddingState& s);

/// Hyperboloids of radius r(t) = (4t + r0⁴)^{1/4} moving by Gauss curvature.
struct HyperboloidFamily {
  double r0 = 1.0;
  double radius(double t) const;
  double radius_rate(double t) const;  // r^{-3}
};

struct GcfXcfReport {
  double r = 0.0, K_gauss = 0.0;
  double extrinsic = 0.0;     // ∂t(r²)·coefficient of g_H, = 2·K·r
  double gauss_route = 0.0;   // 2·Kgauss·A coefficient
  double intrinsic = 0.0;     // 2·adjEin(r² g_H) coefficient, through the curvature code
  double xcf_exact = 0.0;     // √(4K0²t + 1)·r0²
  double max_diff = 0.0;      // over all pairs of routes, relative
};
GcfXcfReport gcf_xcf_correspondence(double r0, double t);

struct IntegrabilityResult {
  bool integrable = false;
  double defect = 0.0;  // Richardson-extrapolated max Codazzi defect
  double scale = 0.0;   // max(|∇Ob|, |Γ|·|Ob|)
};
/// Codazzi defect of Ob with order-4 stencils at h and 2h, extrapolated in h.
/// Needs a Dirichlet grid. Throws NonPositiveEin.
IntegrabilityResult is_integrable(const MetricGrid& grid, double tol);

}  // namespace xcf
