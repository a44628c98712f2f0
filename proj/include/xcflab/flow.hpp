#pragma once

// Method-of-lines evolution of a MetricGrid under XCF (raw, DeTurck,
// normalized) with classical RK4, plus the grid monitor pipeline.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xcflab/curvature.hpp"
#include "xcflab/frame.hpp"
#include "xcflab/grid.hpp"
#include "xcflab/monitors.hpp"
#include "xcflab/third_order.hpp"

namespace xcf {

enum class FlowVariant { Raw, DeTurck, Normalized };
const char* to_string(FlowVariant v);

struct FlowSpec {
  FlowVariant variant = FlowVariant::Raw;
  double K = -1.0;  // normalized target curvature
  int stencil_order = 2;
  double cfl = 0.2;
};

struct FlowState {
  double t = 0.0;
  long step = 0;
  MetricGrid metric;
  std::shared_ptr<const MetricGrid> reference;  // g0 of the DeTurck field
};

FlowState initial_state(MetricGrid g0);

/// Boundary data for the normalized flow: ĝ(x,t) = e^{-2K²t} g(x, τ(t)) with
/// τ = (e^{4K²t} − 1)/(4K²), where g is a raw-XCF family.
class NormalizedBoundaryFamily final : public MetricFamily {
 public:
  NormalizedBoundaryFamily(FamilyPtr base, double K);
  std::string name() const override { return base_->name(); }
  SymMat3 metric(const Vec3& x, double t) const override;
  SymMat3 metric_rate(const Vec3& x, double t) const override;
  MetricJet3 jet3(const Vec3& x, double t) const override;
  nlohmann::json to_json() const override;
  double raw_time(double t) const;
  const FamilyPtr& base() const { return base_; }

 private:
  FamilyPtr base_;
  double K2_;
};

/// Node-ordered velocity field over the whole grid. Interior nodes carry the
/// flow velocity; Dirichlet boundary nodes carry the family's time derivative.
using VelocityField = std::vector<SymMat3>;

VelocityField xcf_rhs(const FlowState& s, int order);
VelocityField deturck_rhs(const FlowState& s, int order);
VelocityField normalized_rhs(const FlowState& s, double K, int order);
VelocityField flow_rhs(const FlowState& s, const FlowSpec& spec);

/// DeTurck vector field W^k = g^{ij}(Γ^k_ij − Γ0^k_ij) on a box of nodes.
NodeField<Vec3> deturck_field(const MetricGrid& g, const MetricGrid& reference, int order,
                              const IndexBox& box);
/// Lie derivative L_W g over the interior with W from deturck_field.
NodeField<SymMat3> deturck_lie_term(const MetricGrid& g, const MetricGrid& reference, int order);

/// Largest eigenvalue of the contravariant E^{ij} matrix over interior nodes.
double max_diffusion(const MetricGrid& g, int order);
/// Ratio of the spectral radii of the order-2 and order-`order` second-difference stencils.
double stencil_cfl_factor(int order);
/// factor·cfl·h_min² / max_diffusion.
double cfl_dt_bound(const MetricGrid& g, int order, double cfl);
/// Smallest eigenvalue of opEin over the interior.
double min_ein_eigenvalue(const MetricGrid& g, int order);

/// One RK4 step. Throws CflViolation when dt exceeds the CFL bound and
/// EinDegenerateError when opEin loses positivity (eigenvalue < 1e-10).
FlowState step(const FlowState& s, double dt, const FlowSpec& spec);

/// Everything a monitor row needs from one state.
struct StateAnalysis {
  double t = 0.0;
  std::vector<NodeSample> samples;        // interior nodes
  std::vector<SymMat3> e_up;              // E^{ij} per interior node
  std::vector<double> det_e;
  std::vector<EvolutionPrediction> prediction;
  /// Interior nodes whose residual stencils see no Dirichlet data.
  std::vector<std::size_t> residual_nodes;
  bool ein_spd = true;
};

StateAnalysis analyze(const FlowState& s, int order);
/// Keeps only residual nodes whose positions lie in the closed box [lo, hi].
void restrict_residual_region(StateAnalysis& a, const MetricGrid& g, const Vec3& lo, const Vec3& hi);
MonitorRow monitors(const StateAnalysis& cur, const StateAnalysis* prev, const StateAnalysis* next);
MonitorRow monitors(const FlowState& s, const FlowState* prev, const FlowState* next, int order);

/// Max-norm residuals of the E^{ij} and detE evolution equations at `cur`, over
/// StateAnalysis::residual_nodes.
/// Throws MismatchedGrids on unequal spacing in time or differing layouts.
std::pair<double, double> evolution_residuals(const StateAnalysis& prev, const StateAnalysis& cur,
                                              const StateAnalysis& next);
std::pair<double, double> evolution_residuals(const FlowState& prev, const FlowState& cur,
                                              const FlowState& next, int order);

struct GridRunOptions {
  double t_end = 0.0;
  std::optional<double> dt;   // exactly one of dt / cfl_dt
  std::optional<double> cfl;  // dt = t_end / ceil(t_end / (cfl h²/λ))
  bool compute_monitors = true;
  long snapshot_cadence = 0;  // 0: none
  std::function<void(const FlowState&)> on_snapshot;
  std::function<void(const MonitorRow&)> on_row;
};

struct GridRun {
  std::vector<MonitorRow> rows;
  FlowState final_state;
  RunStatus status = RunStatus::Completed;
  double stop_time = 0.0;
  double dt = 0.0;
  long steps = 0;
};

GridRun run_grid_flow(const MetricGrid& g0, const FlowSpec& spec, const GridRunOptions& opt);

}  // namespace xcf
