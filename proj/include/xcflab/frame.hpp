#pragma once

// Left-invariant metrics on 3-dimensional Lie groups. With a left-invariant
// frame every curvature quantity is algebraic in (c, m) and the XCF becomes an
// ODE for the 6 entries of m.

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "xcflab/curvature.hpp"
#include "xcflab/families.hpp"
#include "xcflab/monitors.hpp"
#include "xcflab/third_order.hpp"

namespace xcf {

struct FrameMetric {
  Tensor3<double> c{};  // c^k_ij at t3(k,i,j): [e_i, e_j] = c^k_ij e_k
  SymMat3 m;
};

/// ad(e3) = diag(a1, a2) on span(e1, e2); [e1, e2] = 0. a1 = a2 = 1 is hyperbolic space.
FrameMetric solvable_frame(double a1, double a2, const SymMat3& m);

double jacobi_residual(const Tensor3<double>& c);
/// Throws ConfigError (antisymmetry), JacobiViolation, NonPositiveMetric.
void validate(const FrameMetric& fm);

/// Levi-Civita coefficients ∇_{e_i} e_j = Γ^k_ij e_k from the Koszul formula.
Tensor3<double> frame_connection(const FrameMetric& fm);
CurvatureCore<double> frame_core(const FrameMetric& fm);
CurvaturePoint frame_curvature(const FrameMetric& fm);
/// Third-order data; the frame components of ∇Ein are pure connection terms.
ThirdOrderPoint frame_third_order(const FrameMetric& fm);
/// Monitor sample per unit frame volume cell.
NodeSample frame_sample(const FrameMetric& fm);

enum class FrameVariant { Raw, Normalized };

struct FrameFlow {
  FrameVariant variant = FrameVariant::Raw;
  double K = -1.0;  // normalized variant only
};

SymMat3 frame_velocity(const FrameMetric& fm, const FrameFlow& flow);

enum class RunStatus { Completed, EinDegenerate, CflStall };
const char* to_string(RunStatus s);

struct OdeRun {
  std::vector<double> times;
  std::vector<FrameMetric> states;
  std::vector<MonitorRow> monitors;
  RunStatus status = RunStatus::Completed;
  double stop_time = 0.0;
};

/// Classical RK4 with fixed dt; halts with EinDegenerate status when the
/// smallest eigenvalue of opEin drops below 1e-10.
OdeRun xcf_ode_run(const FrameMetric& fm0, double t_end, double dt, const FrameFlow& flow);

/// Residuals of the E^{ij} and detE evolution equations at a middle state.
std::pair<double, double> frame_evolution_residuals(const FrameMetric& prev, const FrameMetric& cur,
                                                    const FrameMetric& next, double dt);

nlohmann::json frame_to_json(const FrameMetric& fm);
FrameMetric frame_from_json(const nlohmann::json& j);

/// Chart realization of a diagonal solvable frame metric: coordinates (x, y, w)
/// with e1 = e^{a1 w}∂x, e2 = e^{a2 w}∂y, e3 = ∂w. Boundary data at time t
/// follows the raw XCF solution m(t) of the frame ODE.
class FrameChartFamily final : public MetricFamily {
 public:
  FrameChartFamily(double a1, double a2, const SymMat3& m0);
  std::string name() const override { return "frame_chart"; }
  SymMat3 metric(const Vec3& x, double t) const override;
  SymMat3 metric_rate(const Vec3& x, double t) const override;
  MetricJet3 jet3(const Vec3& x, double t) const override;
  nlohmann::json to_json() const override;

  FrameMetric frame_at(double t) const;

  template <class T>
  Sym3<T> chart_metric(const Vec3T<T>& x, const SymMat3& m) const {
    using std::exp;
    const T th[3] = {exp(x[2] * (-a1_)), exp(x[2] * (-a2_)), T(1.0)};
    Sym3<T> g;
    for (int s = 0; s < 6; ++s) {
      auto [i, j] = sym_pair(s);
      g[s] = th[i] * th[j] * m[s];
    }
    return g;
  }

 private:
  double a1_, a2_;
  SymMat3 m0_;
  mutable std::mutex mu_;
  mutable std::map<double, SymMat3> cache_;
};

FamilyPtr frame_chart_from_json(const nlohmann::json& j);

}  // namespace xcf
