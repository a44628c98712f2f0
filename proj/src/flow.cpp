#include "xcflab/flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "xcflab/parallel.hpp"

namespace xcf {

const char* to_string(FlowVariant v) {
  switch (v) {
    case FlowVariant::Raw: return "raw";
    case FlowVariant::DeTurck: return "deturck";
    case FlowVariant::Normalized: return "normalized";
  }
  return "?";
}

NormalizedBoundaryFamily::NormalizedBoundaryFamily(FamilyPtr base, double K)
    : base_(std::move(base)), K2_(K * K) {}

nlohmann::json NormalizedBoundaryFamily::to_json() const {
  return {{"name", "normalized_boundary"}, {"K", -std::sqrt(K2_)}, {"base", base_->to_json()}};
}

double NormalizedBoundaryFamily::raw_time(double t) const {
  return std::expm1(4.0 * K2_ * t) / (4.0 * K2_);
}

SymMat3 NormalizedBoundaryFamily::metric(const Vec3& x, double t) const {
  return std::exp(-2.0 * K2_ * t) * base_->metric(x, raw_time(t));
}

SymMat3 NormalizedBoundaryFamily::metric_rate(const Vec3& x, double t) const {
  const double tau = raw_time(t);
  return -2.0 * K2_ * std::exp(-2.0 * K2_ * t) * base_->metric(x, tau) +
         std::exp(2.0 * K2_ * t) * base_->metric_rate(x, tau);
}

MetricJet3 NormalizedBoundaryFamily::jet3(const Vec3& x, double t) const {
  return scaled(base_->jet3(x, raw_time(t)), std::exp(-2.0 * K2_ * t));
}

FlowState initial_state(MetricGrid g0) {
  g0.validate();
  FlowState s;
  s.t = g0.time;
  s.metric = g0;
  s.reference = std::make_shared<const MetricGrid>(std::move(g0));
  return s;
}

namespace {

Eigen::Matrix3d to_eigen(const SymMat3& s) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = s(i, j);
  return m;
}

/// Eigenvalues of g⁻¹Ein (ascending), through the Cholesky similarity.
Eigen::Vector3d op_eigenvalues(const SymMat3& g, const SymMat3& ein) {
  Eigen::LLT<Eigen::Matrix3d> llt(to_eigen(g));
  const Eigen::Matrix3d L = llt.matrixL();
  Eigen::Matrix3d S = L.triangularView<Eigen::Lower>().solve(to_eigen(ein));
  S = L.triangularView<Eigen::Lower>().solve(S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double max_eigenvalue(const SymMat3& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(to_eigen(s), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[2];
}

Tensor3<double> christoffel(const MetricJet<double>& j) {
  const SymMat3 gi = inverse(j.g);
  Tensor3<double> low{}, up{};
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        low[t3(k, a, b)] = 0.5 * (j.dg[a](b, k) + j.dg[b](a, k) - j.dg[k](a, b));
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double acc = 0.0;
        for (int m = 0; m < 3; ++m) acc += gi(k, m) * low[t3(m, a, b)];
        up[t3(k, a, b)] = acc;
      }
  return up;
}

void require_spd(const MetricGrid& g) {
  for (std::size_t n = 0; n < g.values.size(); ++n)
    if (!is_spd(g.values[n]))
      throw Error(ErrorCode::NonPositiveMetric, "metric lost positivity at node " + std::to_string(n));
}

/// 2·adjEin on the interior, boundary rates elsewhere. Also reports the
/// smallest opEin eigenvalue and the largest E^{ij} eigenvalue it met.
struct RhsPass {
  VelocityField v;
  double min_lambda = std::numeric_limits<double>::infinity();
  double max_diffusion = 0.0;
};

RhsPass xcf_pass(const MetricGrid& g, int order, bool spectra) {
  require_spd(g);
  require_stencil(g, order);
  RhsPass out;
  out.v.assign(g.values.size(), SymMat3{});
  const IndexBox all = g.nodes();
  const IndexBox in = g.interior();
  if (g.boundary == BoundaryMode::DirichletAnalytic) {
    for (std::size_t n = 0; n < all.size(); ++n) {
      const Index3 p = all.unlinear(n);
      if (!in.contains(p)) out.v[n] = g.family->metric_rate(g.position(p), g.time);
    }
  }
  std::vector<double> lmin(in.size()), dmax(in.size());
  parallel_for(in.size(), [&](std::size_t n) {
    const Index3 p = in.unlinear(n);
    const CurvatureCore<double> core = grid_core(g, p, order);
    const SymMat3& gp = g.at(p);
    out.v[all.linear(p)] = 2.0 * adj_ein_lower(gp, core.ein);
    if (spectra) {
      lmin[n] = op_eigenvalues(gp, core.ein)[0];
      const SymMat3 gi = inverse(gp);
      dmax[n] = max_eigenvalue(congruence(gi, core.ein));
    }
  });
  if (spectra)
    for (std::size_t n = 0; n < in.size(); ++n) {
      out.min_lambda = std::min(out.min_lambda, lmin[n]);
      out.max_diffusion = std::max(out.max_diffusion, dmax[n]);
    }
  return out;
}

void add_lie_term(const FlowState& s, int order, VelocityField& v) {
  const NodeField<SymMat3> lie = deturck_lie_term(s.metric, *s.reference, order);
  const IndexBox all = s.metric.nodes();
  for (std::size_t n = 0; n < lie.size(); ++n) v[all.linear(lie.box().unlinear(n))] += lie[n];
}

void add_normalization(const FlowState& s, double K, VelocityField& v) {
  const IndexBox all = s.metric.nodes();
  const IndexBox in = s.metric.interior();
  for (std::size_t n = 0; n < in.size(); ++n) {
    const Index3 p = in.unlinear(n);
    v[all.linear(p)] -= (2.0 * K * K) * s.metric.at(p);
  }
}

RhsPass flow_pass(const FlowState& s, const FlowSpec& spec, bool spectra) {
  RhsPass r = xcf_pass(s.metric, spec.stencil_order, spectra);
  if (spec.variant == FlowVariant::DeTurck) add_lie_term(s, spec.stencil_order, r.v);
  if (spec.variant == FlowVariant::Normalized) add_normalization(s, spec.K, r.v);
  return r;
}

}  // namespace

VelocityField xcf_rhs(const FlowState& s, int order) {
  return xcf_pass(s.metric, order, false).v;
}

VelocityField deturck_rhs(const FlowState& s, int order) {
  if (!s.reference) throw Error(ErrorCode::ConfigError, "DeTurck flow needs a reference metric");
  VelocityField v = xcf_rhs(s, order);
  add_lie_term(s, order, v);
  return v;
}

VelocityField normalized_rhs(const FlowState& s, double K, int order) {
  if (!(K < 0.0)) throw Error(ErrorCode::ConfigError, "normalized flow needs K < 0");
  VelocityField v = xcf_rhs(s, order);
  add_normalization(s, K, v);
  return v;
}

VelocityField flow_rhs(const FlowState& s, const FlowSpec& spec) {
  switch (spec.variant) {
    case FlowVariant::Raw: return xcf_rhs(s, spec.stencil_order);
    case FlowVariant::DeTurck: return deturck_rhs(s, spec.stencil_order);
    case FlowVariant::Normalized: return normalized_rhs(s, spec.K, spec.stencil_order);
  }
  return {};
}

NodeField<Vec3> deturck_field(const MetricGrid& g, const MetricGrid& reference, int order,
                              const IndexBox& box) {
  if (!g.same_layout(reference))
    throw Error(ErrorCode::MismatchedGrids, "reference metric has a different layout");
  NodeField<Vec3> w(box);
  parallel_for(box.size(), [&](std::size_t n) {
    const Index3 p = box.unlinear(n);
    const MetricJet<double> j = fd_jet(g, p, order);
    const Tensor3<double> ga = christoffel(j);
    const Tensor3<double> g0 = christoffel(fd_jet(reference, p, order));
    const SymMat3 gi = inverse(j.g);
    Vec3 v{};
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v[k] += gi(a, b) * (ga[t3(k, a, b)] - g0[t3(k, a, b)]);
    w[n] = v;
  });
  return w;
}

NodeField<SymMat3> deturck_lie_term(const MetricGrid& g, const MetricGrid& reference, int order) {
  const IndexBox in = g.interior();
  const NodeField<Vec3> w = deturck_field(g, reference, order, in.grown(stencil_radius(order)));
  NodeField<SymMat3> out(in);
  parallel_for(in.size(), [&](std::size_t n) {
    const Index3 p = in.unlinear(n);
    const MetricJet<double> j = fd_jet(g, p, order);
    // dw[i][k] = ∂_i W^k
    double dw[3][3];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        dw[i][k] = fd_first<double>([&](const Index3& q) { return w(q)[k]; }, p, i,
                                    g.spacing[i], order);
    const Vec3& W = w(p);
    SymMat3 l;
    for (int s = 0; s < 6; ++s) {
      auto [i, jj] = sym_pair(s);
      double v = 0.0;
      for (int k = 0; k < 3; ++k)
        v += W[k] * j.dg[k](i, jj) + j.g(k, jj) * dw[i][k] + j.g(i, k) * dw[jj][k];
      l[s] = v;
    }
    out[n] = l;
  });
  return out;
}

double max_diffusion(const MetricGrid& g, int order) {
  return xcf_pass(g, order, true).max_diffusion;
}

double stencil_cfl_factor(int order) {
  stencil_radius(order);
  return order == 2 ? 1.0 : 0.75;
}

double cfl_dt_bound(const MetricGrid& g, int order, double cfl) {
  const double m = max_diffusion(g, order);
  const double h = g.min_spacing();
  return m > 0.0 ? stencil_cfl_factor(order) * cfl * h * h / m
                 : std::numeric_limits<double>::infinity();
}

double min_ein_eigenvalue(const MetricGrid& g, int order) {
  return xcf_pass(g, order, true).min_lambda;
}

namespace {

constexpr double kDegenerateFloor = 1e-10;

MetricGrid advance(const MetricGrid& base, const VelocityField& k, double a, double t) {
  MetricGrid out = base;
  out.time = t;
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += a * k[n];
  if (out.boundary == BoundaryMode::DirichletAnalytic) {
    const IndexBox all = out.nodes();
    const IndexBox in = out.interior();
    for (std::size_t n = 0; n < all.size(); ++n) {
      const Index3 p = all.unlinear(n);
      if (!in.contains(p)) out.values[n] = out.family->metric(out.position(p), t);
    }
  }
  return out;
}

}  // namespace

FlowState step(const FlowState& s, double dt, const FlowSpec& spec) {
  if (!(dt > 0.0)) throw Error(ErrorCode::ConfigError, "dt must be positive");
  const RhsPass first = flow_pass(s, spec, true);
  if (!(first.min_lambda >= kDegenerateFloor))
    throw EinDegenerateError(s.t, "smallest Einstein eigenvalue " + format_real(first.min_lambda) +
                                      " at t = " + format_real(s.t));
  const double h = s.metric.min_spacing();
  const double bound = first.max_diffusion > 0.0
                            ? stencil_cfl_factor(spec.stencil_order) * spec.cfl * h * h /
                                  first.max_diffusion
                            : std::numeric_limits<double>::infinity();
  if (dt > bound * (1.0 + 1e-12))
    throw Error(ErrorCode::CflViolation,
                "dt = " + format_real(dt) + " exceeds the CFL bound " + format_real(bound));

  auto stage = [&](const MetricGrid& m, double t) {
    FlowState st{t, s.step, m, s.reference};
    return flow_pass(st, spec, false).v;
  };
  const VelocityField& k1 = first.v;
  const MetricGrid y2 = advance(s.metric, k1, 0.5 * dt, s.t + 0.5 * dt);
  const VelocityField k2 = stage(y2, s.t + 0.5 * dt);
  const MetricGrid y3 = advance(s.metric, k2, 0.5 * dt, s.t + 0.5 * dt);
  const VelocityField k3 = stage(y3, s.t + 0.5 * dt);
  const MetricGrid y4 = advance(s.metric, k3, dt, s.t + dt);
  const VelocityField k4 = stage(y4, s.t + dt);

  VelocityField k(k1.size());
  for (std::size_t n = 0; n < k.size(); ++n)
    k[n] = (1.0 / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
  FlowState out;
  out.t = s.t + dt;
  out.step = s.step + 1;
  out.metric = advance(s.metric, k, dt, out.t);
  out.reference = s.reference;
  return out;
}

StateAnalysis analyze(const FlowState& s, int order) {
  const MetricGrid& g = s.metric;
  const IndexBox in = g.interior();
  const IndexBox b1 = in.grown(stencil_radius(order));
  const CurvaturePack pack = curvature_pack(g, order, b1);

  StateAnalysis a;
  a.t = s.t;
  a.samples.resize(in.size());
  a.e_up.resize(in.size());
  a.det_e.resize(in.size());
  const int margin = 3 * stencil_radius(order) + 1;
  for (std::size_t n = 0; n < in.size(); ++n) {
    const Index3 p = in.unlinear(n);
    bool deep = true;
    if (g.boundary == BoundaryMode::DirichletAnalytic)
      for (int ax = 0; ax < 3; ++ax)
        deep = deep && p[ax] >= margin && p[ax] <= g.dims[ax] - 1 - margin;
    if (deep) a.residual_nodes.push_back(n);
  }
  for (std::size_t n = 0; n < b1.size() && a.ein_spd; ++n)
    a.ein_spd = pack.points[n].ein_spd;

  const double cell = g.cell_volume();
  for (std::size_t n = 0; n < in.size(); ++n) {
    const CurvaturePoint& cp = pack.at(in.unlinear(n));
    NodeSample& ns = a.samples[n];
    ns.weight = std::sqrt(det(cp.g)) * cell;
    ns.det_e = cp.det_e;
    ns.tr_e = cp.lambda[0] + cp.lambda[1] + cp.lambda[2];
    ns.trace_cross = cp.trace_cross;
    a.det_e[n] = cp.det_e;
    a.e_up[n] = congruence(inverse(cp.g), cp.ein);
  }
  if (!a.ein_spd) return a;

  const ThirdOrderField third = third_order(g, pack);
  a.prediction.resize(in.size());
  parallel_for(in.size(), [&](std::size_t n) {
    const Index3 p = in.unlinear(n);
    const CurvaturePoint& cp = pack.at(p);
    const ThirdOrderPoint& tp = third.at(p);
    a.samples[n].devil_v2 = tp.devil_v2;
    a.samples[n].grad_sqrt_det_e2 = tp.grad_sqrt_det_e2;

    // ∂_a (∇_b E^{ij}) and ∂_a (∇_b detE) by differencing the B1 fields.
    std::array<std::array<SymMat3, 3>, 3> dS;  // dS[a][b]
    double dd[3][3];
    for (int ax = 0; ax < 3; ++ax)
      for (int b = 0; b < 3; ++b) {
        dS[ax][b] = fd_first<SymMat3>([&](const Index3& q) { return third.at(q).grad_e_up[b]; }, p,
                                      ax, g.spacing[ax], order);
        dd[ax][b] = fd_first<double>([&](const Index3& q) { return third.at(q).grad_det_e[b]; }, p,
                                     ax, g.spacing[ax], order);
      }
    const auto& S = tp.grad_e_up;
    const auto& G = cp.gamma;
    const SymMat3& E = tp.e_up;
    SymMat3 box_e;
    for (int s2 = 0; s2 < 6; ++s2) {
      auto [i, j] = sym_pair(s2);
      double acc = 0.0;
      for (int ax = 0; ax < 3; ++ax)
        for (int b = 0; b < 3; ++b) {
          double v = dS[ax][b](i, j);
          for (int q = 0; q < 3; ++q)
            v += -G[t3(q, ax, b)] * S[q](i, j) + G[t3(i, ax, q)] * S[b](q, j) +
                 G[t3(j, ax, q)] * S[b](i, q);
          acc += E(ax, b) * v;
        }
      box_e[s2] = acc;
    }
    double box_d = 0.0;
    for (int ax = 0; ax < 3; ++ax)
      for (int b = 0; b < 3; ++b) {
        double v = dd[ax][b];
        for (int q = 0; q < 3; ++q) v -= G[t3(q, ax, b)] * tp.grad_det_e[q];
        box_d += E(ax, b) * v;
      }
    a.prediction[n] = evolution_prediction(cp.g, tp, box_e, box_d, cp.trace_cross);
  });
  return a;
}

void restrict_residual_region(StateAnalysis& a, const MetricGrid& g, const Vec3& lo, const Vec3& hi) {
  const IndexBox in = g.interior();
  std::vector<std::size_t> kept;
  for (std::size_t n : a.residual_nodes) {
    const Vec3 x = g.position(in.unlinear(n));
    bool inside = true;
    for (int ax = 0; ax < 3; ++ax) inside = inside && x[ax] >= lo[ax] - 1e-12 && x[ax] <= hi[ax] + 1e-12;
    if (inside) kept.push_back(n);
  }
  a.residual_nodes = std::move(kept);
}

namespace {

double check_spacing(const StateAnalysis& prev, const StateAnalysis& cur, const StateAnalysis& next) {
  const double d1 = cur.t - prev.t, d2 = next.t - cur.t;
  if (!(d1 > 0.0) || std::fabs(d1 - d2) > 1e-9 * std::max(d1, d2))
    throw Error(ErrorCode::MismatchedGrids, "states are not equally spaced in time");
  if (prev.samples.size() != cur.samples.size() || next.samples.size() != cur.samples.size())
    throw Error(ErrorCode::MismatchedGrids, "states have different node counts");
  return 0.5 * (d1 + d2);
}

}  // namespace

std::pair<double, double> evolution_residuals(const StateAnalysis& prev, const StateAnalysis& cur,
                                              const StateAnalysis& next) {
  const double dt = check_spacing(prev, cur, next);
  if (cur.prediction.empty())
    throw Error(ErrorCode::NonPositiveEin, "evolution residuals need a positive Einstein tensor");
  if (cur.residual_nodes.empty())
    throw Error(ErrorCode::StencilUnderflow, "grid too small for evolution residuals");
  double re = 0.0, rd = 0.0;
  for (std::size_t n : cur.residual_nodes) {
    const SymMat3 dE = (1.0 / (2.0 * dt)) * (next.e_up[n] - prev.e_up[n]);
    re = std::max(re, max_abs(dE - cur.prediction[n].dt_e_up));
    const double dd = (next.det_e[n] - prev.det_e[n]) / (2.0 * dt);
    rd = std::max(rd, std::fabs(dd - cur.prediction[n].dt_det_e));
  }
  return {re, rd};
}

std::pair<double, double> evolution_residuals(const FlowState& prev, const FlowState& cur,
                                              const FlowState& next, int order) {
  if (!prev.metric.same_layout(cur.metric) || !next.metric.same_layout(cur.metric))
    throw Error(ErrorCode::MismatchedGrids, "states have different grid layouts");
  return evolution_residuals(analyze(prev, order), analyze(cur, order), analyze(next, order));
}

MonitorRow monitors(const StateAnalysis& cur, const StateAnalysis* prev, const StateAnalysis* next) {
  MonitorRow row = accumulate_monitors(cur.t, cur.samples);
  if (prev && next) {
    const double dt = check_spacing(*prev, cur, *next);
    row.harnackMin = harnack_min(cur.t, dt, prev->samples, cur.samples, next->samples);
    row.dVolResidual = dvol_residual(dt, accumulate_monitors(prev->t, prev->samples), row,
                                     accumulate_monitors(next->t, next->samples));
    if (!cur.prediction.empty() && !cur.residual_nodes.empty()) {
      auto [re, rd] = evolution_residuals(*prev, cur, *next);
      row.resDtEin = re;
      row.resDtDetE = rd;
    }
  }
  return row;
}

MonitorRow monitors(const FlowState& s, const FlowState* prev, const FlowState* next, int order) {
  const StateAnalysis cur = analyze(s, order);
  if (!prev || !next) return monitors(cur, nullptr, nullptr);
  const StateAnalysis a = analyze(*prev, order), b = analyze(*next, order);
  return monitors(cur, &a, &b);
}

GridRun run_grid_flow(const MetricGrid& g0, const FlowSpec& spec_in, const GridRunOptions& opt) {
  if (opt.dt.has_value() == opt.cfl.has_value())
    throw Error(ErrorCode::ConfigError, "flow: exactly one of dt and cfl must be given");
  if (!(opt.t_end >= 0.0)) throw Error(ErrorCode::ConfigError, "flow.t_end must be non-negative");
  FlowSpec spec = spec_in;
  if (spec.variant == FlowVariant::Normalized && !(spec.K < 0.0))
    throw Error(ErrorCode::ConfigError, "flow.variant: normalized flow needs K < 0");

  MetricGrid start = g0;
  if (spec.variant == FlowVariant::Normalized && start.boundary == BoundaryMode::DirichletAnalytic)
    start.family = std::make_shared<NormalizedBoundaryFamily>(start.family, spec.K);
  FlowState state = initial_state(std::move(start));

  GridRun run;
  if (opt.cfl) {
    if (!(*opt.cfl > 0.0)) throw Error(ErrorCode::ConfigError, "flow.cfl must be positive");
    spec.cfl = *opt.cfl;
    const double bound = cfl_dt_bound(state.metric, spec.stencil_order, spec.cfl);
    run.steps = opt.t_end > 0.0 ? static_cast<long>(std::ceil(opt.t_end / bound - 1e-12)) : 0;
    run.dt = run.steps > 0 ? opt.t_end / run.steps : bound;
  } else {
    if (!(*opt.dt > 0.0)) throw Error(ErrorCode::ConfigError, "flow.dt must be positive");
    run.dt = *opt.dt;
    run.steps = static_cast<long>(std::floor(opt.t_end / run.dt + 1e-9));
  }
  const double t0 = state.t;
  const bool residuals = spec.variant == FlowVariant::Raw;

  std::vector<StateAnalysis> window;  // at most three consecutive analyses
  auto emit = [&](bool has_next) {
    const std::size_t c = window.size() - (has_next ? 2 : 1);
    const StateAnalysis* prev = c > 0 ? &window[c - 1] : nullptr;
    const StateAnalysis* next = has_next ? &window[c + 1] : nullptr;
    MonitorRow row = prev && next ? monitors(window[c], prev, next) : monitors(window[c], nullptr, nullptr);
    if (!residuals) row.resDtEin = row.resDtDetE = std::nullopt;
    if (opt.on_row) opt.on_row(row);
    run.rows.push_back(row);
  };
  auto push = [&](const FlowState& s) {
    if (!opt.compute_monitors) return;
    window.push_back(analyze(s, spec.stencil_order));
    if (window.size() > 3) window.erase(window.begin());
    if (window.size() >= 2) emit(true);
  };
  auto snapshot = [&](const FlowState& s, bool last) {
    if (opt.on_snapshot && opt.snapshot_cadence > 0 && (s.step % opt.snapshot_cadence == 0 || last))
      opt.on_snapshot(s);
  };

  push(state);
  snapshot(state, run.steps == 0);
  for (long n = 1; n <= run.steps; ++n) {
    try {
      FlowState next = step(state, run.dt, spec);
      next.t = t0 + n * run.dt;
      next.metric.time = next.t;
      state = std::move(next);
    } catch (const EinDegenerateError&) {
      run.status = RunStatus::EinDegenerate;
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CflViolation) throw;
      run.status = RunStatus::CflStall;
      break;
    }
    push(state);
    snapshot(state, n == run.steps);
  }
  if (opt.compute_monitors) emit(false);
  if (run.status != RunStatus::Completed && opt.on_snapshot && opt.snapshot_cadence > 0 &&
      state.step % opt.snapshot_cadence != 0)
    opt.on_snapshot(state);
  run.stop_time = state.t;
  run.final_state = std::move(state);
  return run;
}

}  // namespace xcf
