#include "xcflab/frame.hpp"

#include <algorithm>
#include <cmath>

namespace xcf {

FrameMetric solvable_frame(double a1, double a2, const SymMat3& m) {
  FrameMetric fm;
  fm.m = m;
  // [e3, e1] = a1 e1, [e3, e2] = a2 e2
  fm.c[t3(0, 2, 0)] = a1;
  fm.c[t3(0, 0, 2)] = -a1;
  fm.c[t3(1, 2, 1)] = a2;
  fm.c[t3(1, 1, 2)] = -a2;
  return fm;
}

double jacobi_residual(const Tensor3<double>& c) {
  // [[e_i,e_j],e_k] + cyclic = (c^p_ij c^q_pk + c^p_jk c^q_pi + c^p_ki c^q_pj) e_q
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int q = 0; q < 3; ++q) {
          double acc = 0.0;
          for (int p = 0; p < 3; ++p)
            acc += c[t3(p, i, j)] * c[t3(q, p, k)] + c[t3(p, j, k)] * c[t3(q, p, i)] +
                   c[t3(p, k, i)] * c[t3(q, p, j)];
          r = std::max(r, std::fabs(acc));
        }
  return r;
}

void validate(const FrameMetric& fm) {
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (fm.c[t3(k, i, j)] != -fm.c[t3(k, j, i)])
          throw Error(ErrorCode::ConfigError, "structure constants not antisymmetric in i,j");
  const double jr = jacobi_residual(fm.c);
  if (jr > 1e-12) throw Error(ErrorCode::JacobiViolation, "Jacobi residual " + format_real(jr));
  if (!is_spd(fm.m)) throw Error(ErrorCode::NonPositiveMetric, "frame metric not positive-definite");
}

Tensor3<double> frame_connection(const FrameMetric& fm) {
  // C_{l,ij} = g([e_i,e_j], e_l); Γ_{l,ij} = ½(C_{l,ij} − C_{i,jl} + C_{j,li})
  Tensor3<double> C{};
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += fm.c[t3(k, i, j)] * fm.m(k, l);
        C[t3(l, i, j)] = acc;
      }
  const SymMat3 mi = inverse(fm.m);
  Tensor3<double> G{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double low[3];
      for (int l = 0; l < 3; ++l)
        low[l] = 0.5 * (C[t3(l, i, j)] - C[t3(i, j, l)] + C[t3(j, l, i)]);
      for (int k = 0; k < 3; ++k) G[t3(k, i, j)] = mi(k, 0) * low[0] + mi(k, 1) * low[1] + mi(k, 2) * low[2];
    }
  return G;
}

CurvatureCore<double> frame_core(const FrameMetric& fm) {
  validate(fm);
  CurvatureCore<double> out;
  out.gamma = frame_connection(fm);
  const auto& G = out.gamma;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double up[3];
        for (int m = 0; m < 3; ++m) {
          double v = 0.0;
          for (int p = 0; p < 3; ++p)
            v += G[t3(m, a, p)] * G[t3(p, b, c)] - G[t3(m, b, p)] * G[t3(p, a, c)] -
                 fm.c[t3(p, a, b)] * G[t3(m, p, c)];
          up[m] = v;
        }
        for (int d = 0; d < 3; ++d)
          out.rm[t4(a, b, c, d)] = fm.m(d, 0) * up[0] + fm.m(d, 1) * up[1] + fm.m(d, 2) * up[2];
      }
  const SymMat3 mi = inverse(fm.m);
  for (int s = 0; s < 6; ++s) {
    auto [b, c] = sym_pair(s);
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int d = 0; d < 3; ++d) acc += mi(a, d) * out.rm[t4(a, b, c, d)];
    out.ric[s] = acc;
  }
  out.sc = contract(mi, out.ric);
  out.ein = out.ric - (0.5 * out.sc) * fm.m;
  return out;
}

CurvaturePoint frame_curvature(const FrameMetric& fm) { return finish_point(fm.m, frame_core(fm)); }

ThirdOrderPoint frame_third_order(const FrameMetric& fm) {
  const CurvatureCore<double> core = frame_core(fm);
  const std::array<SymMat3, 3> zero{};
  return third_order_point(fm.m, core.ein, covariant_ein_derivative(core.gamma, core.ein, zero));
}

NodeSample frame_sample(const FrameMetric& fm) {
  const CurvaturePoint p = frame_curvature(fm);
  NodeSample s;
  s.weight = std::sqrt(det(fm.m));
  s.det_e = p.det_e;
  s.tr_e = p.lambda[0] + p.lambda[1] + p.lambda[2];
  s.trace_cross = p.trace_cross;
  if (p.ein_spd) {
    const ThirdOrderPoint t = frame_third_order(fm);
    s.devil_v2 = t.devil_v2;
    s.grad_sqrt_det_e2 = t.grad_sqrt_det_e2;
  }
  return s;
}

SymMat3 frame_velocity(const FrameMetric& fm, const FrameFlow& flow) {
  const CurvatureCore<double> core = frame_core(fm);
  SymMat3 v = 2.0 * adj_ein_lower(fm.m, core.ein);
  if (flow.variant == FrameVariant::Normalized) v -= (2.0 * flow.K * flow.K) * fm.m;
  return v;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::EinDegenerate: return "ein-degenerate";
    case RunStatus::CflStall: return "cfl-stall";
  }
  return "unknown";
}

namespace {

FrameMetric rk4_step(const FrameMetric& s, double dt, const FrameFlow& flow) {
  auto shifted = [&](const SymMat3& k, double f) {
    FrameMetric r = s;
    r.m = s.m + f * k;
    return r;
  };
  const SymMat3 k1 = frame_velocity(s, flow);
  const SymMat3 k2 = frame_velocity(shifted(k1, 0.5 * dt), flow);
  const SymMat3 k3 = frame_velocity(shifted(k2, 0.5 * dt), flow);
  const SymMat3 k4 = frame_velocity(shifted(k3, dt), flow);
  FrameMetric r = s;
  r.m = s.m + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return r;
}

double min_lambda(const FrameMetric& fm) { return frame_curvature(fm).lambda[0]; }

}  // namespace

std::pair<double, double> frame_evolution_residuals(const FrameMetric& prev, const FrameMetric& cur,
                                                    const FrameMetric& next, double dt) {
  auto e_up = [](const FrameMetric& f) {
    const CurvatureCore<double> c = frame_core(f);
    return congruence(inverse(f.m), c.ein);
  };
  auto det_e = [](const FrameMetric& f) { return frame_curvature(f).det_e; };
  const CurvatureCore<double> core = frame_core(cur);
  const CurvaturePoint cp = finish_point(cur.m, core);
  const ThirdOrderPoint tp = frame_third_order(cur);
  const EvolutionPrediction pred =
      evolution_prediction(cur.m, tp, homogeneous_box_e_up(core.gamma, tp), 0.0, cp.trace_cross);
  const SymMat3 dte = (1.0 / (2.0 * dt)) * (e_up(next) - e_up(prev));
  const double dtd = (det_e(next) - det_e(prev)) / (2.0 * dt);
  return {max_abs(dte - pred.dt_e_up), std::fabs(dtd - pred.dt_det_e)};
}

OdeRun xcf_ode_run(const FrameMetric& fm0, double t_end, double dt, const FrameFlow& flow) {
  validate(fm0);
  if (!(dt > 0.0)) throw Error(ErrorCode::ConfigError, "dt must be positive");
  if (!(t_end >= 0.0)) throw Error(ErrorCode::ConfigError, "t_end must be non-negative");
  OdeRun run;
  const long steps = static_cast<long>(std::floor(t_end / dt + 1e-9));
  run.times.push_back(0.0);
  run.states.push_back(fm0);
  if (min_lambda(fm0) < 1e-10) {
    run.status = RunStatus::EinDegenerate;
  } else {
    for (long n = 1; n <= steps; ++n) {
      FrameMetric next = rk4_step(run.states.back(), dt, flow);
      const double t = n * dt;
      run.times.push_back(t);
      run.states.push_back(next);
      if (!is_spd(next.m) || min_lambda(next) < 1e-10) {
        run.status = RunStatus::EinDegenerate;
        break;
      }
    }
  }
  run.stop_time = run.times.back();

  std::vector<std::vector<NodeSample>> samples;
  for (const auto& s : run.states) samples.push_back({frame_sample(s)});
  for (std::size_t n = 0; n < run.states.size(); ++n)
    run.monitors.push_back(accumulate_monitors(run.times[n], samples[n]));
  for (std::size_t n = 1; n + 1 < run.states.size(); ++n) {
    MonitorRow& row = run.monitors[n];
    row.harnackMin = harnack_min(run.times[n], dt, samples[n - 1], samples[n], samples[n + 1]);
    row.dVolResidual = dvol_residual(dt, run.monitors[n - 1], row, run.monitors[n + 1]);
    if (flow.variant == FrameVariant::Raw && frame_curvature(run.states[n]).ein_spd) {
      auto [re, rd] = frame_evolution_residuals(run.states[n - 1], run.states[n], run.states[n + 1], dt);
      row.resDtEin = re;
      row.resDtDetE = rd;
    }
  }
  return run;
}

nlohmann::json frame_to_json(const FrameMetric& fm) {
  return {{"kind", "frame"}, {"c", fm.c}, {"m", fm.m.c}};
}

FrameMetric frame_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("kind", "") != "frame")
    throw Error(ErrorCode::ConfigError, "frame metric must have \"kind\": \"frame\"");
  if (!j.contains("c") || !j.at("c").is_array() || j.at("c").size() != 27)
    throw Error(ErrorCode::ConfigError, "frame.c must hold 27 reals");
  if (!j.contains("m") || !j.at("m").is_array() || j.at("m").size() != 6)
    throw Error(ErrorCode::ConfigError, "frame.m must hold 6 reals");
  FrameMetric fm;
  for (int n = 0; n < 27; ++n) fm.c[n] = j.at("c")[n].get<double>();
  for (int s = 0; s < 6; ++s) fm.m[s] = j.at("m")[s].get<double>();
  validate(fm);
  return fm;
}

FrameChartFamily::FrameChartFamily(double a1, double a2, const SymMat3& m0)
    : a1_(a1), a2_(a2), m0_(m0) {
  validate(solvable_frame(a1, a2, m0));
}

FrameMetric FrameChartFamily::frame_at(double t) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return solvable_frame(a1_, a2_, it->second);
  }
  // Always integrate from 0 on a fixed step pattern so m(t) is path-independent.
  FrameMetric fm = solvable_frame(a1_, a2_, m0_);
  if (t > 0.0) {
    const long n = static_cast<long>(std::ceil(t / 1e-3));
    const double dt = t / n;
    for (long k = 0; k < n; ++k) fm = rk4_step(fm, dt, FrameFlow{});
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(t, fm.m);
  return fm;
}

SymMat3 FrameChartFamily::metric(const Vec3& x, double t) const {
  return chart_metric<double>(x, frame_at(t).m);
}

SymMat3 FrameChartFamily::metric_rate(const Vec3& x, double t) const {
  return chart_metric<double>(x, frame_velocity(frame_at(t), FrameFlow{}));
}

MetricJet3 FrameChartFamily::jet3(const Vec3& x, double t) const {
  Vec3T<Dual3> xd{Seed<Dual3>::var(x[0], 0), Seed<Dual3>::var(x[1], 1), Seed<Dual3>::var(x[2], 2)};
  return jet3_from_dual(chart_metric<Dual3>(xd, frame_at(t).m));
}

nlohmann::json FrameChartFamily::to_json() const {
  return {{"name", name()}, {"a", {a1_, a2_}}, {"m0", m0_.c}};
}

FamilyPtr frame_chart_from_json(const nlohmann::json& j) {
  if (!j.contains("a") || !j.at("a").is_array() || j.at("a").size() != 2)
    throw Error(ErrorCode::ConfigError, "family.a must be an array of 2 reals");
  if (!j.contains("m0") || !j.at("m0").is_array() || j.at("m0").size() != 6)
    throw Error(ErrorCode::ConfigError, "family.m0 must hold 6 reals");
  SymMat3 m0;
  for (int s = 0; s < 6; ++s) m0[s] = j.at("m0")[s].get<double>();
  return std::make_shared<FrameChartFamily>(j.at("a")[0].get<double>(), j.at("a")[1].get<double>(), m0);
}

}  // namespace xcf
