#include "xcflab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "xcflab/curvature.hpp"
#include "xcflab/error.hpp"
#include "xcflab/flow.hpp"
#include "xcflab/frame.hpp"
#include "xcflab/minkowski.hpp"
#include "xcflab/symbol.hpp"
#include "xcflab/third_order.hpp"

namespace xcf {

namespace {

using Clock = std::chrono::steady_clock;

double rel_diff(const SymMat3& a, const SymMat3& b) {
  return max_abs(a - b) / std::max(1e-300, std::max(max_abs(a), max_abs(b)));
}

SymMat3 random_spd(std::mt19937_64& rng, double floor = 0.3) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat3<double> a;
  for (auto& row : a.a)
    for (auto& v : row) v = n(rng);
  SymMat3 s = sym_part(a * transpose(a));
  for (int i = 0; i < 3; ++i) s(i, i) += floor;
  return s;
}

SymMat3 random_sym(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  SymMat3 s;
  for (auto& v : s.c) v = n(rng);
  return s;
}

MetricJet<double> random_jet(std::mt19937_64& rng) {
  MetricJet<double> j;
  j.g = random_spd(rng);
  for (auto& d : j.dg) d = random_sym(rng, 0.5);
  for (auto& d : j.ddg) d = random_sym(rng, 0.5);
  return j;
}

MetricGrid halfspace_grid(double K0, int n, double h, const Vec3& origin) {
  return MetricGrid::from_family(std::make_shared<HyperbolicHalfspace>(K0), {n, n, n}, {h, h, h}, origin);
}

// perturbed hyperbolic field centred in its box
MetricGrid devil_grid(double h, int n) {
  const double half = 0.5 * (n - 1) * h;
  return MetricGrid::from_family(std::make_shared<PerturbedHyperbolic>(-1.0, 0.05, Vec3{0.0, 0.0, 1.2}, 0.4),
                                 {n, n, n}, {h, h, h}, {-half, -half, 1.2 - half});
}

MetricGrid embed_halfspace(double h) {
  const int n = static_cast<int>(std::lround(0.5 / h)) + 1;
  return halfspace_grid(-1.0, n, h, {0.0, 0.0, 1.0});
}

MetricGrid embed_perturbed(double eps) {
  const double h = 1.0 / 32;
  return MetricGrid::from_family(std::make_shared<PerturbedHyperbolic>(-1.0, eps, Vec3{0.25, 0.25, 1.25}, 0.4),
                                 {17, 17, 17}, {h, h, h}, {0.0, 0.0, 1.0});
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& opt) : opt_(opt) {}

  std::vector<Check> checks;

  void upper(const std::string& name, int crit, double v, double tol) {
    Check c = make(name, crit, v);
    c.hi = tol * opt_.tol_scale;
    finish(c);
  }
  void lower(const std::string& name, int crit, double v, double lo, bool strict) {
    Check c = make(name, crit, v);
    c.lo = lo;
    c.strict_lo = strict;
    finish(c);
  }
  void band(const std::string& name, int crit, double v, double lo, double hi) {
    Check c = make(name, crit, v);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo) * opt_.tol_scale;
    c.lo = mid - half;
    c.hi = mid + half;
    finish(c);
  }
  void exact(const std::string& name, int crit, double v, double expect) {
    Check c = make(name, crit, v);
    c.lo = c.hi = expect;
    finish(c);
  }

  // Wall time charged to the next recorded checks.
  template <class F>
  auto timed(F&& f) {
    const auto t0 = Clock::now();
    auto r = f();
    pending_ += std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
  }

  const VerifyOptions& options() const { return opt_; }

 private:
  Check make(const std::string& name, int crit, double v) {
    Check c;
    c.name = name;
    c.criterion = crit;
    c.measured = v;
    c.seconds = pending_;
    pending_ = 0.0;
    return c;
  }
  void finish(Check& c) {
    bool ok = std::isfinite(c.measured);
    if (ok && c.lo) ok = c.strict_lo ? c.measured > *c.lo : c.measured >= *c.lo;
    if (ok && c.hi) ok = c.measured <= *c.hi;
    c.pass = ok;
    checks.push_back(std::move(c));
  }

  VerifyOptions opt_;
  double pending_ = 0.0;
};

// Runs shared between suites of one invocation.
struct Cache {
  std::optional<GridRun> constant_short;
  std::optional<OdeRun> frame_hyperbolic;

  // 17³ half-space, 4th-order stencils, cfl 0.1, monitors on.
  const GridRun& constant_run(Suite& s) {
    if (!constant_short)
      constant_short = s.timed([] {
        GridRunOptions opt;
        opt.t_end = 0.01;
        opt.cfl = 0.1;
        FlowSpec spec;
        spec.stencil_order = 4;
        return run_grid_flow(halfspace_grid(-1.0, 17, 1.0 / 32, {0.0, 0.0, 1.0}), spec, opt);
      });
    return *constant_short;
  }
  const OdeRun& frame_run(Suite& s) {
    if (!frame_hyperbolic)
      frame_hyperbolic =
          s.timed([] { return xcf_ode_run(solvable_frame(1, 1, SymMat3::identity()), 2.0, 1e-3, {}); });
    return *frame_hyperbolic;
  }
};

void algebraic(Suite& s) {
  std::mt19937_64 rng(s.options().seed);
  double cross = 0.0, decomp = 0.0, sym = 0.0, dete = 0.0;
  s.timed([&] {
    for (int k = 0; k < 1000; ++k) {
      const CurvaturePoint p = point_from_jet(random_jet(rng));
      cross = std::max(cross, rel_diff(cross_via_ricci_e(p), p.adj_ein));
      decomp = std::max(decomp, ricci_decomposition_residual(p));
      double rmax = 1.0, r = 0.0;
      for (double v : p.rm) rmax = std::max(rmax, std::fabs(v));
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
              const double v = p.rm[t4(a, b, c, d)];
              r = std::max({r, std::fabs(v + p.rm[t4(b, a, c, d)]), std::fabs(v - p.rm[t4(c, d, a, b)]),
                            std::fabs(v + p.rm[t4(b, c, a, d)] + p.rm[t4(c, a, b, d)])});
            }
      sym = std::max(sym, r / rmax);
      const double prod = p.lambda[0] * p.lambda[1] * p.lambda[2];
      dete = std::max(dete, std::fabs(p.det_e - prod) / std::max(1.0, std::fabs(prod)));
    }
    return 0;
  });
  s.upper("cross_curvature_equivalence_random_jets", 2, cross, 1e-10);
  s.upper("ricci_decomposition_random_jets", 0, decomp, 1e-10);
  s.upper("riemann_symmetries_random_jets", 0, sym, 1e-10);
  s.upper("det_e_equals_eigenvalue_product", 0, dete, 1e-10);

  // adjugate eigenvalues are the pairwise products
  double adj = 0.0;
  for (int k = 0; k < 100; ++k) {
    const CurvaturePoint p = model_point(random_spd(rng), random_sym(rng));
    const CurvaturePoint q = model_point(p.g, p.adj_ein);
    const auto& l = p.lambda;
    std::array<double, 3> prods{l[0] * l[1], l[0] * l[2], l[1] * l[2]};
    std::sort(prods.begin(), prods.end());
    for (int i = 0; i < 3; ++i)
      adj = std::max(adj, std::fabs(q.lambda[i] - prods[i]) / std::max(1.0, std::fabs(prods[i])));
  }
  s.upper("adjugate_eigenvalues_pairwise_products", 0, adj, 1e-9);

  const CurvaturePoint m = model_point(SymMat3::identity(), SymMat3::diag(1, 2, 3));
  const double sec = std::max({std::fabs(sectional(m, 0, 1) + 3.0), std::fabs(sectional(m, 0, 2) + 2.0),
                               std::fabs(sectional(m, 1, 2) + 1.0)});
  s.upper("sectional_model_lambda_123", 0, sec, 1e-12);
  s.upper("cross_curvature_model_diag_632", 2, max_abs(cross_via_ricci_e(m) - SymMat3::diag(6, 3, 2)), 1e-12);

  const ThirdOrderField f = s.timed([] {
    const MetricGrid g = devil_grid(1.0 / 16, 11);
    return third_order(g, curvature_pack(g, 2));
  });
  s.upper("devil_codazzi_lemma_grid", 3, f.max_lemma_residual(), 1e-8);
  s.upper("devil_antisymmetry_grid", 3, f.max_antisym_residual(), 1e-10);
  s.upper("devil_cyclic_grid", 3, f.max_cyclic_residual(), 1e-10);

  const PerturbedHyperbolic fam(-1.0, 0.05, Vec3{0.0, 0.0, 1.2}, 0.4);
  double lemma = 0.0, anti = 0.0, cyc = 0.0, tr = 0.0, devil = std::numeric_limits<double>::infinity();
  for (double x : {-0.1, 0.0, 0.07})
    for (double z : {1.1, 1.2, 1.31}) {
      const ThirdOrderPoint p = third_order_exact(fam, {x, 0.03, z}, 0.0);
      lemma = std::max(lemma, p.lemma_residual);
      anti = std::max(anti, p.antisym_residual);
      cyc = std::max(cyc, p.cyclic_residual);
      tr = std::max(tr, p.trace_residual);
      devil = std::min(devil, p.devil_v2);
    }
  s.lower("devil_norm_exact_jet_nonzero", 3, devil, 0.0, true);
  s.upper("devil_codazzi_lemma_exact_jet", 3, lemma, 1e-8);
  s.upper("devil_antisymmetry_exact_jet", 3, anti, 1e-10);
  s.upper("devil_cyclic_exact_jet", 3, cyc, 1e-10);
  s.upper("devil_traces_exact_jet", 3, tr, 1e-10);
}

std::pair<double, double> early_residuals(FamilyPtr f, double h) {
  const int n = static_cast<int>(std::lround(1.0 / h)) + 1;
  const MetricGrid g = MetricGrid::from_family(f, {n, n, n}, {h, h, h}, {0.0, 0.0, 1.0});
  FlowSpec spec;
  const FlowState s0 = initial_state(g);
  const double dt = cfl_dt_bound(s0.metric, 2, 0.1);
  const FlowState s1 = step(s0, dt, spec);
  const FlowState s2 = step(s1, dt, spec);
  StateAnalysis mid = analyze(s1, 2);
  restrict_residual_region(mid, g, {0.25, 0.25, 1.25}, {0.75, 0.75, 1.75});
  return evolution_residuals(analyze(s0, 2), mid, analyze(s2, 2));
}

void convergence(Suite& s, Cache& cache) {
  const OdeRun& fr = cache.frame_run(s);
  double fe = 0.0;
  for (std::size_t n = 0; n < fr.times.size(); ++n)
    fe = std::max(fe, std::fabs(fr.states[n].m(0, 0) / std::sqrt(4 * fr.times[n] + 1) - 1.0));
  s.upper("hyperbolic_scale_factor_frame", 1, fe, 1e-8);

  double ge = 0.0;
  const GridRun gr = s.timed([&] {
    const MetricGrid g0 = halfspace_grid(-1.0, 17, 1.0 / 32, {0.0, 0.0, 1.0});
    GridRunOptions opt;
    opt.t_end = 0.1;
    opt.cfl = 0.1;
    opt.compute_monitors = false;
    opt.snapshot_cadence = 1;
    opt.on_snapshot = [&](const FlowState& st) {
      const double sc = std::sqrt(4.0 * st.t + 1.0);
      for (std::size_t n = 0; n < g0.values.size(); ++n)
        ge = std::max(ge, max_abs(st.metric.values[n] - sc * g0.values[n]) / max_abs(sc * g0.values[n]));
    };
    FlowSpec spec;
    spec.stencil_order = 4;
    return run_grid_flow(g0, spec, opt);
  });
  s.exact("hyperbolic_grid_run_completed", 1, gr.status == RunStatus::Completed ? 1.0 : 0.0, 1.0);
  s.upper("hyperbolic_scale_factor_grid", 1, ge, 1e-3);

  auto bianchi_ratio = [&](int order) {
    return s.timed([&] {
      const MetricGrid a = devil_grid(1.0 / 16, 9), b = devil_grid(1.0 / 32, 17);
      return bianchi_cross_residual(a, curvature_pack(a, order)) / bianchi_cross_residual(b, curvature_pack(b, order));
    });
  };
  s.band("bianchi_residual_ratio_order2", 4, bianchi_ratio(2), 3.4, 4.6);
  s.band("bianchi_residual_ratio_order4", 0, bianchi_ratio(4), 12.0, 20.0);
  const ThirdOrderPoint ex = third_order_exact(PerturbedHyperbolic(-1.0, 0.05, Vec3{0.0, 0.0, 1.2}, 0.4),
                                               {0.05, -0.02, 1.15}, 0.0);
  s.upper("bianchi_residual_exact_jet", 4, ex.bianchi_norm(), 1e-10);

  const GridRun& cr = cache.constant_run(s);
  double dvol = 0.0, vol_law = 0.0, inth_law = 0.0;
  const MonitorRow& r0 = cr.rows.front();
  for (std::size_t n = 0; n < cr.rows.size(); ++n) {
    const MonitorRow& r = cr.rows[n];
    if (r.dVolResidual) dvol = std::max(dvol, *r.dVolResidual / r.intH);
    const double q = 4.0 * r.t + 1.0;
    vol_law = std::max(vol_law, std::fabs(r.vol / (std::pow(q, 0.75) * r0.vol) - 1.0));
    inth_law = std::max(inth_law, std::fabs(r.intH / (3.0 * std::pow(q, -0.25) * r0.vol) - 1.0));
  }
  s.upper("volume_derivative_equals_total_mean_curvature", 6, dvol, 1e-3);
  s.upper("volume_closed_form", 6, vol_law, 1e-3);
  s.upper("total_mean_curvature_closed_form", 6, inth_law, 1e-3);

  double re = 0.0, rd = 0.0;
  for (const MonitorRow& r : cr.rows) {
    if (r.resDtEin) re = std::max(re, *r.resDtEin);
    if (r.resDtDetE) rd = std::max(rd, *r.resDtDetE);
  }
  s.upper("evolution_residual_ein", 8, re, 1e-3);
  s.upper("evolution_residual_det_e", 8, rd, 1e-3);
  const FamilyPtr hyp = std::make_shared<HyperbolicHalfspace>(-1.0);
  const FamilyPtr pert = std::make_shared<PerturbedHyperbolic>(-1.0, 0.05, Vec3{0.5, 0.5, 1.5}, 0.6);
  for (const auto& [label, fam] : {std::pair{std::string("constant"), hyp}, std::pair{std::string("perturbed"), pert}}) {
    const auto [coarse, fine] = s.timed([&] { return std::pair{early_residuals(fam, 1.0 / 16), early_residuals(fam, 1.0 / 32)}; });
    s.band("evolution_residual_ein_ratio_" + label, 8, coarse.first / fine.first, 3.4, 4.6);
    s.band("evolution_residual_det_e_ratio_" + label, 8, coarse.second / fine.second, 3.4, 4.6);
  }
}

void monotonicity(Suite& s, Cache& cache) {
  const GridRun run = s.timed([] {
    const auto fam = std::make_shared<PerturbedHyperbolic>(-0.1, 0.05, Vec3{0.0, 0.0, 0.0}, 0.6,
                                                           HyperbolicChart::Horospherical, BumpProfile::Compact);
    const double h = 1.0 / 32;
    const MetricGrid g0 = MetricGrid::from_family(fam, {49, 49, 49}, {h, h, h}, {-0.75, -0.75, -0.75});
    GridRunOptions opt;
    opt.t_end = 0.05;
    opt.cfl = 0.1;
    FlowSpec spec;
    spec.stencil_order = 4;
    return run_grid_flow(g0, spec, opt);
  });
  s.exact("standard_run_completed", 5, run.status == RunStatus::Completed ? 1.0 : 0.0, 1.0);
  double j_up = 0.0, i_down = 0.0, di = 0.0;
  for (std::size_t n = 0; n + 1 < run.rows.size(); ++n) {
    const MonitorRow &a = run.rows[n], &b = run.rows[n + 1];
    j_up = std::max(j_up, (b.J - a.J) / std::max(1.0, std::fabs(a.J)));
    i_down = std::max(i_down, (a.I - b.I) / std::max(1.0, std::fabs(a.I)));
  }
  for (std::size_t n = 1; n + 1 < run.rows.size(); ++n) {
    const double rate = (run.rows[n + 1].I - run.rows[n - 1].I) / (2.0 * run.dt);
    const double expect = 0.25 * run.rows[n].devilL2;
    di = std::max(di, std::fabs(rate - expect) / std::max(std::fabs(expect), 1e-300));
  }
  s.upper("hyperbolicity_functional_step_increase", 5, j_up, 1e-6);
  s.upper("einstein_volume_step_decrease", 5, i_down, 1e-6);
  s.upper("einstein_volume_rate_equals_quarter_devil", 5, di, 1e-2);
  s.lower("hyperbolicity_functional_decreased", 5, run.rows.front().J - run.rows.back().J, 0.0, true);

  const GridRun& cr = cache.constant_run(s);
  double jmax = 0.0, idrift = 0.0;
  for (const MonitorRow& r : cr.rows) {
    jmax = std::max(jmax, std::fabs(r.J) / r.vol);
    idrift = std::max(idrift, std::fabs(r.I - cr.rows.front().I) / cr.rows.front().I);
  }
  s.upper("constant_curvature_hyperbolicity_functional", 5, jmax, 1e-6);
  s.upper("constant_curvature_einstein_volume_drift", 5, idrift, 1e-4);

  const OdeRun& fr = cache.frame_run(s);
  double hmin = std::numeric_limits<double>::infinity(), spot = std::numeric_limits<double>::quiet_NaN();
  for (const MonitorRow& r : fr.monitors) {
    if (r.t >= 0.5 - 1e-12 && r.t <= 2.0 + 1e-12 && r.harnackMin) hmin = std::min(hmin, *r.harnackMin);
    if (std::fabs(r.t - 1.0) < 1e-9 && r.harnackMin) {
      const double expect = std::pow(5.0, -0.75) * (0.75 - 0.6);
      spot = std::fabs(*r.harnackMin - expect);
    }
  }
  s.lower("harnack_min_frame_t_0.5_to_2", 7, hmin, -1e-6 * s.options().tol_scale, false);
  s.upper("harnack_spot_value_t1", 7, spot, 1e-6);
}

void embedding(Suite& s) {
  const EmbeddingState fine = s.timed([] { return embed(embed_halfspace(1.0 / 32), 2); });
  s.upper("hyperboloid_quadric_deviation", 9, quadric_fit(fine, -1.0).deviation, 1e-3);
  const EmbeddingState coarse = s.timed([] { return embed(embed_halfspace(1.0 / 16), 2); });
  s.band("metric_residual_ratio", 9, coarse.residuals.metric / fine.residuals.metric, 3.4, 4.6);
  s.band("path_residual_ratio", 9, coarse.residuals.path / fine.residuals.path, 3.4, 4.6);
  double prev = 0.0, growth = std::numeric_limits<double>::infinity();
  for (double eps : {0.02, 0.05, 0.1}) {
    const EmbeddingState st = s.timed([&] { return embed(embed_perturbed(eps), 2); });
    growth = std::min(growth, st.residuals.path - prev);
    prev = st.residuals.path;
  }
  s.lower("path_residual_sweep_increase", 9, growth, 0.0, true);

  double route = 0.0;
  for (double r0 : {1.0, 2.0})
    for (double t : {0.0, 1.0, 2.0}) route = std::max(route, gcf_xcf_correspondence(r0, t).max_diff);
  s.upper("gcf_xcf_routes", 10, route, 1e-12);
  double ident = 0.0;
  s.timed([&] {
    for (const MetricGrid& g : {embed_halfspace(1.0 / 16), embed_perturbed(0.05), embed_perturbed(0.1)})
      for (int order : {2, 4}) ident = std::max(ident, gcf_identity_residual(curvature_pack(g, order)));
    return 0;
  });
  s.upper("gauss_curvature_identity_packs", 10, ident, 1e-10);

  const EmbeddingInput in = embedding_input(embed_halfspace(1.0 / 16), 2);
  const GaussResidual gr = gauss_residual(in.pack, in.A);
  s.upper("gauss_equation_pack", 0, std::max({gr.full, gr.contracted, gr.scalar}), 1e-12);
  const IntegrabilityResult hyp = s.timed([] { return is_integrable(embed_halfspace(1.0 / 64), 1e-6); });
  s.exact("constant_curvature_integrable", 0, hyp.integrable ? 1.0 : 0.0, 1.0);
  const IntegrabilityResult pert = s.timed([] { return is_integrable(embed_perturbed(0.1), 1e-6); });
  s.exact("perturbed_not_integrable", 0, pert.integrable ? 1.0 : 0.0, 0.0);

  const FrameChartFamily chart(1.0, 2.0, SymMat3::identity());
  const ThirdOrderPoint fr = frame_third_order(solvable_frame(1.0, 2.0, SymMat3::identity()));
  double agree = 0.0;
  for (const Vec3& x : {Vec3{0, 0, 0}, Vec3{0.3, -0.2, 0.4}})
    agree = std::max(agree, std::fabs(third_order_exact(chart, x, 0.0).defect_e2 - fr.defect_e2) / fr.defect_e2);
  s.upper("codazzi_defect_frame_vs_chart", 0, agree, 1e-8);
}

void symbol(Suite& s) {
  const SymbolScan scan = s.timed([&] { return symbol_scan(10000, s.options().seed, 1000); });
  int dim3 = 0, total = 0;
  for (const auto& [dim, count] : scan.kernel_histogram) {
    total += count;
    if (dim == 3) dim3 = count;
  }
  s.exact("xcf_kernel_dimension_3_count", 11, dim3, 1000.0);
  s.exact("xcf_kernel_samples", 11, total, 1000.0);
  s.lower("deturck_min_real_part", 11, scan.deturck_min_real_part, 0.0, true);
  s.exact("deturck_scan_failures", 11, static_cast<double>(scan.failures.size()), 0.0);

  double ricci = 0.0, kern = 0.0, homog = 0.0, gauge = 0.0;
  std::mt19937_64 rng(s.options().seed ^ 0x5eedULL);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const SymbolContext c = random_symbol_context(s.options().seed, static_cast<std::uint64_t>(k));
    const RicciSymbols r = symbol_ricci(c.g, c.xi);
    const double len = quad(inverse(c.g), c.xi);
    ricci = std::max(ricci, (r.deturck.M - len * Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff());
    const SymbolMatrix x = symbol_xcf(c.g, c.E, c.xi);
    const Vec3 w{nd(rng), nd(rng), nd(rng)};
    kern = std::max(kern, max_abs(x.apply(sym_outer(c.xi, w))) / x.M.norm());
    const Vec3 xi2{2 * c.xi[0], 2 * c.xi[1], 2 * c.xi[2]};
    homog = std::max(homog, (symbol_xcf(c.g, c.E, xi2).M - 4.0 * x.M).cwiseAbs().maxCoeff() / x.M.norm());
    const Eigen::Matrix<double, 6, 6> gm = symbol_deturck(c.g, c.E, c.xi).M - x.M;
    gauge = std::max(gauge, (gm - (r.deturck.M - r.raw.M)).cwiseAbs().maxCoeff() / std::max(1.0, gm.norm()));
  }
  s.exact("deturck_ricci_symbol_is_scaled_identity", 11, ricci, 0.0);
  s.upper("xcf_kernel_contains_sym_xi_omega", 11, kern, 1e-12);
  s.upper("symbol_homogeneity_degree_2", 0, homog, 1e-13);
  s.upper("deturck_gauge_accounting", 0, gauge, 1e-12);

  const std::vector<double> amps{1e-3, 5e-4, 2.5e-4, 1.25e-4};
  const Vec3 x{0.0, 0.0, 1.0}, xi{0.6, -0.3, 0.8};
  const HyperbolicHalfspace hyp(-1.0);
  const PerturbedHyperbolic pert(-1.0, 0.1, Vec3{0.1, 0.0, 1.1}, 0.4);
  SymMat3 e02;
  e02(0, 2) = 1.0;
  double fd = 0.0;
  s.timed([&] {
    for (const MetricFamily* f : {static_cast<const MetricFamily*>(&hyp), static_cast<const MetricFamily*>(&pert)}) {
      const CurvaturePoint p = point_from_jet(primal_jet(f->jet3(x, 0.0)));
      const SymbolMatrix sm = symbol_xcf(p.g, p.ein, xi);
      for (const SymMat3& V : {p.g, random_sym(rng), e02}) {
        const SymMat3 expect = sm.apply(V);
        fd = std::max(fd, max_abs(symbol_fd_oracle(*f, x, 0.0, xi, V, amps).column - expect) / max_abs(expect));
      }
    }
    return 0;
  });
  s.upper("fd_oracle_matches_xcf_symbol", 11, fd, 1e-2);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebraic", "convergence", "monotonicity", "embedding", "symbol", "all"};
  return names;
}

std::vector<Check> run_suite(const std::string& suite, const VerifyOptions& opt) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw Error(ErrorCode::ConfigError, "unknown suite \"" + suite + "\"");
  if (!(opt.tol_scale > 0.0) || !std::isfinite(opt.tol_scale))
    throw Error(ErrorCode::ConfigError, "tol-scale must be a positive number");
  Suite s(opt);
  Cache cache;
  const bool all = suite == "all";
  if (all || suite == "algebraic") algebraic(s);
  if (all || suite == "convergence") convergence(s, cache);
  if (all || suite == "monotonicity") monotonicity(s, cache);
  if (all || suite == "embedding") embedding(s);
  if (all || suite == "symbol") symbol(s);
  return s.checks;
}

nlohmann::json verify_report(const std::string& suite, const VerifyOptions& opt, const std::vector<Check>& checks) {
  nlohmann::json list = nlohmann::json::array();
  for (const Check& c : checks) {
    nlohmann::json j{{"name", c.name}, {"criterion", c.criterion}, {"measured", c.measured}, {"pass", c.pass}};
    j["lo"] = c.lo ? nlohmann::json(*c.lo) : nlohmann::json();
    j["hi"] = c.hi ? nlohmann::json(*c.hi) : nlohmann::json();
    if (c.lo) j["strict_lo"] = c.strict_lo;
    list.push_back(std::move(j));
  }
  return {{"suite", suite}, {"seed", opt.seed}, {"tol_scale", opt.tol_scale}, {"checks", list}, {"pass", all_pass(checks)}};
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace xcf
