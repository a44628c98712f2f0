#include "xcflab/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "xcflab/parallel.hpp"

namespace xcf {

namespace {

Eigen::Matrix3d to_eigen(const SymMat3& s) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = s(i, j);
  return m;
}

}  // namespace

CurvaturePoint finish_point(const SymMat3& g, const CurvatureCore<double>& core) {
  CurvaturePoint p;
  p.g = g;
  p.gamma = core.gamma;
  p.rm = core.rm;
  p.ric = core.ric;
  p.sc = core.sc;
  p.ein = core.ein;

  // g = L Lᵀ; L⁻¹ Ein L⁻ᵀ is symmetric and similar to g⁻¹Ein.
  Eigen::LLT<Eigen::Matrix3d> llt(to_eigen(g));
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NonPositiveMetric, "metric not positive-definite");
  const Eigen::Matrix3d L = llt.matrixL();
  Eigen::Matrix3d S = L.triangularView<Eigen::Lower>().solve(to_eigen(core.ein));
  S = L.triangularView<Eigen::Lower>().solve(S.transpose()).eval();
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(S);
  const Eigen::Matrix3d vecs = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  for (int i = 0; i < 3; ++i) {
    p.lambda[i] = es.eigenvalues()(i);
    for (int r = 0; r < 3; ++r) p.frame(r, i) = vecs(r, i);
  }

  p.adj_ein = adj_ein_lower(g, core.ein);
  p.det_e = det(core.ein) / det(g);
  p.trace_cross = contract(inverse(g), p.adj_ein);
  p.ein_spd = p.lambda[0] > 0.0;
  if (p.ein_spd) {
    p.V = congruence(g, inverse(core.ein));
    p.ob = std::sqrt(p.det_e) * p.V;
  }
  return p;
}

Tensor4<double> kulkarni_nomizu(const SymMat3& h, const SymMat3& k) {
  Tensor4<double> r{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
          r[t4(a, b, c, d)] = h(a, c) * k(b, d) + h(b, d) * k(a, c) - h(a, d) * k(b, c) -
                              h(b, c) * k(a, d);
  return r;
}

namespace {

Tensor4<double> decomposed_rm(const SymMat3& g, const SymMat3& ein) {
  const double tr = contract(inverse(g), ein);
  Tensor4<double> a = kulkarni_nomizu(ein, g), b = kulkarni_nomizu(g, g);
  Tensor4<double> r{};
  for (int n = 0; n < 81; ++n) r[n] = -a[n] + 0.5 * tr * b[n];
  return r;
}

}  // namespace

CurvaturePoint model_point(const SymMat3& g, const SymMat3& ein) {
  CurvatureCore<double> core;
  core.rm = decomposed_rm(g, ein);
  const SymMat3 gi = inverse(g);
  for (int s = 0; s < 6; ++s) {
    auto [b, c] = sym_pair(s);
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int d = 0; d < 3; ++d) acc += gi(a, d) * core.rm[t4(a, b, c, d)];
    core.ric[s] = acc;
  }
  core.sc = contract(gi, core.ric);
  core.ein = core.ric - (0.5 * core.sc) * g;
  return finish_point(g, core);
}

CurvaturePoint point_from_jet(const MetricJet<double>& jet) {
  return finish_point(jet.g, curvature_core(jet));
}

double sectional(const CurvaturePoint& p, const Vec3& x, const Vec3& y) {
  const double xx = quad(p.g, x), yy = quad(p.g, y);
  double xy = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) xy += p.g(a, b) * x[a] * y[b];
  const double area = xx * yy - xy * xy;
  if (!(area >= 1e-14)) throw Error(ErrorCode::DegeneratePlane, "plane area below 1e-14");
  double num = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) num += p.rm[t4(a, b, c, d)] * x[a] * y[b] * y[c] * x[d];
  return num / area;
}

double sectional(const CurvaturePoint& p, int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2)
    throw Error(ErrorCode::ConfigError, "sectional axis out of range");
  Vec3 x{p.frame(0, i), p.frame(1, i), p.frame(2, i)};
  Vec3 y{p.frame(0, j), p.frame(1, j), p.frame(2, j)};
  return sectional(p, x, y);
}

SymMat3 cross_via_ricci_e(const CurvaturePoint& p) {
  const SymMat3 gi = inverse(p.g);
  // opE^p_q = g^{pr} Ein_rq ; R^q_pbc = g^{qd} R_pbcd
  Mat3<double> op = Mat3<double>::from_sym(gi) * Mat3<double>::from_sym(p.ein);
  SymMat3 out;
  for (int s = 0; s < 6; ++s) {
    auto [b, c] = sym_pair(s);
    double acc = 0.0;
    for (int pp = 0; pp < 3; ++pp)
      for (int q = 0; q < 3; ++q) {
        double rq = 0.0;
        for (int d = 0; d < 3; ++d) rq += gi(q, d) * p.rm[t4(pp, b, c, d)];
        acc += op(pp, q) * rq;
      }
    out[s] = -0.5 * acc;
  }
  return out;
}

double ricci_decomposition_residual(const CurvaturePoint& p) {
  const Tensor4<double> model = decomposed_rm(p.g, p.ein);
  double diff = 0.0, scale = 1.0;
  for (int n = 0; n < 81; ++n) {
    diff = std::max(diff, std::fabs(p.rm[n] - model[n]));
    scale = std::max(scale, std::fabs(p.rm[n]));
  }
  return diff / scale;
}

CurvatureCore<double> grid_core(const MetricGrid& grid, const Index3& p, int order) {
  return curvature_core(fd_jet(grid, p, order));
}

CurvaturePack curvature_pack(const MetricGrid& grid, int stencil_order) {
  return curvature_pack(grid, stencil_order, grid.interior());
}

CurvaturePack curvature_pack(const MetricGrid& grid, int stencil_order, const IndexBox& box) {
  grid.validate();
  require_stencil(grid, stencil_order);
  CurvaturePack pack;
  pack.stencil_order = stencil_order;
  pack.points = NodeField<CurvaturePoint>(box);
  parallel_for(box.size(), [&](std::size_t n) {
    const Index3 p = box.unlinear(n);
    pack.points[n] = finish_point(grid.sample(p), grid_core(grid, p, stencil_order));
  });
  return pack;
}

SymMat3 cross_via_ricci_e_at(const CurvaturePack& pack, const Index3& p) {
  return cross_via_ricci_e(pack.at(p));
}

double ricci_decomposition_residual(const CurvaturePack& pack) {
  double r = 0.0;
  for (std::size_t n = 0; n < pack.points.size(); ++n)
    r = std::max(r, ricci_decomposition_residual(pack.points[n]));
  return r;
}

}  // namespace xcf
