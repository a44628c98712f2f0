#include "xcflab/minkowski.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "xcflab/parallel.hpp"
#include "xcflab/third_order.hpp"

namespace xcf {

double mink(const MinkVec& x, const MinkVec& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3];
}

WeingartenPoint weingarten_point(const CurvaturePoint& p) {
  if (!p.ein_spd) throw Error(ErrorCode::NonPositiveEin, "Weingarten map needs a positive Einstein tensor");
  WeingartenPoint w;
  w.A = p.ob;
  w.W = Mat3<double>::from_sym(inverse(p.g)) * Mat3<double>::from_sym(p.ob);
  w.K = std::sqrt(p.det_e);
  for (int i = 0; i < 3; ++i) w.kappa[i] = w.K / p.lambda[2 - i];
  return w;
}

NodeField<WeingartenPoint> weingarten_from_intrinsic(const CurvaturePack& pack) {
  NodeField<WeingartenPoint> out(pack.box());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = weingarten_point(pack.points[n]);
  return out;
}

GaussResidual gauss_residual(const CurvaturePoint& p, const SymMat3& A) {
  GaussResidual r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          const double model = A(a, c) * A(b, d) - A(a, d) * A(b, c);
          r.full = std::max(r.full, std::fabs(p.rm[t4(a, b, c, d)] - model));
        }
  const SymMat3 gi = inverse(p.g);
  const double H = contract(gi, A);
  const SymMat3 AgA = congruence(A, gi);
  for (int s = 0; s < 6; ++s)
    r.contracted = std::max(r.contracted, std::fabs(p.ric[s] - (AgA[s] - H * A[s])));
  r.scalar = std::fabs(p.sc - (contract(gi, AgA) - H * H));
  return r;
}

GaussResidual gauss_residual(const CurvaturePack& pack, const NodeField<SymMat3>& A) {
  GaussResidual r;
  for (std::size_t n = 0; n < pack.points.size(); ++n) {
    const Index3 p = pack.box().unlinear(n);
    const GaussResidual q = gauss_residual(pack.points[n], A(p));
    r.full = std::max(r.full, q.full);
    r.contracted = std::max(r.contracted, q.contracted);
    r.scalar = std::max(r.scalar, q.scalar);
  }
  return r;
}

double gcf_identity_residual(const CurvaturePack& pack) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < pack.points.size(); ++n) {
    const CurvaturePoint& p = pack.points[n];
    if (!p.ein_spd) continue;
    const WeingartenPoint w = weingarten_point(p);
    diff = std::max(diff, max_abs(2.0 * w.K * w.A - 2.0 * p.adj_ein));
    scale = std::max(scale, max_abs(p.adj_ein));
  }
  return diff / std::max(scale, 1e-300);
}

namespace {

/// Transport coefficients along one axis k at a node.
struct LineCoeffs {
  double gamma[3][3];  // Γ^m_kj at [m][j]
  double A[3];         // A_kj
  double W[3];         // W^m_k
};

LineCoeffs coeffs_at(const CurvaturePoint& p, const SymMat3& A, int k) {
  LineCoeffs c;
  const SymMat3 gi = inverse(p.g);
  for (int m = 0; m < 3; ++m)
    for (int j = 0; j < 3; ++j) c.gamma[m][j] = p.gamma[t3(m, k, j)];
  for (int j = 0; j < 3; ++j) c.A[j] = A(k, j);
  for (int m = 0; m < 3; ++m) {
    double acc = 0.0;
    for (int q = 0; q < 3; ++q) acc += gi(m, q) * A(q, k);
    c.W[m] = acc;
  }
  return c;
}

LineCoeffs cubic_mid(const LineCoeffs& a, const LineCoeffs& b, const LineCoeffs& c, const LineCoeffs& d) {
  auto mix = [](double w, double x, double y, double z) { return (-w + 9.0 * x + 9.0 * y - z) / 16.0; };
  LineCoeffs r;
  for (int m = 0; m < 3; ++m)
    for (int j = 0; j < 3; ++j) r.gamma[m][j] = mix(a.gamma[m][j], b.gamma[m][j], c.gamma[m][j], d.gamma[m][j]);
  for (int j = 0; j < 3; ++j) {
    r.A[j] = mix(a.A[j], b.A[j], c.A[j], d.A[j]);
    r.W[j] = mix(a.W[j], b.W[j], c.W[j], d.W[j]);
  }
  return r;
}

/// F, e1, e2, e3, ν.
using Frame = std::array<MinkVec, 5>;

Frame frame_rate(const Frame& y, const LineCoeffs& c, int k) {
  Frame d{};
  d[0] = y[1 + k];
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) {
      double v = c.A[j] * y[4][i];
      for (int m = 0; m < 3; ++m) v += c.gamma[m][j] * y[1 + m][i];
      d[1 + j][i] = v;
    }
  for (int i = 0; i < 4; ++i) {
    double v = 0.0;
    for (int m = 0; m < 3; ++m) v += c.W[m] * y[1 + m][i];
    d[4][i] = v;
  }
  return d;
}

Frame axpy(const Frame& y, double a, const Frame& k) {
  Frame r = y;
  for (int v = 0; v < 5; ++v)
    for (int i = 0; i < 4; ++i) r[v][i] += a * k[v][i];
  return r;
}

class Transport {
 public:
  Transport(const MetricGrid& grid, const CurvaturePack& pack, const NodeField<SymMat3>& A)
      : grid_(grid), pack_(pack), A_(A) {}

  LineCoeffs at(const Index3& p, int k) const { return coeffs_at(pack_.at(p), A_(p), k); }

  /// One RK4 step from node p to p + s e_k.
  Frame step(const Frame& y, const Index3& p, int k, int s) const {
    auto shifted = [&](int off) {
      Index3 q = p;
      q[k] += off * s;
      return q;
    };
    const double h = s * grid_.spacing[k];
    const LineCoeffs c0 = at(p, k), c1 = at(shifted(1), k);
    const LineCoeffs cm = cubic_mid(at(shifted(-1), k), c0, c1, at(shifted(2), k));
    const Frame k1 = frame_rate(y, c0, k);
    const Frame k2 = frame_rate(axpy(y, 0.5 * h, k1), cm, k);
    const Frame k3 = frame_rate(axpy(y, 0.5 * h, k2), cm, k);
    const Frame k4 = frame_rate(axpy(y, h, k3), c1, k);
    Frame r = y;
    for (int v = 0; v < 5; ++v)
      for (int i = 0; i < 4; ++i)
        r[v][i] += h / 6.0 * (k1[v][i] + 2.0 * k2[v][i] + 2.0 * k3[v][i] + k4[v][i]);
    return r;
  }

  /// Fills every node on the axis-k line through `start` from its known value.
  void sweep(std::vector<Frame>& f, const Index3& start, int k) const {
    const IndexBox all = grid_.nodes();
    for (int s : {1, -1}) {
      Index3 p = start;
      while (true) {
        Index3 q = p;
        q[k] += s;
        if (q[k] < 0 || q[k] >= grid_.dims[k]) break;
        f[all.linear(q)] = step(f[all.linear(p)], p, k, s);
        p = q;
      }
    }
  }

 private:
  const MetricGrid& grid_;
  const CurvaturePack& pack_;
  const NodeField<SymMat3>& A_;
};

std::vector<Frame> integrate_frames(const MetricGrid& grid, const Transport& tr, const Index3& base,
                                    const std::array<int, 3>& order) {
  const IndexBox all = grid.nodes();
  std::vector<Frame> f(all.size());
  const SymMat3& g = grid.at(base);
  Eigen::Matrix3d gm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gm(i, j) = g(i, j);
  const Eigen::Matrix3d L = Eigen::LLT<Eigen::Matrix3d>(gm).matrixL();
  Frame y0{};
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c) y0[1 + i][c] = L(i, c);
  y0[4] = {0.0, 0.0, 0.0, 1.0};
  f[all.linear(base)] = y0;

  const int a = order[0], b = order[1], c = order[2];
  tr.sweep(f, base, a);
  std::vector<Index3> line;
  for (int i = 0; i < grid.dims[a]; ++i) {
    Index3 p = base;
    p[a] = i;
    line.push_back(p);
  }
  parallel_for(line.size(), [&](std::size_t n) { tr.sweep(f, line[n], b); });
  std::vector<Index3> plane;
  for (int i = 0; i < grid.dims[a]; ++i)
    for (int j = 0; j < grid.dims[b]; ++j) {
      Index3 p = base;
      p[a] = i;
      p[b] = j;
      plane.push_back(p);
    }
  parallel_for(plane.size(), [&](std::size_t n) { tr.sweep(f, plane[n], c); });
  return f;
}

void check_order(const std::array<int, 3>& o) {
  std::array<int, 3> s = o;
  std::sort(s.begin(), s.end());
  if (s != std::array<int, 3>{0, 1, 2})
    throw Error(ErrorCode::ConfigError, "path_order must be a permutation of the three axes");
}

}  // namespace

EmbeddingState integrate_embedding(const MetricGrid& grid, const CurvaturePack& pack,
                                   const NodeField<SymMat3>& A, std::array<int, 3> path_order) {
  check_order(path_order);
  if (grid.boundary != BoundaryMode::DirichletAnalytic)
    throw Error(ErrorCode::ConfigError, "embedding needs Dirichlet-analytic boundary data");
  const IndexBox need = grid.nodes().grown(1);
  for (int ax = 0; ax < 3; ++ax)
    if (pack.box().lo[ax] > need.lo[ax] || pack.box().hi[ax] < need.hi[ax] ||
        A.box().lo[ax] > need.lo[ax] || A.box().hi[ax] < need.hi[ax])
      throw Error(ErrorCode::ConfigError, "embedding data must cover the grid grown by one node");
  for (std::size_t n = 0; n < need.size(); ++n)
    if (!pack.at(need.unlinear(n)).ein_spd)
      throw Error(ErrorCode::NonPositiveEin, "embedding needs a positive Einstein tensor");

  EmbeddingState s;
  s.dims = grid.dims;
  s.base = {grid.dims[0] / 2, grid.dims[1] / 2, grid.dims[2] / 2};
  s.path_order = path_order;
  const Transport tr(grid, pack, A);
  const std::vector<Frame> f = integrate_frames(grid, tr, s.base, path_order);
  const std::array<int, 3> rev{path_order[2], path_order[1], path_order[0]};
  const std::vector<Frame> r = integrate_frames(grid, tr, s.base, rev);

  const IndexBox all = grid.nodes();
  s.F.resize(all.size());
  s.nu.resize(all.size());
  s.frame.resize(all.size());
  for (std::size_t n = 0; n < all.size(); ++n) {
    const Frame& y = f[n];
    s.F[n] = y[0];
    s.nu[n] = y[4];
    s.frame[n] = {y[1], y[2], y[3]};
    const SymMat3& g = grid.values[n];
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j)
        s.residuals.metric = std::max(s.residuals.metric, std::fabs(mink(y[1 + i], y[1 + j]) - g(i, j)));
      s.residuals.normal = std::max(s.residuals.normal, std::fabs(mink(y[1 + i], y[4])));
    }
    s.residuals.normal = std::max(s.residuals.normal, std::fabs(mink(y[4], y[4]) + 1.0));
    for (int i = 0; i < 4; ++i)
      s.residuals.path = std::max(s.residuals.path, std::fabs(y[0][i] - r[n][0][i]));
  }
  return s;
}

EmbeddingInput embedding_input(const MetricGrid& grid, int order) {
  EmbeddingInput in;
  const IndexBox box = grid.nodes().grown(1);
  in.pack = curvature_pack(grid, order, box);
  in.A = NodeField<SymMat3>(box);
  for (std::size_t n = 0; n < box.size(); ++n) {
    if (!in.pack.points[n].ein_spd)
      throw Error(ErrorCode::NonPositiveEin, "embedding needs a positive Einstein tensor");
    in.A[n] = in.pack.points[n].ob;
  }
  return in;
}

EmbeddingState embed(const MetricGrid& grid, int order, std::array<int, 3> path_order) {
  const EmbeddingInput in = embedding_input(grid, order);
  return integrate_embedding(grid, in.pack, in.A, path_order);
}

QuadricFit quadric_fit(const EmbeddingState& s, std::optional<double> target) {
  const std::size_t n = s.F.size();
  Eigen::MatrixXd M(n, 5);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const MinkVec& F = s.F[i];
    // <F,F> = 2<F,c> + β
    M(i, 0) = 2.0 * F[0];
    M(i, 1) = 2.0 * F[1];
    M(i, 2) = 2.0 * F[2];
    M(i, 3) = -2.0 * F[3];
    M(i, 4) = 1.0;
    rhs(i) = mink(F, F);
  }
  const Eigen::VectorXd x = M.colPivHouseholderQr().solve(rhs);
  QuadricFit q;
  q.center = {x(0), x(1), x(2), x(3)};
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    MinkVec d;
    for (int k = 0; k < 4; ++k) d[k] = s.F[i][k] - q.center[k];
    vals[i] = mink(d, d);
    q.mean += vals[i];
  }
  q.mean /= static_cast<double>(n);
  const double t = target.value_or(q.mean);
  for (double v : vals) q.deviation = std::max(q.deviation, std::fabs(v - t));
  return q;
}

nlohmann::json embedding_to_json(const EmbeddingState& s) {
  std::vector<double> F, frame, nu;
  for (std::size_t n = 0; n < s.F.size(); ++n) {
    F.insert(F.end(), s.F[n].begin(), s.F[n].end());
    nu.insert(nu.end(), s.nu[n].begin(), s.nu[n].end());
    for (const MinkVec& e : s.frame[n]) frame.insert(frame.end(), e.begin(), e.end());
  }
  return {{"dims", s.dims},
          {"base", s.base},
          {"path_order", s.path_order},
          {"F", F},
          {"frame", frame},
          {"nu", nu},
          {"residuals",
           {{"metricResidual", s.residuals.metric},
            {"pathResidual", s.residuals.path},
            {"normalResidual", s.residuals.normal}}}};
}

double HyperboloidFamily::radius(double t) const { return std::pow(4.0 * t + std::pow(r0, 4), 0.25); }
double HyperboloidFamily::radius_rate(double t) const { return std::pow(radius(t), -3); }

GcfXcfReport gcf_xcf_correspondence(double r0, double t) {
  if (!(r0 > 0.0) || !(t >= 0.0)) throw Error(ErrorCode::ConfigError, "need r0 > 0 and t >= 0");
  const HyperboloidFamily fam{r0};
  GcfXcfReport rep;
  rep.r = fam.radius(t);
  rep.K_gauss = std::pow(rep.r, -3);
  rep.extrinsic = 2.0 * rep.r * fam.radius_rate(t);
  rep.gauss_route = 2.0 * rep.K_gauss * rep.r;
  // Intrinsic route: r² times the unit half-space metric, through the curvature code.
  const HyperbolicHalfspace unit(-1.0);
  const Vec3 x{0.0, 0.0, 1.0};
  const MetricJet<double> jet = scaled(primal_jet(unit.jet3(x, 0.0)), rep.r * rep.r);
  const CurvaturePoint p = point_from_jet(jet);
  const SymMat3 gH = unit.metric(x, 0.0);
  rep.intrinsic = 2.0 * p.adj_ein(0, 0) / gH(0, 0);
  const double K0 = -1.0 / (r0 * r0);
  rep.xcf_exact = hyperbolic_scale(K0, t) * r0 * r0;
  const double routes[3] = {rep.extrinsic, rep.gauss_route, rep.intrinsic};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      rep.max_diff = std::max(rep.max_diff, std::fabs(routes[i] - routes[j]) / std::fabs(routes[i]));
  rep.max_diff = std::max(rep.max_diff, std::fabs(rep.r * rep.r - rep.xcf_exact) / rep.xcf_exact);
  return rep;
}

namespace {

struct DefectData {
  NodeField<Tensor3<double>> defect;
  double scale = 0.0;
};

DefectData defect_field(const MetricGrid& g) {
  const CurvaturePack pack = curvature_pack(g, 4);
  for (std::size_t n = 0; n < pack.points.size(); ++n)
    if (!pack.points[n].ein_spd)
      throw Error(ErrorCode::NonPositiveEin, "integrability test needs a positive Einstein tensor");
  const ThirdOrderField t = third_order(g, pack);
  DefectData d;
  d.defect = NodeField<Tensor3<double>>(t.box());
  for (std::size_t n = 0; n < t.points.size(); ++n) {
    d.defect[n] = t.points[n].defect;
    const CurvaturePoint& c = pack.at(t.box().unlinear(n));
    double gamma = 0.0;
    for (double v : c.gamma) gamma = std::max(gamma, std::fabs(v));
    d.scale = std::max({d.scale, t.points[n].max_grad_ob, gamma * max_abs(c.ob)});
  }
  return d;
}

}  // namespace

IntegrabilityResult is_integrable(const MetricGrid& grid, double tol) {
  if (grid.boundary != BoundaryMode::DirichletAnalytic)
    throw Error(ErrorCode::ConfigError, "integrability test needs Dirichlet-analytic boundary data");
  MetricGrid coarse;
  coarse.boundary = grid.boundary;
  coarse.family = grid.family;
  coarse.time = grid.time;
  coarse.origin = grid.origin;
  for (int a = 0; a < 3; ++a) {
    if (grid.dims[a] % 2 == 0)
      throw Error(ErrorCode::ConfigError, "integrability test needs odd node counts");
    coarse.dims[a] = (grid.dims[a] - 1) / 2 + 1;
    coarse.spacing[a] = 2.0 * grid.spacing[a];
  }
  require_stencil(coarse, 4);
  coarse.values.resize(coarse.nodes().size());
  for (std::size_t n = 0; n < coarse.values.size(); ++n) {
    const Index3 q = coarse.nodes().unlinear(n);
    coarse.values[n] = grid.at({2 * q[0], 2 * q[1], 2 * q[2]});
  }
  const DefectData fine = defect_field(grid), crs = defect_field(coarse);
  IntegrabilityResult r;
  r.scale = fine.scale;
  const IndexBox cb = crs.defect.box();
  for (std::size_t n = 0; n < cb.size(); ++n) {
    const Index3 q = cb.unlinear(n);
    const Tensor3<double>& df = fine.defect({2 * q[0], 2 * q[1], 2 * q[2]});
    const Tensor3<double>& dc = crs.defect[n];
    for (int k = 0; k < 27; ++k)
      r.defect = std::max(r.defect, std::fabs((16.0 * df[k] - dc[k]) / 15.0));
  }
  r.integrable = r.defect <= tol * r.scale;
  return r;
}

}  // namespace xcf
