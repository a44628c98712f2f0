#include "xcflab/third_order.hpp"

#include <algorithm>
#include <cmath>

#include "xcflab/parallel.hpp"

namespace xcf {

double ThirdOrderPoint::bianchi_norm() const {
  return std::max({std::fabs(bianchi[0]), std::fabs(bianchi[1]), std::fabs(bianchi[2])});
}

std::array<SymMat3, 3> covariant_ein_derivative(const Tensor3<double>& gamma, const SymMat3& ein,
                                                const std::array<SymMat3, 3>& partial_ein) {
  std::array<SymMat3, 3> r;
  for (int l = 0; l < 3; ++l)
    for (int s = 0; s < 6; ++s) {
      auto [a, b] = sym_pair(s);
      double v = partial_ein[l][s];
      for (int p = 0; p < 3; ++p)
        v -= gamma[t3(p, l, a)] * ein(p, b) + gamma[t3(p, l, b)] * ein(a, p);
      r[l][s] = v;
    }
  return r;
}

ThirdOrderPoint third_order_point(const SymMat3& g, const SymMat3& ein,
                                  const std::array<SymMat3, 3>& nabla_ein) {
  if (!is_spd(ein)) throw Error(ErrorCode::NonPositiveEin, "Einstein tensor not positive-definite");
  ThirdOrderPoint o;
  const SymMat3 gi = inverse(g);
  const SymMat3 E = congruence(gi, ein);
  const SymMat3 V = inverse(E);
  const double d = det(ein) / det(g);
  const double sd = std::sqrt(d);
  o.e_up = E;
  o.det_e = d;

  std::array<SymMat3, 3> dE, dV, dOb, dAdj;
  Vec3 dlnd{};
  for (int l = 0; l < 3; ++l) {
    dE[l] = congruence(gi, nabla_ein[l]);
    dV[l] = -1.0 * congruence(V, dE[l]);
    dlnd[l] = contract(V, dE[l]);
    dOb[l] = sd * ((0.5 * dlnd[l]) * V + dV[l]);
    dAdj[l] = d * (dlnd[l] * V + dV[l]);
  }

  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 3; ++l) acc += E(k, l) * dE[l](i, j);
        o.T[t3(k, i, j)] = acc;
      }
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) acc += V(j, k) * o.T[t3(i, j, k)];
    o.Ti[i] = acc;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        o.D[t3(i, j, k)] = o.T[t3(i, j, k)] - o.T[t3(j, i, k)] -
                           0.5 * (o.Ti[i] * E(j, k) - o.Ti[j] * E(i, k));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) o.defect[t3(i, j, k)] = dOb[i](j, k) - dOb[j](i, k);
  o.grad_e_up = dE;
  for (int l = 0; l < 3; ++l) o.grad_det_e[l] = d * dlnd[l];
  for (int l = 0; l < 3; ++l) o.max_grad_ob = std::max(o.max_grad_ob, max_abs(dOb[l]));

  // |X|²_Q = Q_ia Q_jb Q_kc X^{ijk} X^{abc}
  auto norm2 = [](const SymMat3& Q, const Tensor3<double>& X) {
    Tensor3<double> Y{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          double acc = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              for (int k = 0; k < 3; ++k) acc += Q(i, a) * Q(j, b) * Q(k, c) * X[t3(i, j, k)];
          Y[t3(a, b, c)] = acc;
        }
    double s = 0.0;
    for (int n = 0; n < 27; ++n) s += X[n] * Y[n];
    return s;
  };
  o.devil_v2 = norm2(V, o.D);
  o.defect_e2 = norm2(E, o.defect);

  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc += E(i, j) * (dAdj[i](j, k) - 0.5 * dAdj[k](i, j));
    o.bianchi[k] = acc;
  }
  Vec3 dsd{};
  for (int l = 0; l < 3; ++l) dsd[l] = 0.5 * sd * dlnd[l];
  o.grad_sqrt_det_e2 = quad(E, dsd);

  double tmax = 0.0, timax = 0.0;
  for (double v : o.T) tmax = std::max(tmax, std::fabs(v));
  for (double v : o.Ti) timax = std::max(timax, std::fabs(v));
  const double scale = tmax + timax * max_abs(E);
  if (scale > 0.0) {
    double anti = 0.0, cyc = 0.0, tr = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          anti = std::max(anti, std::fabs(o.D[t3(i, j, k)] + o.D[t3(j, i, k)]));
          cyc = std::max(cyc, std::fabs(o.D[t3(i, j, k)] + o.D[t3(k, i, j)] + o.D[t3(j, k, i)]));
        }
    for (int x = 0; x < 3; ++x) {
      double t_ij = 0.0, t_ik = 0.0, t_jk = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          t_ij += V(a, b) * o.D[t3(a, b, x)];
          t_ik += V(a, b) * o.D[t3(a, x, b)];
          t_jk += V(a, b) * o.D[t3(x, a, b)];
        }
      tr = std::max({tr, std::fabs(t_ij), std::fabs(t_ik), std::fabs(t_jk)});
    }
    o.antisym_residual = anti / scale;
    o.cyclic_residual = cyc / scale;
    o.trace_residual = tr / (scale * 3.0 * max_abs(V));
  }
  const double lhs = o.devil_v2 * d, rhs = o.defect_e2;
  const double big = std::max(lhs, rhs);
  o.lemma_residual = big > 1e-300 ? std::fabs(lhs - rhs) / big : 0.0;
  return o;
}

ThirdOrderPoint third_order_exact(const MetricFamily& family, const Vec3& x, double t) {
  const MetricJet3 jet = family.jet3(x, t);
  const CurvatureCore<Dual1> core = curvature_core(jet);
  SymMat3 g, ein;
  std::array<SymMat3, 3> partial;
  Tensor3<double> gamma{};
  for (int s = 0; s < 6; ++s) {
    g[s] = jet.g[s].v;
    ein[s] = core.ein[s].v;
    for (int l = 0; l < 3; ++l) partial[l][s] = core.ein[s].d[l];
  }
  for (int n = 0; n < 27; ++n) gamma[n] = core.gamma[n].v;
  return third_order_point(g, ein, covariant_ein_derivative(gamma, ein, partial));
}

EvolutionPrediction evolution_prediction(const SymMat3& g, const ThirdOrderPoint& p,
                                         const SymMat3& box_e_up, double box_det_e,
                                         double trace_cross) {
  const SymMat3 gi = inverse(g);
  EvolutionPrediction r;
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = sym_pair(s);
    double quad_term = 0.0;
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k) quad_term += p.grad_e_up[l](k, i) * p.grad_e_up[k](l, j);
    r.dt_e_up[s] = box_e_up[s] - quad_term - 4.0 * p.det_e * gi[s];
  }
  // |E^{ij}∇_j d|²_V = E^{ij}∇_i d ∇_j d
  const double grad2 = quad(p.e_up, p.grad_det_e);
  r.dt_det_e = box_det_e - (0.5 * grad2 / (p.det_e * p.det_e) - 0.5 * p.devil_v2 +
                            2.0 * trace_cross) *
                               p.det_e;
  return r;
}

SymMat3 homogeneous_box_e_up(const Tensor3<double>& gamma, const ThirdOrderPoint& p) {
  const auto& S = p.grad_e_up;  // S[b](i,j)
  SymMat3 r;
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = sym_pair(s);
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double v = 0.0;
        for (int q = 0; q < 3; ++q)
          v += -gamma[t3(q, a, b)] * S[q](i, j) + gamma[t3(i, a, q)] * S[b](q, j) +
               gamma[t3(j, a, q)] * S[b](i, q);
        acc += p.e_up(a, b) * v;
      }
    r[s] = acc;
  }
  return r;
}

namespace {

template <class F>
double field_max(const NodeField<ThirdOrderPoint>& f, F get) {
  double r = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) r = std::max(r, get(f[n]));
  return r;
}

}  // namespace

double ThirdOrderField::max_lemma_residual() const {
  return field_max(points, [](const ThirdOrderPoint& p) { return p.lemma_residual; });
}
double ThirdOrderField::max_antisym_residual() const {
  return field_max(points, [](const ThirdOrderPoint& p) { return p.antisym_residual; });
}
double ThirdOrderField::max_cyclic_residual() const {
  return field_max(points, [](const ThirdOrderPoint& p) { return p.cyclic_residual; });
}
double ThirdOrderField::max_trace_residual() const {
  return field_max(points, [](const ThirdOrderPoint& p) { return p.trace_residual; });
}
double ThirdOrderField::max_defect() const {
  return field_max(points, [](const ThirdOrderPoint& p) {
    double m = 0.0;
    for (double v : p.defect) m = std::max(m, std::fabs(v));
    return m;
  });
}

NodeField<SymMat3> ein_field(const MetricGrid& grid, int order, const IndexBox& box) {
  NodeField<SymMat3> f(box);
  parallel_for(box.size(), [&](std::size_t n) {
    f[n] = grid_core(grid, box.unlinear(n), order).ein;
  });
  return f;
}

ThirdOrderField third_order(const MetricGrid& grid, const CurvaturePack& pack) {
  const int order = pack.stencil_order;
  const IndexBox box = pack.box();
  const NodeField<SymMat3> ein = ein_field(grid, order, box.grown(stencil_radius(order)));
  ThirdOrderField out;
  out.points = NodeField<ThirdOrderPoint>(box);
  auto read = [&](const Index3& q) { return ein(q); };
  parallel_for(box.size(), [&](std::size_t n) {
    const Index3 p = box.unlinear(n);
    const CurvaturePoint& cp = pack.at(p);
    std::array<SymMat3, 3> partial;
    for (int l = 0; l < 3; ++l)
      partial[l] = fd_first<SymMat3>(read, p, l, grid.spacing[l], order);
    out.points[n] =
        third_order_point(cp.g, cp.ein, covariant_ein_derivative(cp.gamma, cp.ein, partial));
  });
  return out;
}

double bianchi_cross_residual(const ThirdOrderField& field) {
  return field_max(field.points, [](const ThirdOrderPoint& p) { return p.bianchi_norm(); });
}

double bianchi_cross_residual(const MetricGrid& grid, const CurvaturePack& pack) {
  return bianchi_cross_residual(third_order(grid, pack));
}

}  // namespace xcf
