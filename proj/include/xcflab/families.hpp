#pragma once

// Closed-form metric families on a coordinate chart. They provide the initial
// data of a grid, its Dirichlet padding at any flow time, and exact 3-jets
// (through nested duals) for the analytic cross-checks.

#include <cmath>
#include <memory>
#include <string>

#include "json.hpp"
#include "xcflab/jet.hpp"
#include "xcflab/small_tensor.hpp"

namespace xcf {

class MetricFamily {
 public:
  virtual ~MetricFamily() = default;

  virtual std::string name() const = 0;
  virtual SymMat3 metric(const Vec3& x, double t) const = 0;
  /// Time derivative of the boundary data.
  virtual SymMat3 metric_rate(const Vec3& x, double t) const = 0;
  /// Exact metric 2-jet with first derivatives of every entry (third order overall).
  virtual MetricJet3 jet3(const Vec3& x, double t) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

using FamilyPtr = std::shared_ptr<const MetricFamily>;

/// Boundary-data scale factor of the exact hyperbolic solution, sqrt(4 K0^2 t + 1).
inline double hyperbolic_scale(double K0, double t) { return std::sqrt(4.0 * K0 * K0 * t + 1.0); }
inline double hyperbolic_scale_rate(double K0, double t) {
  return 2.0 * K0 * K0 / hyperbolic_scale(K0, t);
}

/// Families of the form s(t)·g_init(x). Derived supplies `initial<T>(x)`.
template <class Derived>
class ScaledFamily : public MetricFamily {
 public:
  SymMat3 metric(const Vec3& x, double t) const override {
    return self().scale(t) * self().template initial<double>(x);
  }
  SymMat3 metric_rate(const Vec3& x, double t) const override {
    return self().scale_rate(t) * self().template initial<double>(x);
  }
  MetricJet3 jet3(const Vec3& x, double t) const override {
    Vec3T<Dual3> xd{Seed<Dual3>::var(x[0], 0), Seed<Dual3>::var(x[1], 1),
                    Seed<Dual3>::var(x[2], 2)};
    return scaled(jet3_from_dual(self().template initial<Dual3>(xd)), self().scale(t));
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

class FlatFamily final : public ScaledFamily<FlatFamily> {
 public:
  std::string name() const override { return "flat"; }
  nlohmann::json to_json() const override { return {{"name", name()}}; }
  template <class T>
  Sym3<T> initial(const Vec3T<T>&) const {
    return Sym3<T>::identity();
  }
  double scale(double) const { return 1.0; }
  double scale_rate(double) const { return 0.0; }
};

/// Upper half-space model of constant curvature K0 < 0: g = δ / (|K0| z²).
class HyperbolicHalfspace final : public ScaledFamily<HyperbolicHalfspace> {
 public:
  explicit HyperbolicHalfspace(double K0);
  std::string name() const override { return "hyperbolic_halfspace"; }
  nlohmann::json to_json() const override { return {{"name", name()}, {"K0", K0_}}; }
  double curvature() const { return K0_; }

  template <class T>
  Sym3<T> initial(const Vec3T<T>& x) const {
    T f = T(1.0) / (x[2] * x[2] * std::fabs(K0_));
    return Sym3<T>::diag(f, f, f);
  }
  double scale(double t) const { return hyperbolic_scale(K0_, t); }
  double scale_rate(double t) const { return hyperbolic_scale_rate(K0_, t); }

 private:
  double K0_;
};

/// Gaussian bump exp(-|x-c|²/w²).
template <class T>
T gaussian_bump(const Vec3T<T>& x, const Vec3& c, double w) {
  using std::exp;
  T r2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]) +
         (x[2] - c[2]) * (x[2] - c[2]);
  return exp(r2 * (-1.0 / (w * w)));
}

/// Compactly supported bump (1 - |x-c|²/R²)^6, C⁵ at the edge of its support.
template <class T>
T compact_bump(const Vec3T<T>& x, const Vec3& c, double R) {
  T r2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]) +
         (x[2] - c[2]) * (x[2] - c[2]);
  if (primal(r2) >= R * R) return T(0.0);
  T q = T(1.0) - r2 * (1.0 / (R * R));
  T q2 = q * q;
  return q2 * q2 * q2;
}

/// Half-space chart g = δ/(|K0| z²), or the horospherical chart
/// g = (e^{-2w}(dx² + dy²) + dw²)/|K0| with w = x[2].
enum class HyperbolicChart { Halfspace, Horospherical };
enum class BumpProfile { Gaussian, Compact };

/// Hyperbolic metric with an anisotropic bump in the orthonormal coframe:
/// g = Θ(δ + eps·b(x)·P)Θ with the chart's coframe Θ and a fixed symmetric P.
/// Boundary data is the initial metric scaled by the hyperbolic factor.
class PerturbedHyperbolic final : public ScaledFamily<PerturbedHyperbolic> {
 public:
  PerturbedHyperbolic(double K0, double eps, const Vec3& center, double width,
                      HyperbolicChart chart = HyperbolicChart::Halfspace,
                      BumpProfile profile = BumpProfile::Gaussian);
  std::string name() const override { return "perturbed_hyperbolic"; }
  nlohmann::json to_json() const override;

  static SymMat3 shape();

  template <class T>
  Sym3<T> initial(const Vec3T<T>& x) const {
    using std::exp;
    const SymMat3 P = shape();
    T b = (profile_ == BumpProfile::Gaussian ? gaussian_bump(x, center_, width_)
                                             : compact_bump(x, center_, width_)) *
          eps_;
    const double k = 1.0 / std::sqrt(std::fabs(K0_));
    T th[3];
    if (chart_ == HyperbolicChart::Halfspace) {
      th[0] = th[1] = th[2] = T(k) / x[2];
    } else {
      th[0] = th[1] = exp(x[2] * -1.0) * k;
      th[2] = T(k);
    }
    Sym3<T> g;
    for (int s = 0; s < 6; ++s) {
      auto [i, j] = sym_pair(s);
      g[s] = (b * P[s] + (i == j ? 1.0 : 0.0)) * th[i] * th[j];
    }
    return g;
  }
  double scale(double t) const { return hyperbolic_scale(K0_, t); }
  double scale_rate(double t) const { return hyperbolic_scale_rate(K0_, t); }

 private:
  double K0_, eps_;
  Vec3 center_;
  double width_;
  HyperbolicChart chart_;
  BumpProfile profile_;
};

/// Hyperbolic metric pulled back by φ(x) = x + eta·b(x)·u, a bump deformation
/// that is the identity away from the bump.
class PulledBackHyperbolic final : public ScaledFamily<PulledBackHyperbolic> {
 public:
  PulledBackHyperbolic(double K0, double eta, const Vec3& center, double width);
  std::string name() const override { return "pulled_back_hyperbolic"; }
  nlohmann::json to_json() const override;
  static Vec3 direction() { return {0.8, 0.5, -0.3}; }

  template <class T>
  Sym3<T> initial(const Vec3T<T>& x) const {
    const Vec3 u = direction();
    T b = gaussian_bump(x, center_, width_);
    Vec3T<T> grad_b;
    for (int a = 0; a < 3; ++a) grad_b[a] = b * (x[a] - center_[a]) * (-2.0 / (width_ * width_));
    T z = x[2] + b * (eta_ * u[2]);
    T f = T(1.0) / (z * z * std::fabs(K0_));
    // Dφ_ia = δ_ia + eta u_i ∂_a b ; g_ab = f Σ_i Dφ_ia Dφ_ib
    Mat3<T> J;
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) J(i, a) = grad_b[a] * (eta_ * u[i]) + (i == a ? 1.0 : 0.0);
    Sym3<T> g;
    for (int s = 0; s < 6; ++s) {
      auto [a, c] = sym_pair(s);
      T acc = J(0, a) * J(0, c) + J(1, a) * J(1, c) + J(2, a) * J(2, c);
      g[s] = acc * f;
    }
    return g;
  }
  double scale(double t) const { return hyperbolic_scale(K0_, t); }
  double scale_rate(double t) const { return hyperbolic_scale_rate(K0_, t); }

 private:
  double K0_, eta_;
  Vec3 center_;
  double width_;
};

/// Smooth periodic metric on a box of side lengths L: a synthetic stencil
/// harness only (a flat torus carries no negatively curved metric).
class PeriodicSynthetic final : public ScaledFamily<PeriodicSynthetic> {
 public:
  PeriodicSynthetic(double eps, const Vec3& lengths, const Vec3& origin);
  std::string name() const override { return "periodic_synthetic"; }
  nlohmann::json to_json() const override;

  template <class T>
  Sym3<T> initial(const Vec3T<T>& x) const {
    using std::cos;
    using std::sin;
    constexpr double two_pi = 6.283185307179586;
    Vec3T<T> ph;
    for (int a = 0; a < 3; ++a) ph[a] = (x[a] - origin_[a]) * (two_pi / lengths_[a]);
    Sym3<T> g = Sym3<T>::identity();
    g[0] += sin(ph[0]) * cos(ph[1]) * eps_;
    g[3] += cos(ph[1] + ph[2]) * eps_;
    g[5] += sin(ph[2]) * sin(ph[0]) * eps_;
    g[1] += cos(ph[2]) * (0.5 * eps_);
    g[4] += sin(ph[0] + ph[1]) * (0.3 * eps_);
    return g;
  }
  double scale(double) const { return 1.0; }
  double scale_rate(double) const { return 0.0; }

 private:
  double eps_;
  Vec3 lengths_, origin_;
};

/// Background family plus a small plane wave a·V·cos(<k, x - x0>/delta).
class PlaneWaveFamily final : public MetricFamily {
 public:
  PlaneWaveFamily(FamilyPtr background, const SymMat3& V, const Vec3& k, double delta,
                  double amplitude, const Vec3& x0);
  std::string name() const override { return "plane_wave"; }
  SymMat3 metric(const Vec3& x, double t) const override;
  SymMat3 metric_rate(const Vec3& x, double t) const override;
  MetricJet3 jet3(const Vec3& x, double t) const override;
  nlohmann::json to_json() const override;

 private:
  FamilyPtr background_;
  SymMat3 V_;
  Vec3 k_;
  double delta_, amplitude_;
  Vec3 x0_;
};

/// Builds any family from its JSON description (the "family" object of a
/// snapshot or run config).
FamilyPtr family_from_json(const nlohmann::json& j);

}  // namespace xcf
