#pragma once

// Forward-mode dual numbers over three directions. Nesting Dual<Dual<Dual<double>>>
// yields exact derivatives through third order, which is how the closed-form
// metric families produce their jets.

#include <array>
#include <cmath>

namespace xcf {

template <class T>
struct Dual {
  T v{};
  std::array<T, 3> d{};

  Dual() = default;
  Dual(double x) : v(x) {}  // NOLINT(google-explicit-constructor)
  Dual(const T& value, const std::array<T, 3>& grad) : v(value), d(grad) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < 3; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < 3; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < 3; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    T inv = T(1) / o.v;
    T q = v * inv;
    for (int i = 0; i < 3; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
};

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator+(Dual<T> a, double b) { return a += Dual<T>(b); }
template <class T> Dual<T> operator-(Dual<T> a, double b) { return a -= Dual<T>(b); }
template <class T> Dual<T> operator*(Dual<T> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <class T> Dual<T> operator/(Dual<T> a, double b) { return a * (1.0 / b); }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return b * a; }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return a * -1.0; }

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  Dual<T> r;
  r.v = e;
  for (int i = 0; i < 3; ++i) r.d[i] = e * x.d[i];
  return r;
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  Dual<T> r;
  r.v = log(x.v);
  T inv = T(1) / x.v;
  for (int i = 0; i < 3; ++i) r.d[i] = x.d[i] * inv;
  return r;
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  Dual<T> r;
  r.v = sqrt(x.v);
  T inv = T(0.5) / r.v;
  for (int i = 0; i < 3; ++i) r.d[i] = x.d[i] * inv;
  return r;
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  Dual<T> r;
  r.v = sin(x.v);
  T c = cos(x.v);
  for (int i = 0; i < 3; ++i) r.d[i] = c * x.d[i];
  return r;
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  Dual<T> r;
  r.v = cos(x.v);
  T s = -sin(x.v);
  for (int i = 0; i < 3; ++i) r.d[i] = s * x.d[i];
  return r;
}

/// Value of the innermost scalar.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) { return primal(x.v); }

/// Independent variable `value` seeded in direction `axis` at every nesting level.
template <class T>
struct Seed;

template <>
struct Seed<double> {
  static double var(double value, int) { return value; }
  static double constant(double value) { return value; }
};

template <class T>
struct Seed<Dual<T>> {
  static Dual<T> var(double value, int axis) {
    Dual<T> r;
    r.v = Seed<T>::var(value, axis);
    for (int i = 0; i < 3; ++i) r.d[i] = Seed<T>::constant(i == axis ? 1.0 : 0.0);
    return r;
  }
  static Dual<T> constant(double value) { return Dual<T>(value); }
};

using Dual1 = Dual<double>;
using Dual3 = Dual<Dual<Dual<double>>>;

}  // namespace xcf
