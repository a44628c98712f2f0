#pragma once

// Fixed-size 3D tensor algebra. Everything here is templated on the scalar so
// the same formulas run on doubles and on forward-mode duals.

#include <array>
#include <cmath>
#include <cstddef>

namespace xcf {

template <class T>
using Vec3T = std::array<T, 3>;
using Vec3 = Vec3T<double>;

/// Storage slot of (i,j) in the packed order 11,12,13,22,23,33.
constexpr int sym_index(int i, int j) {
  constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return table[i][j];
}

/// Row/column of packed slot s.
constexpr std::array<int, 2> sym_pair(int s) {
  constexpr int rows[6] = {0, 0, 0, 1, 1, 2};
  constexpr int cols[6] = {0, 1, 2, 1, 2, 2};
  return {rows[s], cols[s]};
}

/// Symmetric 3x3 matrix, six stored entries.
template <class T>
struct Sym3 {
  std::array<T, 6> c{};

  T& operator()(int i, int j) { return c[sym_index(i, j)]; }
  const T& operator()(int i, int j) const { return c[sym_index(i, j)]; }
  T& operator[](int s) { return c[s]; }
  const T& operator[](int s) const { return c[s]; }

  static Sym3 identity() {
    Sym3 r;
    r.c = {T(1), T(0), T(0), T(1), T(0), T(1)};
    return r;
  }
  static Sym3 diag(T a, T b, T d) {
    Sym3 r;
    r.c = {a, T(0), T(0), b, T(0), d};
    return r;
  }

  Sym3& operator+=(const Sym3& o) {
    for (int s = 0; s < 6; ++s) c[s] += o.c[s];
    return *this;
  }
  Sym3& operator-=(const Sym3& o) {
    for (int s = 0; s < 6; ++s) c[s] -= o.c[s];
    return *this;
  }
  Sym3& operator*=(const T& a) {
    for (auto& v : c) v *= a;
    return *this;
  }
};

template <class T>
Sym3<T> operator+(Sym3<T> a, const Sym3<T>& b) { return a += b; }
template <class T>
Sym3<T> operator-(Sym3<T> a, const Sym3<T>& b) { return a -= b; }
template <class T>
Sym3<T> operator*(const T& s, Sym3<T> a) { return a *= s; }
template <class T>
Sym3<T> operator*(Sym3<T> a, const T& s) { return a *= s; }

using SymMat3 = Sym3<double>;

/// General 3x3 matrix, row-major.
template <class T>
struct Mat3 {
  std::array<std::array<T, 3>, 3> a{};

  T& operator()(int i, int j) { return a[i][j]; }
  const T& operator()(int i, int j) const { return a[i][j]; }

  static Mat3 identity() {
    Mat3 r;
    for (int i = 0; i < 3; ++i) r.a[i][i] = T(1);
    return r;
  }
  static Mat3 from_sym(const Sym3<T>& s) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = s(i, j);
    return r;
  }
};

/// Symmetric part of a general matrix.
template <class T>
Sym3<T> sym_part(const Mat3<T>& m) {
  Sym3<T> r;
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = sym_pair(s);
    r[s] = T(0.5) * (m(i, j) + m(j, i));
  }
  return r;
}

template <class T>
Mat3<T> operator*(const Mat3<T>& x, const Mat3<T>& y) {
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T acc = x(i, 0) * y(0, j);
      acc += x(i, 1) * y(1, j);
      acc += x(i, 2) * y(2, j);
      r(i, j) = acc;
    }
  return r;
}

template <class T>
Mat3<T> operator+(Mat3<T> x, const Mat3<T>& y) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) += y(i, j);
  return x;
}

template <class T>
Mat3<T> operator-(Mat3<T> x, const Mat3<T>& y) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) -= y(i, j);
  return x;
}

template <class T>
Mat3<T> operator*(const T& s, Mat3<T> x) {
  for (auto& row : x.a)
    for (auto& v : row) v *= s;
  return x;
}

template <class T>
Mat3<T> transpose(const Mat3<T>& m) {
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
  return r;
}

template <class T>
T trace(const Mat3<T>& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

template <class T>
T det(const Mat3<T>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

template <class T>
T det(const Sym3<T>& s) {
  return s[0] * (s[3] * s[5] - s[4] * s[4]) - s[1] * (s[1] * s[5] - s[4] * s[2]) +
         s[2] * (s[1] * s[4] - s[3] * s[2]);
}

/// Classical adjugate (transpose of the cofactor matrix); A·adj(A) = det(A)·I.
template <class T>
Mat3<T> adjugate(const Mat3<T>& m) {
  Mat3<T> r;
  r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return r;
}

template <class T>
Sym3<T> adjugate(const Sym3<T>& s) {
  Sym3<T> r;
  r[0] = s[3] * s[5] - s[4] * s[4];
  r[1] = s[2] * s[4] - s[1] * s[5];
  r[2] = s[1] * s[4] - s[2] * s[3];
  r[3] = s[0] * s[5] - s[2] * s[2];
  r[4] = s[1] * s[2] - s[0] * s[4];
  r[5] = s[0] * s[3] - s[1] * s[1];
  return r;
}

template <class T>
Sym3<T> inverse(const Sym3<T>& s) {
  Sym3<T> r = adjugate(s);
  T inv_det = T(1) / det(s);
  for (auto& v : r.c) v *= inv_det;
  return r;
}

template <class T>
Mat3<T> inverse(const Mat3<T>& m) {
  return (T(1) / det(m)) * adjugate(m);
}

/// a·S·b for symmetric S, with a and b full matrices: returns Aᵀ S B pattern
/// specialised to symmetric output A S A (used for index raising/lowering).
template <class T>
Sym3<T> congruence(const Sym3<T>& a, const Sym3<T>& s) {
  // (a s a)_ij = a_ik s_kl a_lj
  Mat3<T> am = Mat3<T>::from_sym(a), sm = Mat3<T>::from_sym(s);
  Mat3<T> p = am * sm * am;
  return sym_part(p);
}

/// Contraction A_ij B^ij of two symmetric matrices.
template <class T>
T contract(const Sym3<T>& a, const Sym3<T>& b) {
  return a[0] * b[0] + a[3] * b[3] + a[5] * b[5] + T(2) * (a[1] * b[1] + a[2] * b[2] + a[4] * b[4]);
}

template <class T>
T quad(const Sym3<T>& s, const Vec3T<T>& v) {
  T acc = T(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += s(i, j) * v[i] * v[j];
  return acc;
}

template <class T>
Vec3T<T> apply(const Sym3<T>& s, const Vec3T<T>& v) {
  Vec3T<T> r{};
  for (int i = 0; i < 3; ++i) r[i] = s(i, 0) * v[0] + s(i, 1) * v[1] + s(i, 2) * v[2];
  return r;
}

template <class T>
Vec3T<T> apply(const Mat3<T>& m, const Vec3T<T>& v) {
  Vec3T<T> r{};
  for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
  return r;
}

inline double max_abs(const SymMat3& s) {
  double m = 0.0;
  for (double v : s.c) m = std::fmax(m, std::fabs(v));
  return m;
}

inline double max_abs(const Mat3<double>& s) {
  double m = 0.0;
  for (const auto& row : s.a)
    for (double v : row) m = std::fmax(m, std::fabs(v));
  return m;
}

/// True when all three leading principal minors are positive.
inline bool is_spd(const SymMat3& s) {
  return s[0] > 0.0 && s[0] * s[3] - s[1] * s[1] > 0.0 && det(s) > 0.0;
}

/// Rank-3 array with all indices in 0..2, flattened as [a][b][c].
template <class T>
using Tensor3 = std::array<T, 27>;

constexpr int t3(int a, int b, int c) { return (a * 3 + b) * 3 + c; }

/// Rank-4 array flattened as [a][b][c][d].
template <class T>
using Tensor4 = std::array<T, 81>;

constexpr int t4(int a, int b, int c, int d) { return ((a * 3 + b) * 3 + c) * 3 + d; }

}  // namespace xcf
