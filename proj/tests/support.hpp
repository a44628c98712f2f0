#pragma once

#include <random>

#include "xcflab/jet.hpp"
#include "xcflab/small_tensor.hpp"

namespace xcf::testing {

inline SymMat3 random_spd(std::mt19937_64& rng, double floor = 0.3) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat3<double> a;
  for (auto& row : a.a)
    for (auto& v : row) v = n(rng);
  SymMat3 s = sym_part(a * transpose(a));
  for (int i = 0; i < 3; ++i) s(i, i) += floor;
  return s;
}

inline SymMat3 random_sym(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  SymMat3 s;
  for (auto& v : s.c) v = n(rng);
  return s;
}

inline MetricJet<double> random_jet(std::mt19937_64& rng) {
  MetricJet<double> j;
  j.g = random_spd(rng);
  for (auto& d : j.dg) d = random_sym(rng, 0.5);
  for (auto& d : j.ddg) d = random_sym(rng, 0.5);
  return j;
}

inline double rel_diff(const SymMat3& a, const SymMat3& b) {
  return max_abs(a - b) / std::max(1e-300, std::max(max_abs(a), max_abs(b)));
}

}  // namespace xcf::testing
