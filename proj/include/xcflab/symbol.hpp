#pragma once

// Principal symbols on symmetric 2-tensors, as 6x6 matrices in the packed basis
// e11, e12, e13, e22, e23, e33 (off-diagonal basis tensors have 1 in both slots).
// Second derivatives ∂a∂b are replaced by ξa ξb.

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <vector>

#include "json.hpp"
#include "xcflab/families.hpp"
#include "xcflab/small_tensor.hpp"

namespace xcf {

struct SymbolContext {
  SymMat3 g;
  SymMat3 E;  // covariant Einstein tensor; enters through E^{ij} = g^{ia} E_ab g^{bj}
  Vec3 xi{};
};

struct SymbolMatrix {
  Eigen::Matrix<double, 6, 6> M;
  SymbolContext context;

  SymMat3 apply(const SymMat3& V) const;
};

/// Sym(α⊗β) = ½(α⊗β + β⊗α).
SymMat3 sym_outer(const Vec3& a, const Vec3& b);

/// |ξ|²_E V − 2 Sym ξ⊗V(♯_E ξ,·) + Tr_E V ξ⊗ξ. Throws ZeroCovector.
SymbolMatrix symbol_xcf(const SymMat3& g, const SymMat3& E, const Vec3& xi);
/// |ξ|²_E V + 2 Sym ξ⊗V(♯ξ − ♯_E ξ,·) + (Tr_E V − Tr_g V) ξ⊗ξ.
SymbolMatrix symbol_deturck(const SymMat3& g, const SymMat3& E, const Vec3& xi);

struct RicciSymbols {
  SymbolMatrix raw;      // of −2Ric
  SymbolMatrix deturck;  // |ξ|²_g Identity
};
RicciSymbols symbol_ricci(const SymMat3& g, const Vec3& xi);

/// Singular values below rel·σ_max count as kernel.
int kernel_dimension(const SymbolMatrix& s, double rel = 1e-10);
double min_real_eigenvalue(const SymbolMatrix& s);

/// Estimate of σ_ξ[2 adjEin](V) at x on the family's metric at time t. The
/// plane wave u = V cos(<ξ, x' − x>/δ) is added with amplitudes ±a, δ = a^{1/3};
/// the symmetric amplitude quotient times −δ² is Richardson-extrapolated in δ².
/// Throws NonConvergentExtraction if amplitudes do not strictly decrease, there
/// are fewer than three, or the last two extrapolants differ by more than
/// `settle` relative to the column scale.
struct FdColumn {
  SymMat3 column;
  std::vector<SymMat3> raw;           // −δ² quotient per amplitude
  std::vector<SymMat3> extrapolated;  // Richardson between consecutive amplitudes
  double change = 0.0;                // last extrapolant difference, relative
};
FdColumn symbol_fd_oracle(const MetricFamily& family, const Vec3& x, double t, const Vec3& xi,
                          const SymMat3& V, const std::vector<double>& amplitudes, double settle = 1e-3);

/// Seeded scan: raw XCF kernel dimension and DeTurck ellipticity on random SPD
/// (g, E) with ξ on the unit g-sphere. The reported minimum real part is
/// normalized by |ξ|²_E.
struct SymbolScan {
  int samples = 0;
  std::uint64_t seed = 0;
  std::map<int, int> kernel_histogram;
  double deturck_min_real_part = 0.0;
  std::vector<SymbolContext> failures;
};
SymbolContext random_symbol_context(std::uint64_t seed, std::uint64_t index);
/// Kernel dimensions are taken on the first `kernel_samples` contexts (all if 0).
SymbolScan symbol_scan(int samples, std::uint64_t seed, int kernel_samples = 0);
nlohmann::json symbol_report(const SymbolScan& s);

}  // namespace xcf
