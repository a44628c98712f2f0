#pragma once

// Monitor functionals shared by the grid and frame backends. A state is
// reduced to per-node samples; integrals are weighted sums of them.

#include <optional>
#include <string>
#include <vector>

namespace xcf {

struct NodeSample {
  double weight = 0.0;  // √det g times the cell volume
  double det_e = 0.0;
  double tr_e = 0.0;    // Tr opEin
  double trace_cross = 0.0;
  double devil_v2 = 0.0;
  double grad_sqrt_det_e2 = 0.0;
};

struct MonitorRow {
  double t = 0.0;
  double vol = 0.0, intH = 0.0, J = 0.0, I = 0.0;
  double minDetE = 0.0, maxTraceCross = 0.0, devilL2 = 0.0;
  std::optional<double> harnackMin, resDtEin, resDtDetE, dVolResidual;
};

MonitorRow accumulate_monitors(double t, const std::vector<NodeSample>& samples);

/// min over nodes of ∂t√detE − |∇√detE|²_E/√detE + (3/(4t))√detE, with ∂t by
/// centered differences of the neighbouring states. Null at t <= 0.
std::optional<double> harnack_min(double t, double dt, const std::vector<NodeSample>& prev,
                                  const std::vector<NodeSample>& cur,
                                  const std::vector<NodeSample>& next);

/// |centered dVol/dt − intH|.
double dvol_residual(double dt, const MonitorRow& prev, const MonitorRow& cur,
                     const MonitorRow& next);

const char* monitor_csv_header();
std::string monitor_csv_line(const MonitorRow& row);

/// Decimal with 17 significant digits (round-trips IEEE doubles).
std::string format_real(double v);

}  // namespace xcf
