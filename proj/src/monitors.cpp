#include "xcflab/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "xcflab/error.hpp"

namespace xcf {

MonitorRow accumulate_monitors(double t, const std::vector<NodeSample>& samples) {
  MonitorRow r;
  r.t = t;
  r.minDetE = std::numeric_limits<double>::infinity();
  r.maxTraceCross = -std::numeric_limits<double>::infinity();
  for (const NodeSample& s : samples) {
    const double sd = std::sqrt(std::max(s.det_e, 0.0));
    r.vol += s.weight;
    r.intH += s.trace_cross * s.weight;
    r.J += (s.tr_e / 3.0 - std::cbrt(s.det_e)) * s.weight;
    r.I += sd * s.weight;
    r.devilL2 += s.devil_v2 * sd * s.weight;
    r.minDetE = std::min(r.minDetE, s.det_e);
    r.maxTraceCross = std::max(r.maxTraceCross, s.trace_cross);
  }
  return r;
}

std::optional<double> harnack_min(double t, double dt, const std::vector<NodeSample>& prev,
                                  const std::vector<NodeSample>& cur,
                                  const std::vector<NodeSample>& next) {
  if (!(t > 0.0)) return std::nullopt;
  if (prev.size() != cur.size() || next.size() != cur.size())
    throw Error(ErrorCode::MismatchedGrids, "harnack samples differ in size");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < cur.size(); ++n) {
    if (!(cur[n].det_e > 0.0)) continue;
    const double s = std::sqrt(cur[n].det_e);
    const double ds = (std::sqrt(std::max(next[n].det_e, 0.0)) -
                       std::sqrt(std::max(prev[n].det_e, 0.0))) /
                      (2.0 * dt);
    m = std::min(m, ds - cur[n].grad_sqrt_det_e2 / s + 0.75 / t * s);
  }
  if (!std::isfinite(m)) return std::nullopt;
  return m;
}

double dvol_residual(double dt, const MonitorRow& prev, const MonitorRow& cur,
                     const MonitorRow& next) {
  return std::fabs((next.vol - prev.vol) / (2.0 * dt) - cur.intH);
}

const char* monitor_csv_header() {
  return "t,vol,intH,J,I,minDetE,maxTraceCross,devilL2,harnackMin,resDtEin,resDtDetE,dVolResidual";
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string monitor_csv_line(const MonitorRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  std::string s = format_real(r.t);
  for (double v : {r.vol, r.intH, r.J, r.I, r.minDetE, r.maxTraceCross, r.devilL2})
    s += "," + format_real(v);
  for (const auto* v : {&r.harnackMin, &r.resDtEin, &r.resDtDetE, &r.dVolResidual})
    s += "," + opt(*v);
  return s;
}

}  // namespace xcf
