// Acceptance driver: one PASS/FAIL line per numbered criterion.
//
//   xcflab_acceptance <path to xcflab binary>
//
// Criteria 1-11 come from an in-process `verify all`; criterion 12 re-runs
// `xcflab verify --suite all` as a separate process (with a different worker
// cap) and compares its report byte for byte.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "xcflab/io.hpp"
#include "xcflab/monitors.hpp"
#include "xcflab/verify.hpp"

using namespace xcf;

namespace {

const std::map<int, std::string> kTitles{
    {1, "exact hyperbolic solution"},  {2, "cross-curvature equivalence"}, {3, "Devil/Codazzi identities"},
    {4, "Bianchi-type identity decay"}, {5, "monotonicity of J and I"},     {6, "volume law"},
    {7, "Harnack"},                     {8, "evolution-equation residuals"}, {9, "Minkowski embedding"},
    {10, "GCF and XCF"},                {11, "principal symbols"},           {12, "determinism"},
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string describe(const Check& c) {
  std::ostringstream os;
  os << c.name << " = " << format_real(c.measured);
  if (c.lo && c.hi && *c.lo == *c.hi)
    os << " (expect " << format_real(*c.lo) << ")";
  else {
    if (c.lo) os << (c.strict_lo ? " > " : " >= ") << format_real(*c.lo);
    if (c.hi) os << " <= " << format_real(*c.hi);
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: xcflab_acceptance <xcflab binary>\n";
    return 2;
  }
  const VerifyOptions opt{1.0, 0};
  const std::vector<Check> checks = run_suite("all", opt);
  const std::string report = dump_json(verify_report("all", opt, checks), 2) + "\n";

  std::map<int, std::vector<const Check*>> by;
  for (const Check& c : checks) by[c.criterion].push_back(&c);

  // runtime budgets of criterion 1
  double frame_s = 0.0, grid_s = 0.0;
  for (const Check& c : checks) {
    if (c.name == "hyperbolic_scale_factor_frame") frame_s = c.seconds;
    if (c.name == "hyperbolic_grid_run_completed") grid_s = c.seconds;
  }

  const std::string out = "acceptance_verify_all.json";
  const std::string cmd = "XCFLAB_THREADS=2 \"" + std::string(argv[1]) + "\" verify --suite all --tol-scale 1 --seed 0 > " + out;
  const int rc = std::system(cmd.c_str());
  const std::string again = slurp(out);
  const bool identical = again == report;

  int failed = 0;
  for (int k = 1; k <= 12; ++k) {
    bool pass = true;
    std::string detail;
    if (k == 12) {
      pass = identical;
      detail = identical ? "in-process report and CLI report are byte-identical (" + std::to_string(report.size()) + " bytes)"
                         : "reports differ (CLI exit " + std::to_string(rc) + ")";
    } else {
      for (const Check* c : by[k]) pass = pass && c->pass;
      if (k == 1) {
        const bool fast = frame_s <= 10.0 && grid_s <= 120.0;
        pass = pass && fast;
        detail = "frame run " + format_real(frame_s) + " s, grid run " + format_real(grid_s) + " s";
      }
      if (by[k].empty()) pass = false;
    }
    std::printf("criterion %2d  %s  %s%s%s\n", k, pass ? "PASS" : "FAIL", kTitles.at(k).c_str(),
                detail.empty() ? "" : "  [", detail.empty() ? "" : (detail + "]").c_str());
    if (k != 12)
      for (const Check* c : by[k]) std::printf("      %s %s\n", c->pass ? "ok  " : "FAIL", describe(*c).c_str());
    failed += pass ? 0 : 1;
  }
  if (!by[0].empty()) {
    bool pass = true;
    for (const Check* c : by[0]) pass = pass && c->pass;
    std::printf("module invariants  %s\n", pass ? "PASS" : "FAIL");
    for (const Check* c : by[0]) std::printf("      %s %s\n", c->pass ? "ok  " : "FAIL", describe(*c).c_str());
    failed += pass ? 0 : 1;
  }
  std::printf("%s\n", failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failed ? 1 : 0;
}
