// Python bindings. Structured results cross the boundary as JSON text; the
// package wrapper turns them into dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xcflab/curvature.hpp"
#include "xcflab/error.hpp"
#include "xcflab/frame.hpp"
#include "xcflab/io.hpp"
#include "xcflab/runner.hpp"
#include "xcflab/symbol.hpp"
#include "xcflab/verify.hpp"

namespace py = pybind11;
using namespace xcf;

namespace {

using Mat3d = Eigen::Matrix3d;

SymMat3 to_sym(const Mat3d& m) {
  if (!m.isApprox(m.transpose(), 1e-14)) throw Error(ErrorCode::ConfigError, "matrix must be symmetric");
  SymMat3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) s(i, j) = m(i, j);
  return s;
}

Mat3d to_eigen(const SymMat3& s) {
  Mat3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = s(i, j);
  return m;
}

RunConfig config_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

py::dict point_dict(const CurvaturePoint& p) {
  py::dict d;
  d["g"] = to_eigen(p.g);
  d["ric"] = to_eigen(p.ric);
  d["sc"] = p.sc;
  d["ein"] = to_eigen(p.ein);
  d["lambda"] = std::vector<double>(p.lambda.begin(), p.lambda.end());
  d["adj_ein"] = to_eigen(p.adj_ein);
  d["det_e"] = p.det_e;
  d["trace_cross"] = p.trace_cross;
  d["ein_spd"] = p.ein_spd;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "XCF numerical lab";

  static py::exception<Error> exc(m, "XcfError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  m.def("verify_json", [](const std::string& suite, double tol_scale, std::uint64_t seed) {
    const VerifyOptions opt{tol_scale, seed};
    py::gil_scoped_release release;
    return dump_json(verify_report(suite, opt, run_suite(suite, opt)));
  }, py::arg("suite"), py::arg("tol_scale") = 1.0, py::arg("seed") = 0);

  m.def("run_json", [](const std::string& config) {
    const RunConfig c = config_from_text(config);
    RunOutcome out;
    {
      py::gil_scoped_release release;
      out = execute_run(c);
    }
    return dump_json({{"status", to_string(out.status)},
                      {"status_line", out.status_line},
                      {"stop_time", out.stop_time},
                      {"rows", out.rows}});
  }, py::arg("config"));

  m.def("embed_json", [](const std::string& config) { return dump_json(embed_command(config_from_text(config))); },
        py::arg("config"));
  m.def("curvature_json", [](const std::string& config) { return dump_json(curvature_command(config_from_text(config))); },
        py::arg("config"));

  m.def("symbol_scan_json", [](int samples, std::uint64_t seed) {
    if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be positive");
    py::gil_scoped_release release;
    return dump_json(symbol_report(symbol_scan(samples, seed)));
  }, py::arg("samples"), py::arg("seed"));

  m.def("model_point", [](const Mat3d& g, const Mat3d& ein) { return point_dict(model_point(to_sym(g), to_sym(ein))); },
        py::arg("g"), py::arg("ein"));
  m.def("frame_curvature", [](double a1, double a2, const Mat3d& m0) {
    return point_dict(frame_curvature(solvable_frame(a1, a2, to_sym(m0))));
  }, py::arg("a1"), py::arg("a2"), py::arg("m0"));

  m.def("symbol_xcf", [](const Mat3d& g, const Mat3d& e, const Vec3& xi) {
    return Eigen::MatrixXd(symbol_xcf(to_sym(g), to_sym(e), xi).M);
  }, py::arg("g"), py::arg("E"), py::arg("xi"));
  m.def("symbol_deturck", [](const Mat3d& g, const Mat3d& e, const Vec3& xi) {
    return Eigen::MatrixXd(symbol_deturck(to_sym(g), to_sym(e), xi).M);
  }, py::arg("g"), py::arg("E"), py::arg("xi"));
  m.def("kernel_dimension", [](const Mat3d& g, const Mat3d& e, const Vec3& xi) {
    return kernel_dimension(symbol_xcf(to_sym(g), to_sym(e), xi));
  }, py::arg("g"), py::arg("E"), py::arg("xi"));
}
