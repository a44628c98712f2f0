// xcflab command-line front end.
//
//   xcflab run --config <path>
//   xcflab verify --suite <name> --tol-scale <x> [--seed <n>]
//   xcflab symbol --samples <n> --seed <n> --report <path>
//   xcflab embed --config <path> --out <path>
//   xcflab curvature --config <path> --out <path>
//
// Exit codes: 0 ok, 1 verification failure, 2 config/io error, 3 runtime degeneration.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "xcflab/error.hpp"
#include "xcflab/io.hpp"
#include "xcflab/runner.hpp"
#include "xcflab/symbol.hpp"
#include "xcflab/verify.hpp"

using namespace xcf;

namespace {

constexpr int kOk = 0, kVerifyFail = 1, kConfig = 2, kRuntime = 3;

const char* kUsage =
    "usage:\n"
    "  xcflab run --config <path>\n"
    "  xcflab verify --suite <algebraic|convergence|monotonicity|embedding|symbol|all> --tol-scale <x> [--seed <n>]\n"
    "  xcflab symbol --samples <n> --seed <n> --report <path>\n"
    "  xcflab embed --config <path> --out <path>\n"
    "  xcflab curvature --config <path> --out <path>\n";

struct Args {
  std::map<std::string, std::string> flags;

  bool has(const std::string& k) const { return flags.count(k) > 0; }
  const std::string& need(const std::string& k) const {
    auto it = flags.find(k);
    if (it == flags.end()) throw Error(ErrorCode::ConfigError, "missing --" + k);
    return it->second;
  }
};

Args parse_flags(int argc, char** argv, const std::vector<std::string>& allowed) {
  Args a;
  for (int i = 2; i < argc; ++i) {
    std::string k = argv[i];
    if (k.rfind("--", 0) != 0) throw Error(ErrorCode::ConfigError, "unexpected argument " + k);
    k = k.substr(2);
    std::string v;
    if (const auto eq = k.find('='); eq != std::string::npos) {
      v = k.substr(eq + 1);
      k = k.substr(0, eq);
    } else {
      if (i + 1 >= argc) throw Error(ErrorCode::ConfigError, "--" + k + " needs a value");
      v = argv[++i];
    }
    bool known = false;
    for (const auto& name : allowed) known = known || name == k;
    if (!known) throw Error(ErrorCode::ConfigError, "unknown option --" + k);
    if (a.flags.count(k)) throw Error(ErrorCode::ConfigError, "--" + k + " given twice");
    a.flags[k] = v;
  }
  return a;
}

double to_real(const std::string& flag, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::ConfigError, "--" + flag + " expects a number, got " + s);
  return v;
}

std::uint64_t to_count(const std::string& flag, const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || s[0] == '-')
    throw Error(ErrorCode::ConfigError, "--" + flag + " expects a non-negative integer, got " + s);
  return v;
}

int cmd_run(const Args& a) {
  const RunConfig c = load_run_config(a.need("config"));
  const RunOutcome out = execute_run(c);
  std::cout << out.status_line << '\n';
  return out.status == RunStatus::CflStall ? kRuntime : kOk;
}

int cmd_verify(const Args& a) {
  VerifyOptions opt;
  opt.tol_scale = to_real("tol-scale", a.need("tol-scale"));
  if (a.has("seed")) opt.seed = to_count("seed", a.need("seed"));
  const std::string suite = a.need("suite");
  const std::vector<Check> checks = run_suite(suite, opt);
  std::cout << dump_json(verify_report(suite, opt, checks), 2) << '\n';
  return all_pass(checks) ? kOk : kVerifyFail;
}

int cmd_symbol(const Args& a) {
  const std::uint64_t samples = to_count("samples", a.need("samples"));
  if (samples == 0 || samples > 100000000) throw Error(ErrorCode::ConfigError, "--samples must be in [1, 1e8]");
  const SymbolScan s = symbol_scan(static_cast<int>(samples), to_count("seed", a.need("seed")));
  write_text_file(a.need("report"), dump_json(symbol_report(s), 2) + "\n");
  bool ok = s.failures.empty() && s.deturck_min_real_part > 0.0;
  for (const auto& [dim, count] : s.kernel_histogram) ok = ok && dim == 3;
  return ok ? kOk : kVerifyFail;
}

int cmd_json(const Args& a, nlohmann::json (*fn)(const RunConfig&)) {
  const RunConfig c = load_run_config(a.need("config"));
  const std::string out = a.need("out");
  write_text_file(out, dump_json(fn(c), 2) + "\n");
  return kOk;
}

int dispatch(int argc, char** argv) {
  const std::string cmd = argv[1];
  if (cmd == "run") return cmd_run(parse_flags(argc, argv, {"config"}));
  if (cmd == "verify") return cmd_verify(parse_flags(argc, argv, {"suite", "tol-scale", "seed"}));
  if (cmd == "symbol") return cmd_symbol(parse_flags(argc, argv, {"samples", "seed", "report"}));
  if (cmd == "embed") return cmd_json(parse_flags(argc, argv, {"config", "out"}), embed_command);
  if (cmd == "curvature") return cmd_json(parse_flags(argc, argv, {"config", "out"}), curvature_command);
  throw Error(ErrorCode::ConfigError, "unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h") {
    std::fputs(kUsage, argc < 2 ? stderr : stdout);
    return argc < 2 ? kConfig : kOk;
  }
  try {
    return dispatch(argc, argv);
  } catch (const Error& e) {
    std::cerr << "xcflab: " << e.what() << '\n';
    if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::IoError) {
      if (e.code() == ErrorCode::ConfigError && std::string(e.what()).find("unknown command") != std::string::npos)
        std::fputs(kUsage, stderr);
      return kConfig;
    }
    return kRuntime;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "xcflab: ConfigError: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "xcflab: " << e.what() << '\n';
    return kRuntime;
  }
}
