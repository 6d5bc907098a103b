#pragma once

// Scenario runner behind legendre-bench. Commands return their outputs in
// memory; write_outcome puts them on disk.

#include "legendre/corner.hpp"
#include "legendre/distribution.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace legendre::app {

inline constexpr const char* kToolName = "legendre-bench";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kInconclusive = 4 };

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::map<std::string, double> tol_overrides;
  unsigned threads = 0;
};

struct Tolerances {
  double quad_rel = 1e-11;
  double quad_abs = 0.0;
  double membership = 1e-8;
  double interp = 1e-12;
  double lemma = 1e-8;
  json to_json() const;
};

struct Outcome {
  int exit_code = kOk;
  json report;      // always present, carries schema_version
  std::string csv;  // eval only
  std::string message;
};

// JSON with // and /* */ comments.
json parse_config_text(const std::string& text);
json load_config_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

// Parsed pieces, exposed for tests.
CPolynomial parse_cpolynomial(const json& j, std::size_t nvars, const std::string& where);
Polynomial parse_polynomial(const json& j, std::size_t nvars, const std::string& where);
SchwartzAmplitude parse_amplitude(const json& j, const std::string& where);
std::vector<double> parse_axis(const json& j, const std::string& where);
ModelDistribution build_model(const json& cfg);
std::vector<XPoint> build_grid(const json& cfg, int n);
Tolerances effective_tolerances(const json& cfg, const RunOptions& opt);

Outcome cmd_eval(const json& cfg, const RunOptions& opt);
Outcome cmd_decompose(const json& cfg, const RunOptions& opt);
Outcome cmd_classify(const json& cfg, const RunOptions& opt);
Outcome cmd_witness(const json& cfg, const RunOptions& opt);
Outcome cmd_lemma_check(const json& cfg, const RunOptions& opt);

// Dispatch with error mapping: ConfigError, DimensionError, PreconditionError
// and parse errors give 2, ConvergenceError gives 3.
Outcome run_command(const std::string& command, const json& cfg, const RunOptions& opt);

// Writes <out>/<command>.json and, for eval, <out>/eval.csv.
void write_outcome(const std::string& command, const Outcome& o, const std::string& out_dir);

// Parses KEY=VALUE.
std::pair<std::string, double> parse_tol_override(const std::string& kv);

}  // namespace legendre::app
