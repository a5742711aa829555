#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spraykit/expr.hpp"
#include "spraykit/sampling.hpp"

namespace spraykit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Candidate {
  std::string name;
  std::string text;
  ScalarModel F;
  /// "pass", "fail" or empty.
  std::string expect;
};

struct Tolerances {
  double residual = 1e-8;
  double hessian = 1e-8;
  double classify = 1e-8;
  double homogeneity = 1e-9;
};

struct RunConfig {
  std::string digest;  // SHA-256 of the config text
  std::size_t n = 0;
  std::vector<std::string> spray_text;
  SprayModel spray;
  /// Expected class of every sample for `classify`, when given.
  std::string expect_class;
  std::vector<Candidate> candidates;
  std::vector<std::string> projective_text;
  std::vector<ScalarModel> projective_factors;
  std::size_t sample_count = 200;
  std::uint64_t seed = 1;
  SampleBox box;
  Tolerances tolerances;
};

/// Parses a JSON config; errors carry the line and column or the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

std::string sha256_hex(std::string_view data);

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;       // stdout
  std::string diagnostics;  // stderr
};

CommandResult cmd_symbol_audit(std::size_t n_min, std::size_t n_max, bool json);
CommandResult cmd_classify(const RunConfig& config, std::optional<std::size_t> samples = std::nullopt,
                           std::optional<std::uint64_t> seed = std::nullopt);
CommandResult cmd_check_solution(const RunConfig& config);

struct GeodesicOptions {
  std::vector<double> x0;
  std::vector<double> y0;
  double t_end = 1.0;
  double dt = 1e-3;
  /// Arc length over which the two paths are compared; defaults to the shorter path.
  std::optional<double> arc_length;
  std::size_t resample = 2001;
};

CommandResult cmd_geodesics(const RunConfig& config, const GeodesicOptions& options,
                            const RunConfig* compare = nullptr);

/// Entry point shared by the executable and the tests.
int run(int argc, char** argv, std::string& out, std::string& err);

}  // namespace spraykit::cli
