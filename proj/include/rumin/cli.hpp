#pragma once

// Command-line front end shared by the rumin tool and its tests.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace rumin::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

struct RunConfig {
  std::string command;
  std::string model = "s3";
  int p = 1;
  int character = 0;
  int max_weight = 4;
  std::string op = "delta-rn";
  std::vector<int> degrees;  // empty: all degrees
  std::string suite = "all";
  std::vector<double> t_samples = {0.1, 1.0, 10.0};
  std::vector<double> s_grid = {2.0, 3.0, 4.0};
  std::optional<double> tol;
  std::string format;  // empty: csv for spectrum, json otherwise
  std::string out;     // empty: stdout

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Flags override the --config file, which overrides the defaults. Throws
/// std::invalid_argument on malformed input; returns nullopt after --help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);
/// Applies the keys of a flat JSON object to cfg.
void apply_config(RunConfig& cfg, const nlohmann::json& j);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_torsion(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses, dispatches and maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Deterministic JSON text: sorted keys, two-space indent, floating values
/// with 17 significant digits, non-finite values as null.
std::string dump_json(const nlohmann::json& j);

}  // namespace rumin::cli
