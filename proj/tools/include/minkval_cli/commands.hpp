#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace minkval::cli {

enum ExitCode : int { kPass = 0, kTheoremFail = 1, kUsage = 2, kNumeric = 3 };

enum class Format { Json, Csv };

/// Settings shared by all subcommands. Every field can come from the JSON
/// config document (same key names as the long flags) and be overridden on
/// the command line.
struct ExperimentConfig {
  int dim = 4;
  int degree = 2;  ///< valuation degree i
  nlohmann::json generator = {{"kind", "segment"}};
  nlohmann::json body;  ///< null selects the command's default body
  int kmax = 128;
  int steps = 50;
  int m = 1;
  int m_max = 1;
  double eps = 1e-4;
  std::uint64_t seed = 1;
  std::string out;
  Format format = Format::Json;
  int k = 2;  ///< Legendre degree for intervals and perturbation direction for iterate
  std::string mode = "phi2";
  std::vector<double> amplitudes;
  int samples = 20;
  int rows = 16;
  int threads = 0;  ///< 0: hardware concurrency
};

/// Applies the keys of a config document to cfg. Throws std::invalid_argument
/// on unknown keys or bad values.
void apply_config(ExperimentConfig& cfg, const nlohmann::json& doc);

struct CommandOutput {
  int exit_code = kPass;
  std::string text;
};

CommandOutput cmd_multipliers(const ExperimentConfig& cfg);
CommandOutput cmd_gap(const ExperimentConfig& cfg);
CommandOutput cmd_iterate(const ExperimentConfig& cfg);
CommandOutput cmd_petty(const ExperimentConfig& cfg);
CommandOutput cmd_intervals(const ExperimentConfig& cfg);

/// Dispatches by subcommand name; maps exceptions to exit codes 2 and 3.
CommandOutput run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minkval::cli
