#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acimlab/map_core.hpp"

namespace acimlab::cli {

enum class Command { Classify, MapEval, Density, Sweep, Ratios, Counterexample };
enum class Method { Gora, Ulam, Both };
enum class Format { Csv, Json };

struct RunConfig {
  Command command = Command::Classify;
  WParams params;
  Method method = Method::Gora;
  std::size_t bins = 1u << 14;
  bool align_half = false;
  std::vector<double> a_schedule;  // explicit list, or generated from the range below
  std::optional<double> a_start, a_stop;
  std::size_t a_points = 0;
  bool log_spacing = true;
  std::vector<double> x;  // map-eval points
  int n_max = 5;
  std::string output;  // empty: standard output
  Format format = Format::Csv;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int computation_error = 3;
}  // namespace exit_code

/// Parses flags, merging a --config JSON file underneath them.
/// Throws ParameterError naming the offending field.
RunConfig parse_args(int argc, const char* const* argv);

/// Fills a_schedule from the range fields and checks every field.
void resolve(RunConfig& config);

/// Single-line JSON of the resolved configuration, as written in file headers.
std::string config_json(const RunConfig& config);

/// Executes a resolved configuration. Throws on computation errors.
void run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point returning the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acimlab::cli
