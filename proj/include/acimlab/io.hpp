#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "acimlab/density.hpp"
#include "acimlab/experiments.hpp"

namespace acimlab::io {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);
/// Inverse of format_double; throws ParameterError on malformed text.
double parse_double(std::string_view text);

Case parse_case(std::string_view text);

/// Leading comment lines: artifact name and version, then the resolved config
/// as a single-line JSON object.
std::string csv_header(std::string_view config_json);

std::string density_csv(const PiecewiseConstantDensity& f, std::string_view config_json);
std::string sweep_csv(const std::vector<SweepRecord>& rows, std::string_view config_json);
std::string counterexample_csv(const std::vector<CounterexampleRow>& rows, std::string_view config_json);
std::string ratios_csv(const RatioReport& report, std::string_view config_json);

std::string density_json(const PiecewiseConstantDensity& f, std::string_view config_json);
std::string sweep_json(const std::vector<SweepRecord>& rows, std::string_view config_json);
std::string counterexample_json(const std::vector<CounterexampleRow>& rows, std::string_view config_json);
std::string ratios_json(const RatioReport& report, std::string_view config_json);

/// Readers skip lines starting with '#' and check the column header.
PiecewiseConstantDensity read_density_csv(std::istream& in);
std::vector<SweepRecord> read_sweep_csv(std::istream& in);
std::vector<CounterexampleRow> read_counterexample_csv(std::istream& in);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace acimlab::io
