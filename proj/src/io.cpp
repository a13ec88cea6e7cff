#include "acimlab/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "acimlab/error.hpp"

namespace acimlab::io {

namespace {

using nlohmann::json;

const char* const kDensityColumns = "cell_left,cell_right,value";
const char* const kSweepColumns =
    "a,case,d_to_limit,C1_over_a,C2_over_a,C3_over_a,B_over_a,sup_density,essinf_density,k";
const char* const kCounterexampleColumns = "n,r_n,a_n,d_n,essinf_n";
const char* const kRatioColumns =
    "a,C1_over_a,C2_over_a,C3_over_a,B_over_a,C1_target,C2_target,C3_target,B_target";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Data lines after the column header, with comment lines dropped.
std::vector<std::vector<std::string>> read_table(std::istream& in, const char* columns) {
  std::string line;
  bool have_header = false;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      if (line != columns) throw ParameterError("csv: expected header '" + std::string(columns) + "', got '" + line + "'");
      have_header = true;
      continue;
    }
    rows.push_back(split(line));
  }
  if (!have_header) throw ParameterError("csv: missing header line");
  return rows;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError("csv: malformed integer '" + std::string(text) + "'");
  }
  return v;
}

json parse_config(std::string_view config_json) {
  if (config_json.empty()) return json::object();
  return json::parse(config_json);
}

// JSON numbers go through format_double so both formats agree digit for digit.
json number(double x) { return json::parse(format_double(x)); }

std::string dump_document(const char* artifact, std::string_view config_json, json data) {
  json doc;
  doc["header"] = {{"artifact", "acimlab"}, {"version", ACIMLAB_VERSION}, {"kind", artifact},
                   {"config", parse_config(config_json)}};
  doc["data"] = std::move(data);
  return doc.dump(2) + "\n";
}

void join(std::ostringstream& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << f;
    first = false;
  }
  out << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return {buf, ptr};
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParameterError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

Case parse_case(std::string_view text) {
  if (text == "I") return Case::I;
  if (text == "II") return Case::II;
  if (text == "III") return Case::III;
  throw ParameterError("unknown case label '" + std::string(text) + "'");
}

std::string csv_header(std::string_view config_json) {
  std::string out = "# acimlab " ACIMLAB_VERSION "\n# config: ";
  out += parse_config(config_json).dump();
  out += '\n';
  return out;
}

std::string density_csv(const PiecewiseConstantDensity& f, std::string_view config_json) {
  std::ostringstream out;
  out << csv_header(config_json) << kDensityColumns << '\n';
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    join(out, {format_double(f.cell_left(i)), format_double(f.cell_right(i)), format_double(f.values()[i])});
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRecord>& rows, std::string_view config_json) {
  std::ostringstream out;
  out << csv_header(config_json) << kSweepColumns << '\n';
  for (const auto& r : rows) {
    if (!r.error.empty()) out << "# a = " << format_double(r.a) << " failed: " << r.error << '\n';
    std::array<std::string, 4> c;
    if (r.C_over_a) {
      for (std::size_t i = 0; i < 4; ++i) c[i] = format_double((*r.C_over_a)[i]);
    }
    const bool ok = r.error.empty();
    join(out, {format_double(r.a), to_string(r.regime), ok ? format_double(r.d_to_limit) : "", c[0], c[1], c[2], c[3],
               ok ? format_double(r.sup_density) : "", ok ? format_double(r.essinf_density) : "",
               r.k > 0 ? std::to_string(r.k) : ""});
  }
  return out.str();
}

std::string counterexample_csv(const std::vector<CounterexampleRow>& rows, std::string_view config_json) {
  std::ostringstream out;
  out << csv_header(config_json) << kCounterexampleColumns << '\n';
  for (const auto& r : rows) {
    join(out, {std::to_string(r.n), format_double(r.r_n), format_double(r.a_n), format_double(r.d_n),
               format_double(r.essinf_n)});
  }
  return out.str();
}

std::string ratios_csv(const RatioReport& report, std::string_view config_json) {
  std::ostringstream out;
  out << csv_header(config_json) << kRatioColumns << '\n';
  for (const auto& r : report.rows) {
    join(out, {format_double(r.a), format_double(r.ratios[0]), format_double(r.ratios[1]), format_double(r.ratios[2]),
               format_double(r.ratios[3]), format_double(r.targets[0]), format_double(r.targets[1]),
               format_double(r.targets[2]), format_double(r.targets[3])});
  }
  return out.str();
}

std::string density_json(const PiecewiseConstantDensity& f, std::string_view config_json) {
  json cells = json::array();
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    cells.push_back({{"cell_left", number(f.cell_left(i))},
                     {"cell_right", number(f.cell_right(i))},
                     {"value", number(f.values()[i])}});
  }
  return dump_document("density", config_json, std::move(cells));
}

std::string sweep_json(const std::vector<SweepRecord>& rows, std::string_view config_json) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"a", number(r.a)}, {"case", to_string(r.regime)}};
    if (r.error.empty()) {
      j["d_to_limit"] = number(r.d_to_limit);
      j["sup_density"] = number(r.sup_density);
      j["essinf_density"] = number(r.essinf_density);
    } else {
      j["error"] = r.error;
    }
    if (r.C_over_a) {
      const auto& c = *r.C_over_a;
      j["C1_over_a"] = number(c[0]);
      j["C2_over_a"] = number(c[1]);
      j["C3_over_a"] = number(c[2]);
      j["B_over_a"] = number(c[3]);
    }
    if (r.k > 0) j["k"] = r.k;
    arr.push_back(std::move(j));
  }
  return dump_document("sweep", config_json, std::move(arr));
}

std::string counterexample_json(const std::vector<CounterexampleRow>& rows, std::string_view config_json) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n}, {"r_n", number(r.r_n)}, {"a_n", number(r.a_n)}, {"d_n", number(r.d_n)},
                   {"essinf_n", number(r.essinf_n)}});
  }
  return dump_document("counterexample", config_json, std::move(arr));
}

std::string ratios_json(const RatioReport& report, std::string_view config_json) {
  static const char* const names[4] = {"C1", "C2", "C3", "B"};
  json arr = json::array();
  for (const auto& r : report.rows) {
    json j = {{"a", number(r.a)}};
    for (std::size_t i = 0; i < 4; ++i) {
      j[std::string(names[i]) + "_over_a"] = number(r.ratios[i]);
      j[std::string(names[i]) + "_target"] = number(r.targets[i]);
    }
    arr.push_back(std::move(j));
  }
  json monotone = json::object();
  for (std::size_t i = 0; i < 4; ++i) monotone[names[i]] = report.monotone[i];
  return dump_document("ratios", config_json, {{"rows", std::move(arr)}, {"monotone", std::move(monotone)}});
}

PiecewiseConstantDensity read_density_csv(std::istream& in) {
  const auto rows = read_table(in, kDensityColumns);
  if (rows.empty()) throw ParameterError("csv: density has no cells");
  std::vector<double> bps, vals;
  for (const auto& r : rows) {
    if (r.size() != 3) throw ParameterError("csv: density rows need 3 fields");
    const double left = parse_double(r[0]);
    if (!bps.empty() && bps.back() != left) throw ParameterError("csv: density cells are not contiguous");
    if (bps.empty()) bps.push_back(left);
    bps.push_back(parse_double(r[1]));
    vals.push_back(parse_double(r[2]));
  }
  return {std::move(bps), std::move(vals)};
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::vector<SweepRecord> out;
  for (const auto& r : read_table(in, kSweepColumns)) {
    if (r.size() != 10) throw ParameterError("csv: sweep rows need 10 fields");
    SweepRecord rec;
    rec.a = parse_double(r[0]);
    rec.regime = parse_case(r[1]);
    if (r[2].empty()) {
      rec.error = "failed";
    } else {
      rec.d_to_limit = parse_double(r[2]);
      rec.sup_density = parse_double(r[7]);
      rec.essinf_density = parse_double(r[8]);
    }
    if (!r[3].empty()) {
      rec.C_over_a = std::array<double, 4>{parse_double(r[3]), parse_double(r[4]), parse_double(r[5]), parse_double(r[6])};
    }
    if (!r[9].empty()) rec.k = parse_int(r[9]);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CounterexampleRow> read_counterexample_csv(std::istream& in) {
  std::vector<CounterexampleRow> out;
  for (const auto& r : read_table(in, kCounterexampleColumns)) {
    if (r.size() != 5) throw ParameterError("csv: counterexample rows need 5 fields");
    out.push_back({parse_int(r[0]), parse_double(r[1]), parse_double(r[2]), parse_double(r[3]), parse_double(r[4])});
  }
  return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace acimlab::io
