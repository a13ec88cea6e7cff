#include "acimlab/cli.hpp"

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acimlab/error.hpp"
#include "acimlab/experiments.hpp"
#include "acimlab/gora_density.hpp"
#include "acimlab/io.hpp"
#include "acimlab/ulam.hpp"

namespace acimlab::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Command> kCommands{
    {"classify", Command::Classify}, {"map-eval", Command::MapEval},  {"density", Command::Density},
    {"sweep", Command::Sweep},       {"ratios", Command::Ratios},    {"counterexample", Command::Counterexample}};
const std::map<std::string, Method> kMethods{{"gora", Method::Gora}, {"ulam", Method::Ulam}, {"both", Method::Both}};
const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};

template <class E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [k, v] : table) {
    if (v == value) return k;
  }
  return "?";
}

template <class E>
E lookup(const std::map<std::string, E>& table, const std::string& field, const std::string& value) {
  const auto it = table.find(value);
  if (it == table.end()) throw ParameterError(field + ": unknown value '" + value + "'");
  return it->second;
}

template <class T>
T json_field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError("config file field '" + key + "' has the wrong type");
  }
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ParameterError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "command") c.command = lookup(kCommands, key, json_field<std::string>(j, key));
    else if (key == "s1") c.params.s1 = json_field<double>(j, key);
    else if (key == "s2") c.params.s2 = json_field<double>(j, key);
    else if (key == "p") c.params.p = json_field<double>(j, key);
    else if (key == "q") c.params.q = json_field<double>(j, key);
    else if (key == "r") c.params.r = json_field<double>(j, key);
    else if (key == "a") c.params.a = json_field<double>(j, key);
    else if (key == "method") c.method = lookup(kMethods, key, json_field<std::string>(j, key));
    else if (key == "bins") c.bins = json_field<std::size_t>(j, key);
    else if (key == "align_half") c.align_half = json_field<bool>(j, key);
    else if (key == "a_schedule") c.a_schedule = json_field<std::vector<double>>(j, key);
    else if (key == "a_start") c.a_start = json_field<double>(j, key);
    else if (key == "a_stop") c.a_stop = json_field<double>(j, key);
    else if (key == "a_points") c.a_points = json_field<std::size_t>(j, key);
    else if (key == "spacing") c.log_spacing = json_field<std::string>(j, key) != "linear";
    else if (key == "x") c.x = json_field<std::vector<double>>(j, key);
    else if (key == "n_max") c.n_max = json_field<int>(j, key);
    else if (key == "output") c.output = json_field<std::string>(j, key);
    else if (key == "format") c.format = lookup(kFormats, key, json_field<std::string>(j, key));
    else throw ParameterError("config: unknown field '" + key + "'");
  }
}

json num(double x) { return json::parse(io::format_double(x)); }

json num_list(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(num(x));
  return arr;
}

std::string render_density(const RunConfig& c, const PiecewiseConstantDensity& f) {
  const auto cfg = config_json(c);
  return c.format == Format::Csv ? io::density_csv(f, cfg) : io::density_json(f, cfg);
}

PiecewiseConstantDensity ulam_density(const RunConfig& c) {
  const auto m = build_ulam(build_w_map(c.params), c.bins, UlamGrid{0.0, 1.0, c.align_half});
  return normalize(stationary_density(m));
}

std::string render(const RunConfig& c, std::ostream& err) {
  const auto cfg = config_json(c);
  const bool csv = c.format == Format::Csv;
  switch (c.command) {
    case Command::Classify:
      return "case " + to_string(classify_case(c.params.s1, c.params.s2)) + "\n";
    case Command::MapEval: {
      const auto map = build_w_map(c.params);
      if (csv) {
        std::string out = io::csv_header(cfg) + "x,value\n";
        for (double x : c.x) out += io::format_double(x) + "," + io::format_double(map.eval(x)) + "\n";
        return out;
      }
      json rows = json::array();
      for (double x : c.x) rows.push_back({{"x", num(x)}, {"value", num(map.eval(x))}});
      json doc{{"header", {{"artifact", "acimlab"}, {"version", ACIMLAB_VERSION}, {"kind", "map-eval"},
                           {"config", json::parse(cfg)}}},
               {"data", rows}};
      return doc.dump(2) + "\n";
    }
    case Command::Density: {
      if (c.method == Method::Ulam) return render_density(c, ulam_density(c));
      const auto f = normalized_gora_density(c.params);
      if (c.method == Method::Both) {
        err << "l1_distance_to_ulam " << io::format_double(l1_distance(f, ulam_density(c))) << "\n";
      }
      return render_density(c, f);
    }
    case Command::Sweep: {
      const auto rows = sweep(c.params, c.a_schedule);
      for (const auto& r : rows) {
        if (!r.error.empty()) err << "a = " << io::format_double(r.a) << ": " << r.error << "\n";
      }
      return csv ? io::sweep_csv(rows, cfg) : io::sweep_json(rows, cfg);
    }
    case Command::Ratios: {
      const auto rep = asymptotic_ratio_report(c.params, c.a_schedule);
      return csv ? io::ratios_csv(rep, cfg) : io::ratios_json(rep, cfg);
    }
    case Command::Counterexample: {
      const auto rows = counterexample_sequence(c.n_max);
      return csv ? io::counterexample_csv(rows, cfg) : io::counterexample_json(rows, cfg);
    }
  }
  return {};
}

}  // namespace

// Raised for --help and --version; carries the text to print.
struct InfoRequested {
  std::string text;
};

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Invariant densities of W-like interval maps", "acimlab"};
  app.set_version_flag("--version", ACIMLAB_VERSION);

  std::string command, method, format, spacing, config_path;
  double s1 = 0, s2 = 0, p = 0, q = 0, r = 0, a = 0, a_start = 0, a_stop = 0;
  std::size_t bins = 0, a_points = 0;
  int n_max = 0;
  std::vector<double> schedule, xs;
  std::string output;

  app.add_option("command", command, "classify | map-eval | density | sweep | ratios | counterexample")->required();
  auto* o_s1 = app.add_option("--s1", s1, "slope of the left half at the turning point (> 1)");
  auto* o_s2 = app.add_option("--s2", s2, "modulus of the slope of the right half (> 1)");
  auto* o_p = app.add_option("--p", p, "perturbation coefficient of the left slope (> 0)");
  auto* o_q = app.add_option("--q", q, "perturbation coefficient of the right slope (> 0)");
  auto* o_r = app.add_option("--r", r, "lift of the turning point (> 0)");
  auto* o_a = app.add_option("--a", a, "perturbation size (>= 0)");
  auto* o_method = app.add_option("--method", method, "gora | ulam | both");
  auto* o_bins = app.add_option("--bins", bins, "Ulam bin count");
  auto* o_align = app.add_flag("--align-half", "make 1/2 a bin edge");
  auto* o_sched = app.add_option("--a-schedule", schedule, "comma-separated decreasing a values")->delimiter(',');
  auto* o_start = app.add_option("--a-start", a_start, "first a of a generated schedule");
  auto* o_stop = app.add_option("--a-stop", a_stop, "last a of a generated schedule");
  auto* o_points = app.add_option("--a-points", a_points, "number of generated a values");
  auto* o_spacing = app.add_option("--spacing", spacing, "log | linear");
  auto* o_x = app.add_option("--x", xs, "points for map-eval")->delimiter(',');
  auto* o_n = app.add_option("--n-max", n_max, "counterexample length");
  auto* o_out = app.add_option("--output", output, "output file (default: standard output)");
  auto* o_format = app.add_option("--format", format, "csv | json");
  app.add_option("--config", config_path, "JSON file with any of the fields above; flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw InfoRequested{app.help()};
  } catch (const CLI::CallForVersion&) {
    throw InfoRequested{std::string(ACIMLAB_VERSION) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw ParameterError(std::string("command line: ") + e.what());
  }

  RunConfig c;
  if (!config_path.empty()) apply_config_file(c, config_path);
  c.command = lookup(kCommands, "command", command);
  if (o_s1->count()) c.params.s1 = s1;
  if (o_s2->count()) c.params.s2 = s2;
  if (o_p->count()) c.params.p = p;
  if (o_q->count()) c.params.q = q;
  if (o_r->count()) c.params.r = r;
  if (o_a->count()) c.params.a = a;
  if (o_method->count()) c.method = lookup(kMethods, "method", method);
  if (o_bins->count()) c.bins = bins;
  if (o_align->count()) c.align_half = true;
  if (o_sched->count()) c.a_schedule = schedule;
  if (o_start->count()) c.a_start = a_start;
  if (o_stop->count()) c.a_stop = a_stop;
  if (o_points->count()) c.a_points = a_points;
  if (o_spacing->count()) {
    if (spacing != "log" && spacing != "linear") throw ParameterError("spacing: unknown value '" + spacing + "'");
    c.log_spacing = spacing == "log";
  }
  if (o_x->count()) c.x = xs;
  if (o_n->count()) c.n_max = n_max;
  if (o_out->count()) c.output = output;
  if (o_format->count()) c.format = lookup(kFormats, "format", format);
  return c;
}

void resolve(RunConfig& c) {
  const bool range_given = c.a_start || c.a_stop || c.a_points > 0;
  if (range_given) {
    if (!c.a_schedule.empty()) throw ParameterError("a_schedule: give either a list or a range, not both");
    if (!c.a_start || !c.a_stop || c.a_points == 0) {
      throw ParameterError("a_schedule: a range needs a_start, a_stop and a_points");
    }
    c.a_schedule = a_grid(*c.a_start, *c.a_stop, c.a_points, c.log_spacing);
    c.a_start.reset();
    c.a_stop.reset();
    c.a_points = 0;
  }
  if (c.bins < 2) throw ParameterError("bins: must be at least 2");
  switch (c.command) {
    case Command::Sweep:
    case Command::Ratios:
      check_schedule(c.a_schedule);
      for (double a : c.a_schedule) validate(c.params.with_a(a));
      break;
    case Command::Counterexample:
      if (c.n_max < 1) throw ParameterError("n_max: must be at least 1");
      break;
    case Command::MapEval:
      if (c.x.empty()) throw ParameterError("x: map-eval needs at least one point");
      validate(c.params);
      break;
    default:
      validate(c.params);
  }
}

std::string config_json(const RunConfig& c) {
  json j;
  j["command"] = name_of(kCommands, c.command);
  j["s1"] = num(c.params.s1);
  j["s2"] = num(c.params.s2);
  j["p"] = num(c.params.p);
  j["q"] = num(c.params.q);
  j["r"] = num(c.params.r);
  switch (c.command) {
    case Command::Classify:
      break;
    case Command::MapEval:
      j["a"] = num(c.params.a);
      j["x"] = num_list(c.x);
      break;
    case Command::Density:
      j["a"] = num(c.params.a);
      j["method"] = name_of(kMethods, c.method);
      if (c.method != Method::Gora) {
        j["bins"] = c.bins;
        j["align_half"] = c.align_half;
      }
      break;
    case Command::Sweep:
    case Command::Ratios:
      j["a_schedule"] = num_list(c.a_schedule);
      break;
    case Command::Counterexample:
      j = {{"command", "counterexample"}, {"n_max", c.n_max}};
      break;
  }
  j["format"] = name_of(kFormats, c.format);
  return j.dump();
}

void run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (const char* threads = std::getenv("ACIMLAB_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }
  const std::string text = render(c, err);
  if (c.output.empty()) {
    out << text;
  } else {
    io::write_file_atomic(c.output, text);
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_args(argc, argv);
    resolve(c);
  } catch (const InfoRequested& info) {
    out << info.text;
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "acimlab: configuration error: " << e.what() << "\n";
    return exit_code::config_error;
  }
  try {
    run(c, out, err);
  } catch (const std::exception& e) {
    err << "acimlab: " << e.what() << "\n";
    return exit_code::computation_error;
  }
  return exit_code::ok;
}

}  // namespace acimlab::cli
