#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "acimlab/cli.hpp"
#include "acimlab/io.hpp"
#include "cli_goldens.hpp"

#include <json.hpp>

using goldens::run;

TEST_CASE("golden outputs") {
  for (const auto& c : goldens::cases()) {
    CAPTURE(c.file);
    const auto r = run(c.args);
    REQUIRE(r.code == 0);
    if (goldens::update_requested()) goldens::write_file(goldens::path_of(c), r.out);
    CHECK(r.out == goldens::read_file(goldens::path_of(c)));
  }
}

TEST_CASE("classify prints the case") {
  CHECK(run({"classify", "--s1", "1.5", "--s2", "3"}).out == "case II\n");
  CHECK(run({"classify", "--s1", "4", "--s2", "4"}).out == "case III\n");
  CHECK(run({"classify", "--s1", "1.3333333333333333", "--s2", "2.5"}).out == "case I\n");
}

TEST_CASE("Markov density cells") {
  const auto r = run({"density", "--s1", "2", "--s2", "2", "--a", "0", "--method", "ulam", "--bins", "2", "--align-half"});
  std::istringstream in(r.out);
  const auto f = acimlab::io::read_density_csv(in);
  REQUIRE(f.cell_count() == 2);
  CHECK(f.cell_right(0) == 0.5);
  CHECK(std::abs(f.values()[0] - 1.5) < 1e-10);
  CHECK(std::abs(f.values()[1] - 0.5) < 1e-10);
}

TEST_CASE("configuration errors exit with code 2") {
  const auto empty = run({"sweep", "--s1", "2", "--s2", "2"});
  CHECK(empty.code == acimlab::cli::exit_code::config_error);
  CHECK(empty.err.find("a_schedule") != std::string::npos);
  const auto bad = run({"density", "--s1", "0.9", "--s2", "2"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("s1 > 1") != std::string::npos);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"density", "--method", "spline"}).code == 2);
  CHECK(run({"sweep", "--a-schedule", "0.01,0.02"}).code == 2);
  CHECK(run({"map-eval"}).code == 2);
}

TEST_CASE("computation errors exit with code 3") {
  const auto r = run({"density", "--s1", "1.3333333333333333", "--s2", "2.5", "--a", "0.05", "--method", "gora"});
  CHECK(r.code == acimlab::cli::exit_code::computation_error);
  CHECK(r.err.find("1/s1 + 1/s2 <= 1") != std::string::npos);
}

TEST_CASE("map evaluation") {
  const auto r = run({"map-eval", "--s1", "1.5", "--s2", "3", "--p", "3", "--q", "2", "--r", "2", "--a", "0.05", "--x",
                      "0,0.5,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\nx,value\n0,1\n0.5,0.6\n1,1\n") != std::string::npos);
}

TEST_CASE("range schedules and json output") {
  const auto r = run({"ratios", "--s1", "2", "--s2", "2", "--a-start", "0.01", "--a-stop", "0.0001", "--a-points", "3",
                      "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["data"]["rows"].size() == 3);
  CHECK(doc["header"]["config"]["a_schedule"][1].get<double>() == doctest::Approx(0.001).epsilon(1e-14));
  CHECK(doc["data"]["monotone"]["B"] == true);
}

TEST_CASE("flags override the config file") {
  const auto dir = std::filesystem::temp_directory_path() / "acimlab_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = (dir / "cfg.json").string();
  std::ofstream(cfg) << R"({"s1": 4, "s2": 4, "a": 0.01})";
  CHECK(run({"classify", "--config", cfg}).out == "case III\n");
  CHECK(run({"classify", "--config", cfg, "--s1", "2", "--s2", "2"}).out == "case II\n");
  std::ofstream(cfg) << R"({"bogus": 1})";
  CHECK(run({"classify", "--config", cfg}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("output files are written with a header") {
  const auto dir = std::filesystem::temp_directory_path() / "acimlab_cli_out";
  std::filesystem::create_directories(dir);
  const auto out = (dir / "ce.csv").string();
  const auto r = run({"counterexample", "--n-max", "2", "--output", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const auto rows = acimlab::io::read_counterexample_csv(in);
  CHECK(rows.size() == 2);
  std::ifstream again(out);
  std::string first;
  std::getline(again, first);
  CHECK(first == "# acimlab " ACIMLAB_VERSION);
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical configs give identical bytes") {
  const std::vector<std::string> args{"sweep", "--s1", "4", "--s2", "4", "--a-schedule", "0.05,0.01"};
  CHECK(run(args).out == run(args).out);
}
