#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "acimlab/cli.hpp"

namespace goldens {

struct Result {
  int code;
  std::string out;
  std::string err;
};

inline Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "acimlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = acimlab::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Case {
  const char* file;
  std::vector<std::string> args;
};

inline const std::vector<Case>& cases() {
  static const std::vector<Case> all{
      {"classify_1.5_3.txt", {"classify", "--s1", "1.5", "--s2", "3"}},
      {"density_ulam_2_2.csv", {"density", "--s1", "2", "--s2", "2", "--a", "0", "--method", "ulam", "--bins", "2",
                                "--align-half"}},
      {"density_ulam_1.5_3.csv", {"density", "--s1", "1.5", "--s2", "3", "--a", "0", "--method", "ulam", "--bins",
                                  "2", "--align-half"}},
      {"density_ulam_2_2_1024.csv", {"density", "--s1", "2", "--s2", "2", "--a", "0", "--method", "ulam", "--bins",
                                     "1024", "--align-half"}},
      {"sweep_1.5_3_3_2_2.csv", {"sweep", "--s1", "1.5", "--s2", "3", "--p", "3", "--q", "2", "--r", "2",
                                 "--a-schedule", "0.05,0.01,0.002"}},
  };
  return all;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string path_of(const Case& c) { return std::string(ACIMLAB_GOLDEN_DIR) + "/" + c.file; }

// With ACIMLAB_UPDATE_GOLDENS set, the files are rewritten from the current output.
inline bool update_requested() { return std::getenv("ACIMLAB_UPDATE_GOLDENS") != nullptr; }

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace goldens
