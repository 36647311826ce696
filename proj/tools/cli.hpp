#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace cuspmass::cli {

/// Fully resolved options of one invocation.
struct RunConfig {
  std::string command;
  std::vector<int> weights;
  std::vector<int> kappas;
  std::vector<double> p_values{2.0, 4.0};
  std::vector<double> y0_values{0.9, 2.0, 10.0};
  std::vector<double> lambdas{1e2, 1e3, 1e4};
  std::vector<std::int64_t> r_values{1};
  std::vector<std::string> identities;
  std::map<std::string, double> tolerances;
  std::int64_t prime_limit = 80000;
  std::int64_t l_max = 200;
  int terms = 4;
  bool mean_value = false;
  std::string output = "-";
  std::string cache_dir;
  int threads = 1;
};

/// Parses the command line (and a key=value config file given by --config).
/// Returns 0 and fills `config` on success, or the exit code to use otherwise.
int parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out, std::ostream& err);

/// Executes a parsed configuration: 0 on success, 1 when an asserted check fails
/// or a computation errors out, 2 for invalid configurations.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse followed by run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cuspmass::cli
