#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cuspmass/eigenform.hpp"
#include "cuspmass/verification.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cuspmass");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cuspmass::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, CheckPeterssonEmitsJsonLines) {
  const auto r = run({"check", "--identity", "petersson", "--k", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  for (const auto& l : ls) {
    const auto j = cuspmass::verify::Json::parse(l);
    EXPECT_EQ(j["identity"], "petersson");
    EXPECT_TRUE(j["passed"].get<bool>());
  }
}

TEST(Cli, FailingToleranceGivesExitOne) {
  const auto r = run({"check", "--identity", "petersson", "--k", "12", "--tol", "petersson=0"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, NormsTable) {
  const auto r = run({"norms", "--k", "12", "--p", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "# cuspmass v0.1.0");
  EXPECT_EQ(ls[1], "k,quantity,method,value,est_error,params_json");
  const auto first = ls[2].find(',', ls[2].find(',', ls[2].find(',') + 1) + 1);
  const double v = std::stod(ls[2].substr(first + 1));
  EXPECT_NEAR(v, 1.0, 1e-3);
}

TEST(Cli, InvalidInputsExitTwo) {
  auto r = run({"norms", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  r = run({"norms", "--k", "14"});
  EXPECT_EQ(r.code, 2);
  r = run({"norms", "--k", "13"});
  EXPECT_EQ(r.code, 2);
  r = run({});
  EXPECT_EQ(r.code, 2);
  r = run({"check", "--identity", "nope"});
  EXPECT_EQ(r.code, 2);
  r = run({"check", "--tol", "nope=1"});
  EXPECT_EQ(r.code, 2);
  r = run({"--version"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, ConfigFile) {
  const auto dir = std::filesystem::temp_directory_path() / "cuspmass_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "run.cfg").string();
  {
    std::ofstream f(path);
    f << "# cusp run\ncommand = cusp\nk = 12\ny0 = 2, 10\n";
  }
  auto r = run({"--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 2u + 6u);

  // Command-line values take precedence over the file.
  r = run({"--config", path, "cusp", "--y0", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 2u + 3u);

  {
    std::ofstream f(path);
    f << "command = cusp\nunknown_key = 1\n";
  }
  EXPECT_EQ(run({"--config", path}).code, 2);
  {
    std::ofstream f(path);
    f << "command = cusp\nno equals sign\n";
  }
  EXPECT_EQ(run({"--config", path}).code, 2);
  EXPECT_EQ(run({"--config", (dir / "missing.cfg").string()}).code, 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, OutputFile) {
  const auto path = (std::filesystem::temp_directory_path() / "cuspmass_cli_out.csv").string();
  const auto r = run({"-o", path, "eigen", "--k", "24"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(lines(all).size(), 2u + 2u);
  std::remove(path.c_str());
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const auto a = run({"--threads", "1", "check", "--identity", "char_sum,geodesic_R", "--k", "12"});
  const auto b = run({"--threads", "3", "check", "--identity", "char_sum,geodesic_R", "--k", "12"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
