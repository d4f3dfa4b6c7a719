#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlclaw_cli/cli.hpp"

namespace fs = std::filesystem;
using nlclaw::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("nlclaw_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write(const fs::path& dir, const std::string& text) {
  const auto p = dir / "c.cfg";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"reproduce", "fig9"}).code, 2);
  EXPECT_EQ(run({"simulate", "--bogus"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MissingConfigIsUsageError) {
  const auto r = run({"sweep", "--config", "missing.toml"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.toml"), std::string::npos);
}

TEST(Cli, BadConfigReportsLine) {
  const auto d = scratch("bad");
  const auto r = run({"check", "--config", write(d, "profile = fig1\nspeed = 3\n").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, CheckOnConstantDatumPasses) {
  const auto d = scratch("const");
  const auto cfg = write(d, "profile = constant(0.4)\nfinal_time = 0.5\n");
  const auto r = run({"check", "--config", cfg.string(), "--out", (d / "o").string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(fs::exists(d / "o" / "check.csv"));
}

TEST(Cli, NegativeSlackIsUsageError) {
  const auto d = scratch("slack");
  EXPECT_EQ(run({"check", "--slack", "-1", "--out", d.string()}).code, 2);
}

TEST(Cli, SimulateIsDeterministic) {
  const auto d = scratch("det");
  const auto cfg = write(d, "profile = fig1\nkernel = exp(eps=0.1)\nfinal_time = 0.3\n"
                            "[solver]\nsnapshot_step = 0.1\n");
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", (d / "a").string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", (d / "b").string()}).code, 0);
  const auto a = slurp(d / "a" / "snapshots.csv");
  EXPECT_EQ(a, slurp(d / "b" / "snapshots.csv"));
  EXPECT_EQ(a.substr(0, a.find('\n')), "t,x,rho,W,dxW,g");
}

TEST(Cli, SimulateLocalWritesEmptyNonlocalColumns) {
  const auto d = scratch("local");
  const auto cfg = write(d, "profile = step(at=0, left=0.8, right=0.2)\nfinal_time = 0.2\n"
                            "[local]\ndx = 0.01\nwindow = -1:1\n");
  ASSERT_EQ(run({"simulate-local", "--config", cfg.string(), "--out", d.string()}).code, 0);
  const auto s = slurp(d / "local_snapshots.csv");
  const auto second = s.substr(s.find('\n') + 1);
  EXPECT_EQ(second.substr(second.find('\n') - 3, 3), ",,,");
}

TEST(Cli, SweepWithEpsFlag) {
  const auto d = scratch("sweep");
  const auto cfg = write(d, "profile = step(at=0, left=0.2, right=0.8)\n"
                            "[solver]\ncells_per_unit = 100\n"
                            "[sweep]\ntimes = 0.25\ncells_per_unit = 100\nthreads = 0\n");
  const auto r = run({"sweep", "--config", cfg.string(), "--eps", "0.2,0.1,0.05",
                      "--out", d.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto s = slurp(d / "sweep.csv");
  EXPECT_EQ(s.substr(0, s.find('\n')), "eps,t,err_rho,err_W");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}

TEST(Cli, SweepRejectsVelocityWithoutPath) {
  const auto d = scratch("sweep_bad");
  const auto cfg = write(d, "velocity = underwood(v0=1, rhomax=1)\n");
  EXPECT_EQ(run({"sweep", "--config", cfg.string(), "--out", d.string()}).code, 2);
}

TEST(Cli, ReproduceFig1) {
  const auto d = scratch("fig1");
  const auto r = run({"reproduce", "fig1", "--out", d.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(d / "fig1_manifest.txt"));
  EXPECT_TRUE(fs::exists(d / "fig1_exp_eps0.025.csv"));
  EXPECT_TRUE(fs::exists(d / "fig1_box_eps0.2.csv"));
  const auto box = slurp(d / "fig1_box_eps0.2.csv");
  EXPECT_NE(box.find(",box,0.2,1\n"), std::string::npos);
}
