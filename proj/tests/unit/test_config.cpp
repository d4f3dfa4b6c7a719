#include <gtest/gtest.h>

#include "nlclaw/config.hpp"
#include "nlclaw/errors.hpp"

using namespace nlclaw;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Literals, Velocity) {
  const auto v = parse_velocity("greenshields(vmax=1, rhomax=1)");
  EXPECT_EQ(v.family(), VelocityFamily::Greenshields);
  EXPECT_DOUBLE_EQ(v.v(0.3), 0.7);
  EXPECT_EQ(parse_velocity("underwood(v0=2, rhomax=1)").family(),
            VelocityFamily::Underwood);
  EXPECT_EQ(parse_velocity("gen_greenshields(v0=1, rhomax=1, n=3)").exponent(), 3);
  EXPECT_TRUE(parse_velocity("gen_california(v0=1, rhomax=1, alpha=0.5, regularized=1)")
                  .regularized());
  EXPECT_EQ(parse_velocity("greenberg(v0=1, rhomax=2)").family(),
            VelocityFamily::Greenberg);
  const auto c = parse_velocity("custom(knots=0|0.5|1, v=1;-1|0.75;-0.5, dv=-1|-0.5, d2v=0|0)");
  EXPECT_DOUBLE_EQ(c.v(0.75), 0.375);
  EXPECT_THROW(parse_velocity("greenshields(vmax=1, speed=2)"), InvalidArgument);
  EXPECT_THROW(parse_velocity("warp(9)"), InvalidArgument);
  EXPECT_THROW(parse_velocity("gen_greenshields(v0=1)"), InvalidArgument);
}

TEST(Literals, Kernel) {
  const auto k = parse_kernel("exp(eps=0.05)");
  EXPECT_EQ(k.family(), KernelFamily::Exponential);
  EXPECT_DOUBLE_EQ(k.eps(), 0.05);
  EXPECT_EQ(parse_kernel("box(eps=0.1)").family(), KernelFamily::Box);
  EXPECT_THROW(parse_kernel("exp(eps=0)"), InvalidArgument);
  EXPECT_THROW(parse_kernel("gauss(eps=1)"), InvalidArgument);
  EXPECT_THROW(parse_kernel("exp"), InvalidArgument);
}

TEST(Literals, Profile) {
  const auto f3 = parse_profile("fig3(nmax=50)");
  EXPECT_DOUBLE_EQ(total_variation(f3, Window(0.0, 1.1)), 100.0);
  EXPECT_DOUBLE_EQ(total_variation(parse_profile("fig3(7)"), Window(0.0, 1.1)), 14.0);
  EXPECT_DOUBLE_EQ(total_variation(parse_profile("fig3"), Window(0.0, 1.1)), 100.0);
  EXPECT_EQ(parse_profile("fig1").eval(0.0), 0.5);
  EXPECT_EQ(parse_profile("fig2(cells=10)").num_cells(), 10u);
  const auto s = parse_profile("steps(0, 0.5, 1, 0.25, 2 ; left=0.1, right=0.9)");
  EXPECT_EQ(s.num_cells(), 2u);
  EXPECT_EQ(s.eval(-1.0), 0.1);
  EXPECT_EQ(s.eval(0.5), 0.5);
  EXPECT_EQ(s.eval(1.5), 0.25);
  EXPECT_EQ(s.eval(3.0), 0.9);
  EXPECT_EQ(parse_profile("steps(0, 0.3, 1)").left_state(), 0.0);
  EXPECT_EQ(parse_profile("constant(0.4)").eval(7.0), 0.4);
  EXPECT_EQ(parse_profile("step(at=0, left=0.2, right=0.8)").eval(0.0), 0.8);
  EXPECT_THROW(parse_profile("steps(0, 0.5)"), InvalidArgument);
  EXPECT_THROW(parse_profile("steps(1, 0.5, 0)"), InvalidArgument);
  EXPECT_THROW(parse_profile("fig3(nmax=0)"), InvalidArgument);
  EXPECT_THROW(parse_profile("fig1(3)"), InvalidArgument);
}

TEST(Literals, WindowAndLists) {
  const auto w = parse_window("-0.5:1.5");
  EXPECT_EQ(w.lo(), -0.5);
  EXPECT_EQ(w.hi(), 1.5);
  EXPECT_THROW(parse_window("1:0"), InvalidArgument);
  EXPECT_THROW(parse_window("1"), InvalidArgument);
  EXPECT_EQ(parse_number_list("0.2,0.1, 0.05"), (std::vector<double>{0.2, 0.1, 0.05}));
  EXPECT_THROW(parse_number("1.5x"), InvalidArgument);
  EXPECT_THROW(parse_number("inf"), InvalidArgument);
}

TEST(ParseConfig, FullDocument) {
  const auto cfg = parse_config(R"(# comment
profile = fig3(nmax=20)
velocity = greenshields(vmax=1, rhomax=1)
kernel = exp(eps=0.05)
final_time = 0.5

[solver]
cells_per_unit = 300
snapshot_step = 0.1

[diagnostics]
slack = 0.1
window = -0.5:1.5

[local]
dx = 0.005

[sweep]
eps = 0.2, 0.1
times = 0.25, 0.5
threads = 0

[output]
dir = results
)");
  EXPECT_DOUBLE_EQ(total_variation(cfg.datum, Window(0.0, 1.1)), 40.0);
  EXPECT_DOUBLE_EQ(cfg.sim.kernel.eps(), 0.05);
  EXPECT_DOUBLE_EQ(cfg.sim.final_time, 0.5);
  EXPECT_DOUBLE_EQ(cfg.sim.cells_per_unit, 300.0);
  ASSERT_EQ(cfg.sim.snapshot_times.size(), 6u);
  EXPECT_DOUBLE_EQ(cfg.sim.snapshot_times.back(), 0.5);
  EXPECT_DOUBLE_EQ(cfg.diagnostics.slack, 0.1);
  EXPECT_DOUBLE_EQ(cfg.diagnostics.window.lo(), -0.5);
  EXPECT_DOUBLE_EQ(cfg.local.dx, 0.005);
  EXPECT_EQ(cfg.sweep.eps, (std::vector<double>{0.2, 0.1}));
  EXPECT_EQ(cfg.sweep.threads, 0);
  EXPECT_EQ(cfg.sweep.kernel, KernelFamily::Exponential);
  EXPECT_DOUBLE_EQ(total_variation(cfg.sweep.datum, Window(0.0, 1.1)), 40.0);
  EXPECT_EQ(cfg.out_dir, "results");
}

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.sim.kernel.family(), KernelFamily::Exponential);
  EXPECT_EQ(cfg.datum.eval(0.0), 0.5);
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("profile = fig1\nbogus = 1\n"), 2u);
  EXPECT_EQ(error_line("\n\nvelocity = greenshields(vmax=-1)\n"), 3u);
  EXPECT_EQ(error_line("[nowhere]\n"), 1u);
  EXPECT_EQ(error_line("[solver]\ncells_per_unit = many\n"), 2u);
  EXPECT_EQ(error_line("kernel = exp(eps=0.1)\nkernel = exp(eps=0.2)\n"), 2u);
  EXPECT_EQ(error_line("profile\n"), 1u);
  EXPECT_EQ(error_line("[sweep]\neps = 0.1, 0.2\n"), 2u);
  EXPECT_EQ(error_line("[solver]\nsnapshots = 0, 2\n"), 2u);
  try {
    parse_config("x = 1\n");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(ParseConfig, UnknownKeyInKnownSection) {
  EXPECT_EQ(error_line("[local]\nthreads = 2\n"), 2u);
}

TEST(LoadConfig, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/file.toml"), InvalidArgument);
}
