#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nonbloch/cli.hpp"
#include "nonbloch/config.hpp"
#include "nonbloch/error.hpp"
#include "nonbloch/wannier_stark.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nonbloch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("nonbloch_cli_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using testutil::Csv;
using testutil::read_csv;

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nonbloch");
  return run(args);
}

std::string message_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kWs = R"(run.command = ws
run.name = small
model.example = 2, 0.4, 1, 0.6
ws.F_over_E0 = 0.5, 1.3, 2.7
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config("# comment\nrun.command = obc\nmodel.example = 2, 0.4, 1, 0.6\nobc.N = 12\nobc.N = 14\n");
  CHECK(c.command == "obc");
  CHECK(c.obc.N == 14);
  REQUIRE(c.model);
  CHECK(c.model->theta(1) == cplx(1.6));
  REQUIRE(c.example);
  CHECK((*c.example)[3] == 0.6);

  const auto r = parse_config("ws.F_min_over_E0 = 0.5\nws.F_max_over_E0 = 1.5\nws.count = 3\n");
  const auto v = r.ws.F_over_E0.expand();
  REQUIRE(v.size() == 3);
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(parse_config("ws.F_over_E0 = 0.2, 0.4\n").ws.F_over_E0.expand().size() == 2);

  const auto m = parse_config("model.q = 1\nmodel.rho[0] = 1.5\nmodel.theta[1] = 0.2,0.1\n");
  REQUIRE(m.model);
  CHECK(m.model->theta(1) == cplx(0.2, 0.1));
}

TEST_CASE("config errors name the key") {
  CHECK(message_of("obc.N = 40\nobc.size = 3\n").find("obc.size") != std::string::npos);
  CHECK(message_of("obc.N = 40\nobc.size = 3\n").find("2") != std::string::npos);
  CHECK(message_of("bogus.key = 1\n").find("bogus.key") != std::string::npos);
  CHECK(message_of("obc.N = forty\n").find("obc.N") != std::string::npos);
  CHECK(message_of("obc.N = 2.5\n").find("obc.N") != std::string::npos);
  CHECK(message_of("run.command = fly\n").find("run.command") != std::string::npos);
  CHECK(message_of("this line has no equals sign\n") != "");
  CHECK(message_of("sweep.axis = delta\nsweep.values = 0.2\nmodel.q = 1\nmodel.rho[0] = 1\n") != "");
  CHECK_THROWS_AS(preset("fig99"), ConfigError);
}

TEST_CASE("presets are complete and fully explicit") {
  const auto names = preset_names();
  for (const char* required : {"fig1", "fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig5",
                               "fig6"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  for (const auto& n : names) {
    CAPTURE(n);
    for (const auto& c : preset(n)) {
      CHECK(valid_command(c.command));
      CHECK(c.model.has_value());
      const std::string text = format_config(c);
      CHECK(format_config(parse_config(text)) == text);
      CHECK(text.find("run.command") != std::string::npos);
    }
  }
  CHECK(preset("fig3").size() == 2);
  CHECK(preset("fig2").size() == 3);
  const auto f3 = preset("fig3b").front();
  CHECK(f3.evolve.F_over_E0 == 1.0);
  CHECK(f3.evolve.w == 4.0);
  CHECK(f3.evolve.sublattice == Sublattice::B);
  CHECK((*f3.example)[3] == 1.0);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  CHECK(cli({"--out", dir.string(), "gbz", "--set", "model.example=2,0.4,1,0.6", "--set", "gbz.center=30,30",
             "--set", "gbz.half_width=1", "--set", "gbz.n_re=20", "--set", "gbz.n_im=20"}) == 2);
  CHECK(cli({"--out", dir.string(), "obc", "--set", "model.example=2,0.4,1,0.6", "--set", "obc.wat=3"}) == 2);
  CHECK(cli({"fly"}) == 2);
  CHECK(cli({"--out", dir.string(), "obc"}) == 2);  // no model
  CHECK(cli({"--config", (dir / "missing.cfg").string(), "ws"}) == 2);
  CHECK(cli({"preset", "nope"}) == 2);
  CHECK(cli({"--out", dir.string(), "obc", "--set", "model.example=2,0.4,1,0.6", "--set", "obc.N=1"}) == 2);
  CHECK(cli({"--out", dir.string(), "obc", "--set", "model.example=2,0.4,1,0.6", "--set", "obc.N=8"}) == 0);
  CHECK(fs::exists(dir / "obc.csv"));
}

TEST_CASE("byte-identical output, independent of the thread count") {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  std::ofstream(d1 / "run.cfg") << kWs;
  CHECK(cli({"--config", (d1 / "run.cfg").string(), "--out", d1.string(), "--jobs", "1", "ws"}) == 0);
  CHECK(cli({"--config", (d1 / "run.cfg").string(), "--out", d2.string(), "--jobs", "3", "ws"}) == 0);
  const std::string a = slurp(d1 / "small.csv"), b = slurp(d2 / "small.csv");
  CHECK(!a.empty());
  CHECK(a == b);

  // frozen values through the CLI
  const auto csv = read_csv(d1 / "small.csv");
  REQUIRE(csv.rows.size() == 3);
  CHECK(csv.num(1, "Re(cos_theta)") == doctest::Approx(0.809081899933535).epsilon(1e-9));
  CHECK(csv.num(1, "Theta_overlap") == doctest::Approx(0.212177523397).epsilon(1e-8));
}

TEST_CASE("single-point sweep equals ws") {
  const auto dir = scratch("sweep");
  const std::string model = "model.example=2,0.4,1,0.6";
  REQUIRE(cli({"--out", dir.string(), "ws", "--set", model, "--set", "ws.F_over_E0=1.3"}) == 0);
  REQUIRE(cli({"--out", dir.string(), "sweep", "--set", model, "--set", "sweep.values=1.3"}) == 0);
  const auto ws = read_csv(dir / "ws.csv"), sw = read_csv(dir / "sweep.csv");
  REQUIRE(ws.rows.size() == 1);
  REQUIRE(sw.rows.size() == 1);
  for (const char* col : {"F_over_E0", "Re(cos_theta)", "Im(cos_theta)", "Theta_overlap", "Re(theta_wkb_cos)"})
    CHECK(ws.rows[0][ws.col(col)] == sw.rows[0][sw.col(col)]);
  CHECK(sw.num(0, "delta") == 0.6);
}

TEST_CASE("delta sweep: overlap reaches one at resonance only at collapse") {
  const auto dir = scratch("dsweep");
  REQUIRE(cli({"--out", dir.string(), "sweep", "--set", "model.example=2,0.4,1,0", "--set", "sweep.axis=delta",
               "--set", "sweep.values=0.2,0.6,1.0", "--set", "sweep.F_over_E0=1"}) == 0);
  const auto c = read_csv(dir / "sweep.csv");
  REQUIRE(c.rows.size() == 3);
  CHECK(c.num(0, "Theta_overlap") < 0.999);
  CHECK(c.num(1, "Theta_overlap") < 0.999);
  CHECK(c.num(2, "Theta_overlap") >= 1 - 1e-6);
}

TEST_CASE("preset fig2c: cos theta = cos(2 pi E0 / F)") {
  const auto dir = scratch("fig2c");
  REQUIRE(cli({"preset", "fig2c", "--out", dir.string(), "--svg"}) == 0);
  const auto c = read_csv(dir / "fig2c.csv");
  REQUIRE(c.rows.size() == 400);
  double worst = 0;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const double f = c.num(r, "F_over_E0");
    worst = std::max(worst, std::abs(c.num(r, "Re(cos_theta)") - std::cos(2 * oracle::pi / f)));
    worst = std::max(worst, std::abs(c.num(r, "Im(cos_theta)")));
  }
  CHECK(worst < 1e-8);
  const std::string svg = slurp(dir / "fig2c.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(fs::exists(dir / "fig2c_overlap.svg"));
}

TEST_CASE("preset fig1b: open spectrum spans the non-Bloch segment") {
  const auto dir = scratch("fig1b");
  REQUIRE(cli({"preset", "fig1b", "--out", dir.string()}) == 0);
  const auto c = read_csv(dir / "fig1b.csv");
  REQUIRE(c.rows.size() == 80);
  const double E1 = oracle::band_edge(1, 0.6), E2 = oracle::band_edge(2, 0.6);
  double lo = 1e9, hi = 0;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const double re = std::abs(c.num(r, "Re(E)"));
    CHECK(std::abs(c.num(r, "Im(E)")) < 1e-8);
    if (std::abs(re - 2.0) < 1e-8) continue;  // boundary modes at +-Delta
    lo = std::min(lo, re);
    hi = std::max(hi, re);
  }
  CHECK(lo == doctest::Approx(E1).epsilon(0.02));
  CHECK(hi == doctest::Approx(E2).epsilon(0.02));
  // skin modes sit at the right edge
  CHECK(c.num(79, "center_of_mass") > 30);
}

TEST_CASE("other subcommands write their CSVs") {
  const auto dir = scratch("misc");
  REQUIRE(cli({"--out", dir.string(), "--svg", "bands", "--set", "model.example=2,0.4,1,0.6", "--set",
               "bands.samples=11"}) == 0);
  CHECK(read_csv(dir / "bands.csv").rows.size() == 11);
  CHECK(fs::exists(dir / "bands.svg"));
  REQUIRE(cli({"--out", dir.string(), "gbz", "--set", "model.example=2,0.4,1,0.6", "--set", "gbz.n_re=80", "--set",
               "gbz.n_im=80"}) == 0);
  const auto g = read_csv(dir / "gbz.csv");
  CHECK(g.rows.size() > 4);
  for (std::size_t r = 0; r < g.rows.size(); ++r) CHECK(g.num(r, "abs_beta") == doctest::Approx(0.5).epsilon(1e-6));
  REQUIRE(cli({"preset", "fig3b", "--out", dir.string(), "--set", "evolve.horizon_tB=0.25", "--set",
               "evolve.two_level=true"}) == 0);
  const auto e = read_csv(dir / "fig3b.csv");
  CHECK(e.rows.size() == 17);
  CHECK(e.num(0, "P") == doctest::Approx(1.0));
  CHECK(e.num(0, "P_B") == 1.0);
  CHECK(fs::exists(dir / "fig3b_snapshots.csv"));
  CHECK(read_csv(dir / "fig3b_two_level.csv").rows.size() > 10);
}

TEST_CASE("--print-config emits a parseable configuration") {
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  const int rc = cli({"preset", "fig6a", "--print-config"});
  std::cout.rdbuf(old);
  CHECK(rc == 0);
  const auto c = parse_config(captured.str());
  CHECK(c.command == "evolve");
  CHECK((*c.example)[3] == 0.92);
}
