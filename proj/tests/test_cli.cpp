#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cascadeq/config.hpp"
#include "cascadeq/error.hpp"
#include "cascadeq/text.hpp"
#include "commands.hpp"

using namespace cascadeq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cascadeq_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exec(const std::string& cmd, const fs::path& out, std::vector<std::string> overrides,
         std::optional<fs::path> config = {}) {
  cli::Invocation inv;
  inv.command = cmd;
  inv.out_dir = out;
  inv.overrides = std::move(overrides);
  inv.config_path = config;
  return cli::execute(inv);
}

}  // namespace

TEST_CASE("built-in defaults are the model defaults") {
  const auto p = cli::market_params(Config::defaults());
  const MarketParams d;
  CHECK(p.num_agents == 100000);
  CHECK(p.timestep == 4e-6);
  CHECK(p.coupling == 0.1);
  CHECK(p.threshold_noise == 1e-8);
  CHECK(p.reset_low.lo == 0.05);
  CHECK(p.reset_high.hi == 0.25);
  CHECK(p.herding.lo == 20.0);
  CHECK(p.herding.hi == 100.0);
  CHECK(p.volatility(0.5) == 2.0);
  CHECK(p.substeps_per_day == 10);
  CHECK(p.initial_price == d.initial_price);
  CHECK(p.noise_scale == d.noise_scale);
}

TEST_CASE("file values, overrides and seed precedence") {
  Config c = Config::defaults();
  c.load_text("# comment\n[market]\nnum_agents = 250\n\n[run]\nseed = 9\n", "x.ini");
  CHECK(c.integer("market", "num_agents") == 250);
  CHECK(c.entry("market", "num_agents").line == 3);
  c.apply_override("market.num_agents=300");
  CHECK(c.integer("market", "num_agents") == 300);

  const auto dir = scratch("precedence");
  std::ofstream(dir / "c.ini") << "[run]\nseed = 5\n";
  cli::Invocation inv;
  inv.config_path = dir / "c.ini";
  inv.overrides = {"run.seed=6"};
  CHECK(cli::resolve_config(inv).unsigned_integer("run", "seed") == 6);
  inv.seed = 7;
  CHECK(cli::resolve_config(inv).unsigned_integer("run", "seed") == 7);
}

TEST_CASE("config errors carry the line") {
  Config c = Config::defaults();
  auto line_of = [&](const std::string& text) {
    try {
      Config copy = c;
      copy.load_text(text, "f.ini");
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("[market]\n\nnum_agentz = 3\n") == 3);
  CHECK(line_of("[marketz]\n") == 1);
  CHECK(line_of("[market]\nnum_agents\n") == 2);
  CHECK(line_of("num_agents = 3\n") == 1);
  CHECK(line_of("[market]\nnum_agents = 1\nnum_agents = 2\n") == 3);
  CHECK(line_of("[market\n") == 1);

  c.load_text("[market]\ncoupling = -1\n", "f.ini");
  try {
    cli::market_params(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("f.ini:2") != std::string::npos);
  }
  CHECK_THROWS_AS(c.apply_override("market.nope=1"), ConfigError);
  CHECK_THROWS_AS(c.apply_override("nodot=1"), ConfigError);
}

TEST_CASE("canonical text and hash") {
  Config a = Config::defaults(), b = Config::defaults();
  CHECK(a.hash() == b.hash());
  b.load_text("[market]\ncoupling = 0.1\n", "b.ini");
  CHECK(a.hash() == b.hash());  // same values, different origin
  b.apply_override("market.coupling=0.2");
  CHECK(a.hash() != b.hash());
}

TEST_CASE("explicit one-row cascade drops by the initiator jump") {
  const auto dir = scratch("cascade1");
  std::ofstream(dir / "field.csv") << "offset,state,weight\n0.5,1,1\n";
  REQUIRE(exec("cascade", dir / "out",
               {"cascade.field=" + (dir / "field.csv").string(), "cascade.coupling=0.1",
                "cascade.total_weight=100"}) == 0);
  const auto t = read_csv(dir / "out" / "cascades.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(parse_double(t.rows[0][t.column("drop")]) == doctest::Approx(2 * 0.1 * 1 / 100.0));
  CHECK(t.rows[0][t.column("switches")] == "1");
}

TEST_CASE("tabulated busy-period cdf") {
  const auto dir = scratch("tab");
  REQUIRE(exec("queue-analytic", dir, {}) == 0);
  const auto t = read_csv(dir / "tabulate.csv");
  REQUIRE(t.rows.size() == 2000);
  CHECK(parse_double(t.rows.back()[0]) == 20.0);
  // P(tau <= 20) from an independent 30-digit quadrature
  CHECK(parse_double(t.rows.back()[t.column("cdf")]) ==
        doctest::Approx(0.993422040676241740).epsilon(1e-12));
  double prev = 0;
  for (const auto& r : t.rows) {
    const double v = parse_double(r[2]);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("every subcommand is byte-reproducible") {
  const auto dir = scratch("determinism");
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"simulate", {"market.num_agents=200", "simulate.days=60"}},
      {"cascade", {"cascade.samples=2000", "cascade.anti_fraction=0.2"}},
      {"queue-sim", {"queue.samples=3000", "queue.reneging=anti_customer",
                     "queue.reneging_rate=0.1"}},
      {"queue-analytic", {"analytic.mode=compare", "analytic.samples=5000"}},
  };
  for (const auto& [cmd, ov] : runs) {
    REQUIRE(exec(cmd, dir / (cmd + "_a"), ov) == 0);
    REQUIRE(exec(cmd, dir / (cmd + "_b"), ov) == 0);
    for (const auto& f : fs::directory_iterator(dir / (cmd + "_a"))) {
      INFO(cmd << " " << f.path().filename());
      CHECK(slurp(f.path()) == slurp(dir / (cmd + "_b") / f.path().filename()));
    }
  }
  REQUIRE(exec("analyze", dir / "an_a",
               {"analysis.input=" + (dir / "simulate_a" / "returns.csv").string()}) == 0);
  CHECK(slurp(dir / "an_a" / "summary.csv") == slurp(dir / "simulate_a" / "summary.csv"));
}

TEST_CASE("manifest reproduces the run") {
  const auto dir = scratch("manifest");
  REQUIRE(exec("cascade", dir / "a", {"cascade.samples=500", "run.seed=42"}) == 0);
  REQUIRE(exec("cascade", dir / "b", {}, dir / "a" / "manifest.ini") == 0);
  CHECK(slurp(dir / "a" / "cascades.csv") == slurp(dir / "b" / "cascades.csv"));
  CHECK(slurp(dir / "a" / "manifest.ini") == slurp(dir / "b" / "manifest.ini"));
  const auto m = slurp(dir / "a" / "manifest.ini");
  CHECK(m.find("# seed = 42") != std::string::npos);
  CHECK(m.find("# config_hash = ") != std::string::npos);
  CHECK(m.find("# tool_version = ") != std::string::npos);
}

TEST_CASE("invalid configs exit nonzero") {
  const auto dir = scratch("invalid");
  CHECK(exec("simulate", dir, {"market.num_agents=0"}) == cli::kExitConfig);
  CHECK(exec("queue-sim", dir, {"queue.service=gamma(2)"}) == cli::kExitConfig);
  CHECK(exec("analyze", dir, {}) == cli::kExitConfig);
  CHECK(exec("queue-analytic", dir, {"analytic.lambda=2"}) == cli::kExitConfig);
  CHECK(exec("nonsense", dir, {}) == cli::kExitUsage);
}

TEST_CASE("decoupled market summary shows gaussian returns") {
  // kappa = 0 alone still lets |sigma| modulate volatility; f = 1 removes that
  const auto dir = scratch("kappa0");
  REQUIRE(exec("simulate", dir,
               {"market.num_agents=100", "simulate.days=3000", "market.coupling=0",
                "market.volatility=constant"}) == 0);
  const auto t = read_csv(dir / "summary.csv");
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i][0] == "excess_kurtosis") CHECK(std::abs(parse_double(t.rows[i][2])) < 0.35);
  CHECK(read_csv(dir / "returns.csv").rows.size() == 3000);
}
