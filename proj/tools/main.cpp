#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace cascadeq::cli;
  CLI::App app{"Threshold-agent market and busy-period queue experiments"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Invocation inv;
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "Run the agent-based market and write price, returns and summary CSVs"},
      {"cascade", "Sample instantaneous cascades from an explicit or generated threshold field"},
      {"queue-sim", "Sample single-server queue busy periods by discrete-event simulation"},
      {"queue-analytic", "Tabulate the M/M/1 busy-period law or compare it with simulation"},
      {"analyze", "Compute kurtosis, Hill and autocorrelation tables for a returns CSV"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Sectioned key = value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed (overrides run.seed)");
    sub->add_option("--out", out_dir, "Output directory (default $CASCADEQ_OUT or ./out)");
    sub->add_option("--override", inv.overrides, "section.key=value, repeatable")
        ->allow_extra_args(false);
  }
  CLI11_PARSE(app, argc, argv);

  const auto* chosen = app.get_subcommands().front();
  inv.command = chosen->get_name();
  if (chosen->count("--config")) inv.config_path = config_path;
  if (chosen->count("--seed")) inv.seed = seed;
  if (chosen->count("--out")) inv.out_dir = out_dir;
  return execute(inv);
}
