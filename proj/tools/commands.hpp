#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascadeq/cascade.hpp"
#include "cascadeq/config.hpp"
#include "cascadeq/market.hpp"
#include "cascadeq/queue_sim.hpp"

namespace cascadeq::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutEnv = "CASCADEQ_OUT";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct Invocation {
  std::string command;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::vector<std::string> overrides;
};

// Defaults, then the config file, then overrides, then --seed.
Config resolve_config(const Invocation& inv);

// --out, else $CASCADEQ_OUT, else ./out.
std::filesystem::path resolve_out_dir(const Invocation& inv);

// Typed parameter blocks; failures are ConfigErrors naming the offending key.
MarketParams market_params(const Config& c);
QueueParams queue_params(const Config& c);
ThresholdField cascade_field(const Config& c);  // explicit CSV or generator

// Stylized-facts table shared by simulate and analyze.
void write_summary(const std::filesystem::path& path, std::span<const double> returns,
                   std::size_t max_lag, std::size_t hill_k);

// Runs one subcommand and returns its exit code. Error messages go to stderr.
int execute(const Invocation& inv);

}  // namespace cascadeq::cli
