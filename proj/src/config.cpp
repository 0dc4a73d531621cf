#include "cascadeq/config.hpp"

#include <fstream>
#include <sstream>

#include "cascadeq/error.hpp"
#include "cascadeq/text.hpp"

namespace cascadeq {

namespace {

struct Default {
  const char* section;
  const char* key;
  const char* value;
};

// Market values are the reference model settings; the
// other blocks are chosen so that each subcommand runs a useful experiment
// out of the box.
constexpr Default kDefaults[] = {
    {"run", "seed", "1"},
    {"run", "label", "run"},

    {"market", "num_agents", "100000"},
    {"market", "timestep", "4e-6"},
    {"market", "coupling", "0.1"},
    {"market", "threshold_noise", "1e-8"},
    {"market", "noise_scale", "std_dev"},
    {"market", "reset_low_min", "0.05"},
    {"market", "reset_low_max", "0.25"},
    {"market", "reset_high_min", "0.05"},
    {"market", "reset_high_max", "0.25"},
    {"market", "herding_min", "20"},
    {"market", "herding_max", "100"},
    {"market", "volatility", "linear"},
    {"market", "volatility_a", "1"},
    {"market", "volatility_b", "2"},
    {"market", "substeps_per_day", "10"},
    {"market", "initial_price", "1"},
    {"market", "initial_long_fraction", "0.5"},

    {"simulate", "days", "10080"},
    {"simulate", "max_lag", "50"},
    {"simulate", "hill_k", "0"},
    {"simulate", "hist_bins", "70"},
    {"simulate", "hist_min", "0.7"},
    {"simulate", "hist_max", "1.4"},

    {"cascade", "field", ""},
    {"cascade", "coupling", "0.1"},
    {"cascade", "total_weight", "1"},
    {"cascade", "rate", "2.5"},
    {"cascade", "weights", "deterministic(1)"},
    {"cascade", "anti_fraction", "0"},
    {"cascade", "initiator_weight", "1"},
    {"cascade", "samples", "100000"},
    {"cascade", "max_switches", "10000000"},
    {"cascade", "record_switches", "false"},

    {"queue", "arrival", "0.5"},
    {"queue", "service", "exponential(1)"},
    {"queue", "reneging", "none"},
    {"queue", "reneging_rate", "0"},
    {"queue", "cancel_size", "exponential(1)"},
    {"queue", "samples", "100000"},
    {"queue", "max_duration", "inf"},
    {"queue", "threads", "0"},

    {"analytic", "mode", "tabulate"},
    {"analytic", "lambda", "0.5"},
    {"analytic", "mu", "1"},
    {"analytic", "t_max", "20"},
    {"analytic", "t_step", "0.01"},
    {"analytic", "tail_alpha", "3"},
    {"analytic", "tail_constant", "1"},
    {"analytic", "samples", "1000000"},

    {"analysis", "input", ""},
    {"analysis", "column", "log_return"},
    {"analysis", "max_lag", "50"},
    {"analysis", "hill_k", "0"},
};

}  // namespace

Config Config::defaults() {
  Config c;
  for (const auto& d : kDefaults) c.values_[d.section][d.key] = Entry{d.value, "default", 0};
  return c;
}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path.string());
}

void Config::load_text(std::string_view text, const std::string& source) {
  std::string section;
  std::map<std::string, int> seen;  // "section.key" -> line, for duplicates
  int line_no = 0;
  auto error = [&](const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg, line_no);
  };
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header '" + std::string(line) + "'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!values_.contains(section)) error("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) error("expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) error("missing key before '='");
    if (section.empty()) error("key '" + key + "' appears before any [section]");
    if (!values_[section].contains(key)) error("unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (auto it = seen.find(full); it != seen.end())
      error("duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    seen[full] = line_no;
    values_[section][key] =
        Entry{std::string(trim(line.substr(eq + 1))), source + ":" + std::to_string(line_no),
              line_no};
  }
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw ConfigError("--override '" + std::string(assignment) +
                      "': expected section.key=value");
  const std::string section(trim(assignment.substr(0, dot)));
  const std::string key(trim(assignment.substr(dot + 1, eq - dot - 1)));
  if (!values_.contains(section))
    throw ConfigError("--override '" + std::string(assignment) + "': unknown section [" +
                      section + "]");
  if (!values_[section].contains(key))
    throw ConfigError("--override '" + std::string(assignment) + "': unknown key '" + key +
                      "' in [" + section + "]");
  values_[section][key] = Entry{std::string(trim(assignment.substr(eq + 1))),
                                "--override " + section + "." + key, 0};
}

void Config::set(const std::string& section, const std::string& key, std::string value,
                 std::string origin, int line) {
  if (!has(section, key)) throw ConfigError("unknown config key " + section + "." + key);
  values_[section][key] = Entry{std::move(value), std::move(origin), line};
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = values_.find(section);
  return s != values_.end() && s->second.contains(key);
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  const auto s = values_.find(section);
  if (s == values_.end()) throw ConfigError("unknown config section [" + section + "]");
  const auto k = s->second.find(key);
  if (k == s->second.end()) throw ConfigError("unknown config key " + section + "." + key);
  return k->second;
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
  const Entry& e = entry(section, key);
  throw ConfigError(e.origin + ": " + section + "." + key + " = '" + e.value + "': " + message,
                    e.line);
}

double Config::real(const std::string& section, const std::string& key) const {
  try {
    return parse_double(text(section, key));
  } catch (const InvalidInput& ex) {
    fail(section, key, ex.what());
  }
}

std::int64_t Config::integer(const std::string& section, const std::string& key) const {
  try {
    return parse_int(text(section, key));
  } catch (const InvalidInput& ex) {
    fail(section, key, ex.what());
  }
}

std::uint64_t Config::unsigned_integer(const std::string& section, const std::string& key) const {
  try {
    return parse_uint(text(section, key));
  } catch (const InvalidInput& ex) {
    fail(section, key, ex.what());
  }
}

bool Config::boolean(const std::string& section, const std::string& key) const {
  try {
    return parse_bool(text(section, key));
  } catch (const InvalidInput& ex) {
    fail(section, key, ex.what());
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [section, keys] : values_)
    for (const auto& [key, e] : keys) out += section + "." + key + "=" + e.value + "\n";
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

}  // namespace cascadeq
