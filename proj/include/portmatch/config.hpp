#pragma once

// Flat key=value experiment configuration. Blank lines and lines starting
// with '#' are ignored; list values are comma separated.

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace portmatch {

struct ExperimentConfig {
  std::string command;  // clear | simulate | verify | decompose
  std::size_t n = 8;
  std::string policy = "mvm";
  std::vector<std::string> policies{"mvm", "mwm"};
  std::string instance;
  std::string traffic = "bernoulli";
  std::vector<double> loads{0.5, 0.8, 0.9};
  int seeds = 1;
  std::uint64_t master_seed = 1;
  std::int64_t max_slots = 100000;
  bool ci = true;
  double zipf = 1.25;
  int support = 100;
  std::string burst_source = "input";       // input | edge
  std::string burst_destination = "burst";  // burst | packet
  std::size_t random = 500;
  std::size_t max_ports = 12;
  std::vector<std::string> lemmas;
  std::string output;

  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
  return s;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size())
    throw std::invalid_argument("config: bad number for " + key + ": \"" + v + "\"");
  return x;
}

inline long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size())
    throw std::invalid_argument("config: bad integer for " + key + ": \"" + v + "\"");
  return x;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size())
    throw std::invalid_argument("config: bad unsigned integer for " + key + ": \"" + v + "\"");
  return x;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < 0) throw std::invalid_argument("config: " + key + " must be non-negative");
  return static_cast<std::size_t>(x);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": \"" + v + "\"");
}

}  // namespace detail

/// Applies one key=value assignment to `cfg`.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "command") cfg.command = value;
  else if (key == "n") cfg.n = parse_count(key, value);
  else if (key == "policy") cfg.policy = value;
  else if (key == "policies") cfg.policies = split_list(value);
  else if (key == "instance") cfg.instance = value;
  else if (key == "traffic") cfg.traffic = value;
  else if (key == "loads") {
    cfg.loads.clear();
    for (const auto& s : split_list(value)) cfg.loads.push_back(parse_double(key, s));
  } else if (key == "seeds") cfg.seeds = static_cast<int>(parse_int(key, value));
  else if (key == "master_seed") cfg.master_seed = parse_u64(key, value);
  else if (key == "max_slots") cfg.max_slots = parse_int(key, value);
  else if (key == "ci") cfg.ci = parse_bool(key, value);
  else if (key == "zipf") cfg.zipf = parse_double(key, value);
  else if (key == "support") cfg.support = static_cast<int>(parse_int(key, value));
  else if (key == "burst_source") cfg.burst_source = value;
  else if (key == "burst_destination") cfg.burst_destination = value;
  else if (key == "random") cfg.random = parse_count(key, value);
  else if (key == "max_ports") cfg.max_ports = parse_count(key, value);
  else if (key == "lemmas") cfg.lemmas = split_list(value);
  else if (key == "output") cfg.output = value;
  else throw std::invalid_argument("config: unknown key \"" + key + "\"");
}

inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg = {}) {
  std::istringstream in(text);
  return parse_config(in, std::move(cfg));
}

/// Serialises every field; parse_config(to_text(c)) == c.
inline std::string to_text(const ExperimentConfig& c) {
  using namespace detail;
  std::vector<std::string> loads;
  for (double x : c.loads) loads.push_back(format_double(x));
  std::ostringstream os;
  os << "command=" << c.command << '\n'
     << "n=" << c.n << '\n'
     << "policy=" << c.policy << '\n'
     << "policies=" << join(c.policies) << '\n'
     << "instance=" << c.instance << '\n'
     << "traffic=" << c.traffic << '\n'
     << "loads=" << join(loads) << '\n'
     << "seeds=" << c.seeds << '\n'
     << "master_seed=" << c.master_seed << '\n'
     << "max_slots=" << c.max_slots << '\n'
     << "ci=" << (c.ci ? "true" : "false") << '\n'
     << "zipf=" << format_double(c.zipf) << '\n'
     << "support=" << c.support << '\n'
     << "burst_source=" << c.burst_source << '\n'
     << "burst_destination=" << c.burst_destination << '\n'
     << "random=" << c.random << '\n'
     << "max_ports=" << c.max_ports << '\n'
     << "lemmas=" << join(c.lemmas) << '\n'
     << "output=" << c.output << '\n';
  return os.str();
}

}  // namespace portmatch
