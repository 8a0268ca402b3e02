#include "dtn/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dtn {

std::string to_string(MobilityModel m) {
  switch (m) {
    case MobilityModel::kRwp: return "rwp";
    case MobilityModel::kRpgm: return "rpgm";
    case MobilityModel::kGrid: return "grid";
    case MobilityModel::kTrace: return "trace";
  }
  return "?";
}

MobilityModel mobility_model_from_string(const std::string& s) {
  if (s == "rwp") return MobilityModel::kRwp;
  if (s == "rpgm") return MobilityModel::kRpgm;
  if (s == "grid") return MobilityModel::kGrid;
  if (s == "trace") return MobilityModel::kTrace;
  throw ConfigError("unknown mobility_model '" + s + "'");
}

double SimConfig::speed_mix_mean() const {
  const double slow_mean = 0.5 * (kSlowSpeedLo + kSlowSpeedHi);
  const double fast_mean = 0.5 * (kFastSpeedLo + kFastSpeedHi);
  const int slow = slow_count();
  const int fast = mobility.fast_count;
  if (slow + fast <= 0) return slow_mean;
  return (slow * slow_mean + fast * fast_mean) / (slow + fast);
}

void SimConfig::validate() const {
  if (node_count < 2) throw ConfigError(scenario_id + ": node_count must be >= 2");
  if (!(tx_range > 0)) throw ConfigError(scenario_id + ": tx_range must be > 0");
  if (!(area_width > 0) || !(area_height > 0))
    throw ConfigError(scenario_id + ": area must be positive");
  if (timestep != 1) throw ConfigError(scenario_id + ": timestep must be 1 second");
  if (cooldown < 0 || duration <= cooldown)
    throw ConfigError(scenario_id + ": need duration > cooldown >= 0");
  if (buffer_cap < 1) throw ConfigError(scenario_id + ": buffer_cap must be >= 1");
  if (initial_ttl < 1) throw ConfigError(scenario_id + ": initial_ttl must be >= 1");
  if (flow_rate() < 0 || packet_rate < 0 || flow_duration_mean < 0)
    throw ConfigError(scenario_id + ": rates must be >= 0");
  if (mobility.fast_count < 0) throw ConfigError(scenario_id + ": fast_count must be >= 0");
  const int slow = slow_count();
  if (slow < 0 || slow + mobility.fast_count != node_count)
    throw ConfigError(scenario_id + ": speed-class counts must sum to node_count");
  if (mobility.model == MobilityModel::kRpgm && mobility.group_count < 1)
    throw ConfigError(scenario_id + ": group_count must be >= 1");
  if (mobility.model == MobilityModel::kTrace && mobility.trace_path.empty())
    throw ConfigError(scenario_id + ": trace mobility needs trace_path");
  if (!(features.dispersion_beta >= 0 && features.dispersion_beta <= 1))
    throw ConfigError(scenario_id + ": dispersion_beta must be in [0,1]");
}

namespace {

struct KvFile {
  // key -> (value, line number); insertion order preserved for digests
  std::vector<std::pair<std::string, std::string>> items;
  std::map<std::string, int> lines;
};

KvFile parse_kv(const std::string& text, const std::string& origin) {
  KvFile out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [&](std::string s) {
      s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
      s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    out.items.emplace_back(key, val);
    out.lines[key] = lineno;
  }
  return out;
}

double to_double(const std::string& v, const std::string& ctx) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": bad numeric value '" + v + "'");
  }
}

int to_int(const std::string& v, const std::string& ctx) {
  double d = to_double(v, ctx);
  auto i = static_cast<long long>(d);
  if (static_cast<double>(i) != d) throw ConfigError(ctx + ": expected integer, got '" + v + "'");
  return static_cast<int>(i);
}

}  // namespace

SimConfig parse_scenario(const std::string& text, const std::string& origin) {
  static const std::set<std::string> kKnown = {
      "scenario_id",       "area_width",   "area_height",     "node_count",
      "tx_range",          "timestep",     "duration",        "cooldown",
      "buffer_cap",        "initial_ttl",  "flow_arrival_rate", "packet_rate",
      "flow_duration_mean", "rng_seed",    "mobility_model",  "slow_count",
      "fast_count",        "pause",        "group_count",     "group_radius",
      "block_size",        "trace_path",   "dispersion_beta", "mean_speed"};
  KvFile kv = parse_kv(text, origin);
  SimConfig cfg;
  for (const auto& [key, val] : kv.items) {
    const std::string ctx = origin + ":" + std::to_string(kv.lines[key]);
    if (!kKnown.count(key)) throw ConfigError(ctx + ": unknown key '" + key + "'");
    if (key == "scenario_id") cfg.scenario_id = val;
    else if (key == "area_width") cfg.area_width = to_double(val, ctx);
    else if (key == "area_height") cfg.area_height = to_double(val, ctx);
    else if (key == "node_count") cfg.node_count = to_int(val, ctx);
    else if (key == "tx_range") cfg.tx_range = to_double(val, ctx);
    else if (key == "timestep") cfg.timestep = to_int(val, ctx);
    else if (key == "duration") cfg.duration = to_int(val, ctx);
    else if (key == "cooldown") cfg.cooldown = to_int(val, ctx);
    else if (key == "buffer_cap") cfg.buffer_cap = to_int(val, ctx);
    else if (key == "initial_ttl") cfg.initial_ttl = to_int(val, ctx);
    else if (key == "flow_arrival_rate") cfg.flow_arrival_rate = to_double(val, ctx);
    else if (key == "packet_rate") cfg.packet_rate = to_double(val, ctx);
    else if (key == "flow_duration_mean") cfg.flow_duration_mean = to_double(val, ctx);
    else if (key == "rng_seed") cfg.rng_seed = static_cast<uint64_t>(to_double(val, ctx));
    else if (key == "mobility_model") cfg.mobility.model = mobility_model_from_string(val);
    else if (key == "slow_count") cfg.mobility.slow_count = to_int(val, ctx);
    else if (key == "fast_count") cfg.mobility.fast_count = to_int(val, ctx);
    else if (key == "pause") cfg.mobility.pause = to_double(val, ctx);
    else if (key == "group_count") cfg.mobility.group_count = to_int(val, ctx);
    else if (key == "group_radius") cfg.mobility.group_radius = to_double(val, ctx);
    else if (key == "block_size") cfg.mobility.block_size = to_double(val, ctx);
    else if (key == "trace_path") cfg.mobility.trace_path = val;
    else if (key == "dispersion_beta") cfg.features.dispersion_beta = to_double(val, ctx);
    else if (key == "mean_speed") cfg.mean_speed = to_double(val, ctx);
  }
  cfg.validate();
  return cfg;
}

SimConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::string scenario_canonical_text(const SimConfig& cfg) {
  char buf[64];
  auto num = [&](double d) {
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "scenario_id = " << cfg.scenario_id << "\n"
     << "area_width = " << num(cfg.area_width) << "\n"
     << "area_height = " << num(cfg.area_height) << "\n"
     << "node_count = " << cfg.node_count << "\n"
     << "tx_range = " << num(cfg.tx_range) << "\n"
     << "timestep = " << cfg.timestep << "\n"
     << "duration = " << cfg.duration << "\n"
     << "cooldown = " << cfg.cooldown << "\n"
     << "buffer_cap = " << cfg.buffer_cap << "\n"
     << "initial_ttl = " << cfg.initial_ttl << "\n"
     << "flow_arrival_rate = " << num(cfg.flow_rate()) << "\n"
     << "packet_rate = " << num(cfg.packet_rate) << "\n"
     << "flow_duration_mean = " << num(cfg.flow_duration_mean) << "\n"
     << "rng_seed = " << cfg.rng_seed << "\n"
     << "mobility_model = " << to_string(cfg.mobility.model) << "\n"
     << "slow_count = " << cfg.slow_count() << "\n"
     << "fast_count = " << cfg.mobility.fast_count << "\n"
     << "pause = " << num(cfg.mobility.pause) << "\n"
     << "group_count = " << cfg.mobility.group_count << "\n"
     << "group_radius = " << num(cfg.mobility.group_radius) << "\n"
     << "block_size = " << num(cfg.mobility.block_size) << "\n"
     << "trace_path = " << cfg.mobility.trace_path << "\n"
     << "dispersion_beta = " << num(cfg.features.dispersion_beta) << "\n"
     << "mean_speed = " << num(cfg.travel_speed()) << "\n";
  return os.str();
}

uint64_t config_digest(const SimConfig& cfg) { return fnv1a64(scenario_canonical_text(cfg)); }

std::string digest_hex(uint64_t digest) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace dtn
