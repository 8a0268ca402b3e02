#pragma once

#include <cstdint>
#include <string>

#include "dtn/errors.hpp"
#include "dtn/schema.hpp"

namespace dtn {

enum class MobilityModel { kRwp, kRpgm, kGrid, kTrace };

std::string to_string(MobilityModel m);
MobilityModel mobility_model_from_string(const std::string& s);

struct MobilitySpec {
  MobilityModel model = MobilityModel::kRwp;
  int slow_count = -1;  // -1: all nodes slow
  int fast_count = 0;
  double pause = 0.0;        // seconds at each waypoint
  int group_count = 1;       // rpgm
  double group_radius = 70;  // rpgm offset disc, metres
  double block_size = 50;    // grid
  std::string trace_path;
};

// Slow nodes move uniformly in [1,5] m/s, fast in [13,17] m/s.
constexpr double kSlowSpeedLo = 1.0, kSlowSpeedHi = 5.0;
constexpr double kFastSpeedLo = 13.0, kFastSpeedHi = 17.0;

struct SimConfig {
  std::string scenario_id = "scenario";
  double area_width = 500.0;
  double area_height = 500.0;
  int node_count = 25;
  double tx_range = 50.0;
  int timestep = 1;  // seconds; the engine is defined at 1 Hz
  int duration = 10000;
  int cooldown = 0;
  int buffer_cap = 200;
  int initial_ttl = 300;
  double flow_arrival_rate = -1.0;  // <0: 0.001 * N / 25
  double packet_rate = 0.01;        // per active flow per timestep
  double flow_duration_mean = 5000.0;
  uint64_t rng_seed = 1;
  MobilitySpec mobility;
  FeatureParams features;
  double mean_speed = -1.0;  // timer travel penalty v-bar; <0: derived from speed mix

  double flow_rate() const {
    return flow_arrival_rate >= 0 ? flow_arrival_rate : 0.001 * node_count / 25.0;
  }
  int slow_count() const {
    return mobility.slow_count < 0 ? node_count - mobility.fast_count : mobility.slow_count;
  }
  double speed_mix_mean() const;
  double travel_speed() const { return mean_speed > 0 ? mean_speed : speed_mix_mean(); }

  void validate() const;  // throws ConfigError
};

// Flat key = value scenario files mirroring the fields above; '#' comments;
// unknown keys rejected.
SimConfig load_scenario(const std::string& path);
SimConfig parse_scenario(const std::string& text, const std::string& origin);
std::string scenario_canonical_text(const SimConfig& cfg);

// Fingerprint of the fully-resolved config; embedded in every output artifact.
uint64_t config_digest(const SimConfig& cfg);
std::string digest_hex(uint64_t digest);

}  // namespace dtn
