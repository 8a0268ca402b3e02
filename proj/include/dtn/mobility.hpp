#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "dtn/config.hpp"
#include "dtn/rng.hpp"

namespace dtn {

using Vec2 = Eigen::Vector2d;

struct NodeMeta {
  bool fast = false;
  int group = -1;  // rpgm group index, -1 otherwise
};

// Dense per-timestep positions loaded from a trace CSV (t,node_id,x,y at 1 Hz).
struct TraceTable {
  int node_count = 0;
  int duration = 0;                 // timesteps covered: t in [0, duration)
  std::vector<std::vector<Vec2>> pos;  // [t][node]
};

// load_trace validates density: a missing (t, node) sample is a gap error,
// a malformed line is a parse error with its line number.
TraceTable load_trace(const std::string& path);

// Node trajectory source. advance_to(t) must be called with t = 0, 1, 2, ...
// Construction is a pure function of the config (trajectories are paired
// across policies by construction).
class Mobility {
 public:
  explicit Mobility(const SimConfig& cfg);

  void advance_to(int t);
  const std::vector<Vec2>& positions() const { return pos_; }
  const std::vector<NodeMeta>& meta() const { return meta_; }

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
  std::vector<Vec2> pos_;
  std::vector<NodeMeta> meta_;
  int t_ = -1;
};

// Writes a trajectory to the trace CSV format (header `t,node_id,x,y`).
void export_trace(const SimConfig& cfg, int steps, const std::string& out_path);

}  // namespace dtn
