#pragma once

#include <limits>
#include <vector>

#include "dtn/mobility.hpp"
#include "dtn/schema.hpp"

namespace dtn {

constexpr int kNeverMet = std::numeric_limits<int>::min() / 2;

// v's knowledge about one other node w.
struct PeerInfo {
  double aoi = 200.0;    // age of w's recorded location (ticks up from init)
  double timer = 200.0;  // transitive timer: est. time since someone met w
  int last_met = kNeverMet;  // last direct meeting timestep
  bool loc_known = false;
  Vec2 loc{0, 0};
  bool heard = false;  // any direct or transitive information about w
};

struct NodeState {
  int id = -1;
  Vec2 pos{0, 0};
  std::vector<int> queue;  // packet ids, FIFO arrival order
  std::vector<PeerInfo> peers;

  // dispersion EWMA state, one running interval per timescale
  double disp_short = 0, disp_long = 0;
  Vec2 anchor_short{0, 0}, anchor_long{0, 0};
  double dmax_short = 0, dmax_long = 0;

  double contact_age;  // time since last direct contact with anyone
  int last_tick = 0;

  NodeState(int node_id, int n, Vec2 position, const FeatureParams& p);
};

// Ages every timer by one second and rolls the dispersion intervals.
// Must run exactly once per node per timestep (before table exchange).
void tick_node(NodeState& v, int t, const FeatureParams& p);

// v meets u at time t: direct observation of u plus transitive merge of u's
// tables (location/AoI adopted where fresher, timers via travel penalty).
// u's tables are passed as a pre-exchange snapshot so merges within a
// timestep are order-independent.
void meet(NodeState& v, int u_id, const Vec2& u_pos, const std::vector<PeerInfo>& u_peers,
          double dist, int t, double travel_speed);

// Unique peers met within the closed window [t - delta, t].
int dynamic_connectivity(const NodeState& v, int t, int delta);

}  // namespace dtn
