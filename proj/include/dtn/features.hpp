#pragma once

#include <Eigen/Core>

#include "dtn/config.hpp"
#include "dtn/node_state.hpp"
#include "dtn/packet.hpp"

namespace dtn {

// Read-only snapshot the feature builders work from. All of it is engine
// state frozen for the duration of a timestep's decision phase.
struct FeatureView {
  const std::vector<NodeState>& nodes;
  const std::vector<std::vector<int>>& nbrs;  // sorted node ids
  const std::vector<Packet>& packets;
  const SimConfig& cfg;
  int t;
};

// The 12 normalized device+path features of node u with respect to
// destination d, in schema order.
Eigen::VectorXd device_path_features(const FeatureView& w, int u, int d);

// 49 state features for packet p held at v with destination d:
// ttl, v's device+path block, then min/max/mean aggregates over Nbr(v)
// (v's own block when the neighborhood is empty).
Eigen::VectorXd state_features(const FeatureView& w, const Packet& p, int v, int d);

// 14 action features for next hop u (u == v means stay).
Eigen::VectorXd action_features(const FeatureView& w, const Packet& p, int u, int v, int d);

}  // namespace dtn
