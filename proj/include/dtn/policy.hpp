#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dtn/packet.hpp"
#include "dtn/rng.hpp"

namespace dtn {

class World;

// One (s, a, r, s') tuple. next_candidates holds the feature rows of every
// candidate action at the packet's next decision epoch; empty iff terminal.
struct Experience {
  Eigen::VectorXd state;   // kStateDim
  Eigen::VectorXd action;  // kActionDim
  double reward = 0;
  Eigen::MatrixXd next_candidates;  // n x kFeatureDim
  bool terminal = false;
  int t = 0;
};

struct Decision {
  int packet_id = -1;
  int chosen = -1;
  bool explored = false;
  std::vector<double> q_values;  // per candidate; empty for heuristics
};

// One row of the decision log (evaluation runs only). n_fast/n_slow count
// the neighbor candidates by speed class; group fields apply to rpgm runs.
struct DecisionRecord {
  int t, packet, holder, chosen;
  bool explored;
  int n_fast, n_slow;
  bool chose_fast;
  bool dest_group_present;  // neighbors from both the destination's group and outside it
  bool chose_dest_group;
  bool dest_is_nbr;
};

enum class Transition { kStay, kTransmit, kDelivery, kDrop };

inline double reward_for(Transition tr, double gamma) {
  switch (tr) {
    case Transition::kStay: return -1.0;
    case Transition::kTransmit: return -2.0;
    case Transition::kDelivery: return 0.0;
    case Transition::kDrop: return -2.0 / (1.0 - gamma);
  }
  return 0.0;
}

class ForwardingPolicy {
 public:
  virtual ~ForwardingPolicy() = default;
  // candidates: Nbr(v) plus v itself, ascending by node id. feature_rows is
  // one row per candidate (state|action), only built when the policy asks
  // for it or the run is collecting experiences; nullptr otherwise.
  virtual int decide(const World& world, int v, const Packet& p,
                     const std::vector<int>& candidates, const Eigen::MatrixXd* feature_rows,
                     Rng& rng, Decision& out) = 0;
  virtual bool needs_feature_rows() const { return false; }
  virtual std::string name() const = 0;
  // per-run state (seek-and-focus phase bookkeeping); default none
  virtual void reset() {}
};

}  // namespace dtn
