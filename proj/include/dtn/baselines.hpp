#pragma once

#include <map>

#include "dtn/policy.hpp"

namespace dtn {

// Uniform over Nbr(v) + v. The "uniform" reference curve of the behavior
// analysis.
class RandomPolicy : public ForwardingPolicy {
 public:
  int decide(const World& world, int v, const Packet& p, const std::vector<int>& candidates,
             const Eigen::MatrixXd* feature_rows, Rng& rng, Decision& out) override;
  std::string name() const override { return "random"; }
};

// Transitive-timer forwarding: hand the packet to the neighbor whose timer
// for the destination beats ours by more than theta. Delivers directly when
// the destination is a neighbor.
class UtilityPolicy : public ForwardingPolicy {
 public:
  explicit UtilityPolicy(double theta = 10.0) : theta_(theta) {}
  int decide(const World& world, int v, const Packet& p, const std::vector<int>& candidates,
             const Eigen::MatrixXd* feature_rows, Rng& rng, Decision& out) override;
  std::string name() const override { return "utility"; }

 private:
  double theta_;
};

// Two-phase search: random forwarding (seek) until someone nearby has a
// fresh enough timer for the destination, then greedy timer descent
// (focus); a stall re-enters seek.
class SeekFocusPolicy : public ForwardingPolicy {
 public:
  SeekFocusPolicy(double focus_threshold = 10.0, int stall_timeout = 20)
      : focus_threshold_(focus_threshold), stall_timeout_(stall_timeout) {}
  int decide(const World& world, int v, const Packet& p, const std::vector<int>& candidates,
             const Eigen::MatrixXd* feature_rows, Rng& rng, Decision& out) override;
  std::string name() const override { return "seek-focus"; }
  void reset() override { state_.clear(); }

 private:
  struct PacketState {
    bool focusing = false;
    double best_timer = 1e18;
    int last_progress_t = 0;
  };
  double focus_threshold_;
  int stall_timeout_;
  std::map<int, PacketState> state_;
};

}  // namespace dtn
