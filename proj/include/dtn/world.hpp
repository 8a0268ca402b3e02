#pragma once

#include <optional>
#include <vector>

#include "dtn/config.hpp"
#include "dtn/features.hpp"
#include "dtn/metrics.hpp"
#include "dtn/mobility.hpp"
#include "dtn/policy.hpp"

namespace dtn {

// Poisson flow/packet arrivals. Consumes its own RNG stream, so the packet
// sequence is a pure function of (config, seed) and paired runs see
// identical traffic regardless of policy.
class TrafficGen {
 public:
  explicit TrafficGen(const SimConfig& cfg)
      : cfg_(cfg), rng_(Rng(cfg.rng_seed).fork(0x7472616666ull)) {}

  // New packets for timestep t (empty during cooldown).
  std::vector<Packet> step(int t);
  const std::vector<Flow>& flows() const { return flows_; }

 private:
  SimConfig cfg_;
  Rng rng_;
  std::vector<Flow> flows_;
  int next_flow_id_ = 0;
  int next_packet_id_ = 0;
};

// Discrete-time engine. One step = move, rebuild neighbors, age tables,
// exchange tables, generate traffic, decide every queued packet, apply
// moves, expire TTLs.
class World {
 public:
  explicit World(const SimConfig& cfg);

  void step(ForwardingPolicy& policy);
  void run(ForwardingPolicy& policy);  // all cfg.duration steps

  // Throws SimError if any packet is still in flight (mis-sized cooldown).
  MetricsReport collect_metrics(const std::string& policy_name) const;

  int now() const { return t_; }
  const SimConfig& config() const { return cfg_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const std::vector<std::vector<int>>& neighbors() const { return nbrs_; }
  const std::vector<Packet>& packets() const { return packets_; }
  const std::vector<NodeMeta>& node_meta() const { return mobility_.meta(); }
  FeatureView view() const { return FeatureView{nodes_, nbrs_, packets_, cfg_, t_}; }
  std::vector<int> candidate_set(int v) const;  // Nbr(v) + v, ascending

  // Training mode: set a sink and every packet decision emits experiences.
  std::vector<Experience>* experience_sink = nullptr;
  // Evaluation logging.
  std::vector<DecisionRecord>* decision_log = nullptr;
  // Discount used for the drop reward r_transmit / (1 - gamma).
  double reward_gamma = 0.99;

  long generated() const { return generated_; }
  long delivered() const { return delivered_; }
  long dropped_ttl() const { return dropped_ttl_; }
  long dropped_buffer() const { return dropped_buffer_; }

 private:
  struct PendingExp {
    Eigen::VectorXd state, action;
    double reward = 0;
    bool active = false;
  };

  void phase_move_and_neighbors();
  void phase_tick_and_exchange();
  void phase_traffic();
  void phase_decide(ForwardingPolicy& policy);
  void phase_ttl();
  void finish_terminal(Packet& p, double reward);

  SimConfig cfg_;
  Mobility mobility_;
  TrafficGen traffic_;
  Rng policy_rng_;
  std::vector<NodeState> nodes_;
  std::vector<std::vector<int>> nbrs_;
  std::vector<Packet> packets_;
  std::vector<PendingExp> pending_;
  int t_ = 0;
  long generated_ = 0, delivered_ = 0, dropped_ttl_ = 0, dropped_buffer_ = 0;
};

}  // namespace dtn
