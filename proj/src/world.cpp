#include "dtn/world.hpp"

#include <algorithm>
#include <cmath>

#include "dtn/errors.hpp"

namespace dtn {

std::vector<Packet> TrafficGen::step(int t) {
  std::vector<Packet> born;
  if (t >= cfg_.duration - cfg_.cooldown) return born;  // cool-down: nothing new

  int new_flows = rng_.poisson(cfg_.flow_rate());
  for (int i = 0; i < new_flows; ++i) {
    Flow f;
    f.id = next_flow_id_++;
    f.src = rng_.uniform_int(cfg_.node_count);
    f.dst = rng_.uniform_int(cfg_.node_count - 1);
    if (f.dst >= f.src) ++f.dst;
    f.start = t;
    int len = static_cast<int>(std::llround(rng_.exponential(cfg_.flow_duration_mean)));
    f.end = t + std::max(1, len);
    flows_.push_back(f);
  }

  for (const Flow& f : flows_) {
    if (t < f.start || t >= f.end) continue;
    int count = rng_.poisson(cfg_.packet_rate);
    for (int i = 0; i < count; ++i) {
      Packet p;
      p.id = next_packet_id_++;
      p.flow = f.id;
      p.src = f.src;
      p.dst = f.dst;
      p.created_at = t;
      p.ttl_remaining = cfg_.initial_ttl;
      p.holder = f.src;
      p.visited = {f.src};
      born.push_back(p);
    }
  }
  // drop expired flows once nothing can reference them
  std::erase_if(flows_, [t](const Flow& f) { return f.end <= t; });
  return born;
}

World::World(const SimConfig& cfg)
    : cfg_(cfg), mobility_(cfg), traffic_(cfg), policy_rng_(Rng(cfg.rng_seed).fork(0x706f6cull)) {
  cfg_.validate();
  const auto& pos = mobility_.positions();
  nodes_.reserve(cfg_.node_count);
  for (int i = 0; i < cfg_.node_count; ++i)
    nodes_.emplace_back(i, cfg_.node_count, pos[i], cfg_.features);
  nbrs_.assign(cfg_.node_count, {});
  phase_move_and_neighbors();
}

std::vector<int> World::candidate_set(int v) const {
  std::vector<int> cands = nbrs_[v];
  cands.insert(std::lower_bound(cands.begin(), cands.end(), v), v);
  return cands;
}

void World::phase_move_and_neighbors() {
  mobility_.advance_to(t_);
  const auto& pos = mobility_.positions();
  for (int i = 0; i < cfg_.node_count; ++i) nodes_[i].pos = pos[i];
  const double r2 = cfg_.tx_range * cfg_.tx_range;
  for (auto& nb : nbrs_) nb.clear();
  for (int i = 0; i < cfg_.node_count; ++i)
    for (int j = i + 1; j < cfg_.node_count; ++j)
      if ((pos[i] - pos[j]).squaredNorm() <= r2) {
        nbrs_[i].push_back(j);
        nbrs_[j].push_back(i);
      }
}

void World::phase_tick_and_exchange() {
  if (t_ > 0)
    for (auto& node : nodes_) tick_node(node, t_, cfg_.features);

  // Merge from post-tick snapshots so exchange is order-independent and
  // information moves at most one hop per timestep.
  std::vector<std::vector<PeerInfo>> snap(cfg_.node_count);
  for (int v = 0; v < cfg_.node_count; ++v)
    if (!nbrs_[v].empty()) snap[v] = nodes_[v].peers;
  const double vbar = cfg_.travel_speed();
  for (int v = 0; v < cfg_.node_count; ++v) {
    for (int u : nbrs_[v]) {
      double dist = (nodes_[v].pos - nodes_[u].pos).norm();
      meet(nodes_[v], u, nodes_[u].pos, snap[u], dist, t_, vbar);
    }
  }
}

void World::phase_traffic() {
  for (Packet& p : traffic_.step(t_)) {
    ++generated_;
    NodeState& src = nodes_[p.src];
    if (static_cast<int>(src.queue.size()) >= cfg_.buffer_cap) {
      p.status = PacketStatus::kDroppedBuffer;  // born into a full buffer
      ++dropped_buffer_;
    } else {
      src.queue.push_back(p.id);
    }
    packets_.push_back(std::move(p));
    pending_.emplace_back();
  }
}

void World::finish_terminal(Packet& p, double reward) {
  if (!experience_sink) return;
  PendingExp& pe = pending_[p.id];
  if (!pe.active) return;  // never made a decision
  Experience e;
  e.state = std::move(pe.state);
  e.action = std::move(pe.action);
  e.reward = reward;
  e.terminal = true;
  e.t = t_;
  experience_sink->push_back(std::move(e));
  pe.active = false;
}

void World::phase_decide(ForwardingPolicy& policy) {
  struct Move {
    int packet, from, to;
  };
  // freeze the decision epochs: queues as of the start of the phase,
  // excluding packets created this timestep
  std::vector<Move> moves;
  const bool training = experience_sink != nullptr;
  const bool want_rows = training || policy.needs_feature_rows();
  const FeatureView w = view();

  for (int v = 0; v < cfg_.node_count; ++v) {
    // snapshot: arrivals are appended later, stays keep their slot
    std::vector<int> epoch = nodes_[v].queue;
    std::vector<int> cands;
    Eigen::MatrixXd rows;
    Eigen::VectorXd state;
    int state_for_dst = -1;
    for (int pid : epoch) {
      Packet& p = packets_[pid];
      if (p.created_at >= t_) continue;  // first decision comes next step
      if (cands.empty()) cands = candidate_set(v);
      if (want_rows) {
        if (state_for_dst != p.dst) {
          state = state_features(w, p, v, p.dst);
          state_for_dst = p.dst;
        }
        state[0] = norm_count(p.ttl_remaining, cfg_.initial_ttl);  // per packet
        rows.resize(static_cast<int>(cands.size()), kFeatureDim);
        for (int c = 0; c < static_cast<int>(cands.size()); ++c) {
          rows.row(c).segment(0, kStateDim) = state;
          rows.row(c).segment(kStateDim, kActionDim) =
              action_features(w, p, cands[c], v, p.dst);
        }
        // hand the completed (s,a,r) from the previous epoch its s' rows
        if (training && pending_[pid].active) {
          Experience e;
          e.state = pending_[pid].state;
          e.action = pending_[pid].action;
          e.reward = pending_[pid].reward;
          e.next_candidates = rows;
          e.terminal = false;
          e.t = t_;
          experience_sink->push_back(std::move(e));
          pending_[pid].active = false;
        }
      }
      Decision dec;
      dec.packet_id = pid;
      int chosen = policy.decide(*this, v, p, cands, want_rows ? &rows : nullptr,
                                 policy_rng_, dec);
      if (decision_log) {
        DecisionRecord rec{};
        rec.t = t_;
        rec.packet = pid;
        rec.holder = v;
        rec.chosen = chosen;
        rec.explored = dec.explored;
        const auto& meta = mobility_.meta();
        for (int u : nbrs_[v]) (meta[u].fast ? rec.n_fast : rec.n_slow)++;
        rec.chose_fast = chosen != v && meta[chosen].fast;
        if (meta[p.dst].group >= 0) {
          bool in_group = false, out_group = false;
          for (int u : nbrs_[v])
            (meta[u].group == meta[p.dst].group ? in_group : out_group) = true;
          rec.dest_group_present = in_group && out_group;
          rec.chose_dest_group = chosen != v && meta[chosen].group == meta[p.dst].group;
        }
        rec.dest_is_nbr =
            std::binary_search(nbrs_[v].begin(), nbrs_[v].end(), p.dst);
        decision_log->push_back(rec);
      }
      if (training) {
        PendingExp& pe = pending_[pid];
        pe.state = state;
        int idx = static_cast<int>(std::lower_bound(cands.begin(), cands.end(), chosen) -
                                   cands.begin());
        pe.action = rows.row(idx).segment(kStateDim, kActionDim);
        pe.reward =
            reward_for(chosen == v ? Transition::kStay : Transition::kTransmit, reward_gamma);
        pe.active = true;
      }
      if (chosen != v) moves.push_back({pid, v, chosen});
    }
  }

  // apply: transmitting packets leave first, then arrivals in decision order
  for (const Move& m : moves) {
    auto& q = nodes_[m.from].queue;
    q.erase(std::find(q.begin(), q.end(), m.packet));
  }
  for (const Move& m : moves) {
    Packet& p = packets_[m.packet];
    ++p.forwards;
    if (m.to == p.dst) {
      p.status = PacketStatus::kDelivered;
      p.delivered_at = t_;
      p.holder = p.dst;
      if (!p.has_visited(p.dst)) p.visited.push_back(p.dst);
      ++delivered_;
      finish_terminal(p, reward_for(Transition::kDelivery, reward_gamma));
      continue;
    }
    NodeState& target = nodes_[m.to];
    if (static_cast<int>(target.queue.size()) >= cfg_.buffer_cap) {
      p.status = PacketStatus::kDroppedBuffer;
      ++dropped_buffer_;
      finish_terminal(p, reward_for(Transition::kDrop, reward_gamma));
      continue;
    }
    target.queue.push_back(p.id);
    p.holder = m.to;
    if (!p.has_visited(m.to)) p.visited.push_back(m.to);
  }
}

void World::phase_ttl() {
  for (Packet& p : packets_) {
    if (p.status != PacketStatus::kInFlight) continue;
    if (--p.ttl_remaining <= 0) {
      p.ttl_remaining = 0;
      p.status = PacketStatus::kDroppedTtl;
      ++dropped_ttl_;
      auto& q = nodes_[p.holder].queue;
      q.erase(std::find(q.begin(), q.end(), p.id));
      finish_terminal(p, reward_for(Transition::kDrop, reward_gamma));
    }
  }
}

void World::step(ForwardingPolicy& policy) {
  if (t_ >= cfg_.duration) throw SimError("step() past configured duration");
  phase_move_and_neighbors();
  phase_tick_and_exchange();
  phase_traffic();
  phase_decide(policy);
  phase_ttl();
  ++t_;
}

void World::run(ForwardingPolicy& policy) {
  policy.reset();
  while (t_ < cfg_.duration) step(policy);
}

MetricsReport summarize_packets(const std::vector<Packet>& packets) {
  MetricsReport r;
  r.generated = static_cast<long>(packets.size());
  double delay_sum = 0, fwd_sum = 0;
  for (const Packet& p : packets) {
    switch (p.status) {
      case PacketStatus::kDelivered:
        ++r.delivered;
        delay_sum += p.delivered_at - p.created_at;
        fwd_sum += p.forwards;
        break;
      case PacketStatus::kDroppedTtl: ++r.dropped_ttl; break;
      case PacketStatus::kDroppedBuffer: ++r.dropped_buffer; break;
      case PacketStatus::kInFlight: break;
    }
    r.packets.push_back(
        {p.id, p.src, p.dst, p.created_at, p.status, p.delivered_at, p.forwards});
  }
  r.delivery_rate = r.generated > 0 ? static_cast<double>(r.delivered) / r.generated : 0.0;
  r.mean_delay = r.delivered > 0 ? delay_sum / r.delivered : 0.0;
  r.mean_forwards = r.delivered > 0 ? fwd_sum / r.delivered : 0.0;
  return r;
}

MetricsReport World::collect_metrics(const std::string& policy_name) const {
  for (const Packet& p : packets_)
    if (p.status == PacketStatus::kInFlight)
      throw SimError("collect_metrics: packet " + std::to_string(p.id) +
                     " still in flight; cooldown is too short for the configured TTL");
  MetricsReport r = summarize_packets(packets_);
  r.scenario_id = cfg_.scenario_id;
  r.policy = policy_name;
  r.seed = cfg_.rng_seed;
  r.config_digest = config_digest(cfg_);
  return r;
}

}  // namespace dtn
