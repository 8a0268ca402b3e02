#include "dtn/node_state.hpp"

#include "dtn/errors.hpp"

namespace dtn {

NodeState::NodeState(int node_id, int n, Vec2 position, const FeatureParams& p)
    : id(node_id), pos(position) {
  PeerInfo init;
  init.aoi = p.init_timer;
  init.timer = p.init_timer;
  peers.assign(n, init);
  disp_short = p.distance_scale / 20.0;
  disp_long = p.distance_scale / 5.0;
  anchor_short = anchor_long = pos;
  contact_age = p.init_timer;
}

void tick_node(NodeState& v, int t, const FeatureParams& p) {
  if (t <= v.last_tick) throw SimError("tick_node called twice for t=" + std::to_string(t));
  v.last_tick = t;
  for (auto& peer : v.peers) {
    peer.aoi += 1.0;
    peer.timer += 1.0;
  }
  v.contact_age += 1.0;

  const double b = p.dispersion_beta;
  v.dmax_short = std::max(v.dmax_short, (v.pos - v.anchor_short).norm());
  if (t % p.dispersion_short == 0) {
    v.disp_short = b * v.dmax_short + (1.0 - b) * v.disp_short;
    v.anchor_short = v.pos;
    v.dmax_short = 0;
  }
  v.dmax_long = std::max(v.dmax_long, (v.pos - v.anchor_long).norm());
  if (t % p.dispersion_long == 0) {
    v.disp_long = b * v.dmax_long + (1.0 - b) * v.disp_long;
    v.anchor_long = v.pos;
    v.dmax_long = 0;
  }
}

void meet(NodeState& v, int u_id, const Vec2& u_pos, const std::vector<PeerInfo>& u_peers,
          double dist, int t, double travel_speed) {
  PeerInfo& direct = v.peers[u_id];
  direct.aoi = 0;
  direct.timer = 0;
  direct.last_met = t;
  direct.loc_known = true;
  direct.loc = u_pos;
  direct.heard = true;
  v.contact_age = 0;

  const double penalty = dist / travel_speed;
  const int n = static_cast<int>(v.peers.size());
  for (int w = 0; w < n; ++w) {
    if (w == v.id || w == u_id) continue;
    const PeerInfo& theirs = u_peers[w];
    PeerInfo& mine = v.peers[w];
    if (theirs.aoi < mine.aoi) {
      mine.aoi = theirs.aoi;
      mine.loc_known = theirs.loc_known;
      mine.loc = theirs.loc;
      mine.heard = true;
    }
    if (theirs.timer + penalty < mine.timer) {
      mine.timer = theirs.timer + penalty;
      mine.heard = true;
    }
  }
}

int dynamic_connectivity(const NodeState& v, int t, int delta) {
  int count = 0;
  for (int w = 0; w < static_cast<int>(v.peers.size()); ++w) {
    if (w == v.id) continue;
    if (v.peers[w].last_met >= t - delta) ++count;
  }
  return count;
}

}  // namespace dtn
