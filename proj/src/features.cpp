#include "dtn/features.hpp"

#include "dtn/errors.hpp"

namespace dtn {

namespace {

int dst_queue_count(const FeatureView& w, const NodeState& node, int d) {
  int count = 0;
  for (int pid : node.queue)
    if (w.packets[pid].dst == d) ++count;
  return count;
}

}  // namespace

Eigen::VectorXd device_path_features(const FeatureView& w, int u, int d) {
  const SimConfig& cfg = w.cfg;
  const FeatureParams& p = cfg.features;
  const NodeState& node = w.nodes[u];
  const double n_nodes = cfg.node_count;
  Eigen::VectorXd f(kDevicePathDim);

  const double degree = static_cast<double>(w.nbrs[u].size());
  f[0] = norm_count(static_cast<double>(node.queue.size()), cfg.buffer_cap);
  f[1] = norm_count_clamped(degree, n_nodes);            // node density, /(N+1)
  f[2] = norm_count_clamped(degree, p.degree_scale);     // node degree, /(S+1)
  f[3] = norm_fraction(dynamic_connectivity(node, w.t, p.dynconn_short), n_nodes);
  f[4] = norm_fraction(dynamic_connectivity(node, w.t, p.dynconn_long), n_nodes);
  f[5] = norm_distance(node.disp_short, p);
  f[6] = norm_distance(node.disp_long, p);
  f[7] = norm_sigmoid(node.contact_age, p);

  int dstq = dst_queue_count(w, node, d);
  if (u == d) {
    // the destination's own path block: everything already "there"
    f[8] = norm_count(dstq, cfg.buffer_cap);
    f[9] = norm_distance(0.0, p);
    f[10] = norm_sigmoid(0.0, p);
    f[11] = norm_sigmoid(0.0, p);
    return f;
  }
  const PeerInfo& info = node.peers[d];
  // a node that has never heard of d reports the conservative init value
  // unless it actually holds packets for d
  double dstq_raw = (info.heard || dstq > 0)
                        ? static_cast<double>(dstq)
                        : p.init_dst_queue_frac * cfg.buffer_cap;
  f[8] = norm_count(dstq_raw, cfg.buffer_cap);
  double dist_raw = info.loc_known ? (node.pos - info.loc).norm() : p.distance_scale / 2.0;
  f[9] = norm_distance(dist_raw, p);
  f[10] = norm_sigmoid(info.timer, p);
  f[11] = norm_sigmoid(info.aoi, p);
  return f;
}

Eigen::VectorXd state_features(const FeatureView& w, const Packet& p, int v, int d) {
  if (d < 0 || d >= w.cfg.node_count)
    throw SimError("state_features: unknown destination id " + std::to_string(d));
  Eigen::VectorXd out(kStateDim);
  out[0] = norm_count(static_cast<double>(p.ttl_remaining), w.cfg.initial_ttl);
  Eigen::VectorXd own = device_path_features(w, v, d);
  out.segment(1, kDevicePathDim) = own;

  const auto& nbrs = w.nbrs[v];
  Eigen::VectorXd mn, mx, mean;
  if (nbrs.empty()) {
    mn = mx = mean = own;
  } else {
    mn = mx = mean = device_path_features(w, nbrs[0], d);
    for (size_t i = 1; i < nbrs.size(); ++i) {
      Eigen::VectorXd f = device_path_features(w, nbrs[i], d);
      mn = mn.cwiseMin(f);
      mx = mx.cwiseMax(f);
      mean += f;
    }
    mean /= static_cast<double>(nbrs.size());
  }
  for (int j = 0; j < kDevicePathDim; ++j) {
    out[1 + kDevicePathDim + 3 * j] = mn[j];
    out[1 + kDevicePathDim + 3 * j + 1] = mx[j];
    out[1 + kDevicePathDim + 3 * j + 2] = mean[j];
  }
  return out;
}

Eigen::VectorXd action_features(const FeatureView& w, const Packet& p, int u, int v, int d) {
  Eigen::VectorXd out(kActionDim);
  out.segment(0, kDevicePathDim) = device_path_features(w, u, d);
  out[kDevicePathDim] = p.has_visited(u) ? 1.0 : 0.0;
  out[kDevicePathDim + 1] = (u != v) ? 1.0 : 0.0;
  return out;
}

}  // namespace dtn
