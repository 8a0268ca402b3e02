#include "dtn/baselines.hpp"

#include <algorithm>

#include "dtn/world.hpp"

namespace dtn {

int RandomPolicy::decide(const World& world, int v, const Packet& p,
                         const std::vector<int>& candidates, const Eigen::MatrixXd*, Rng& rng,
                         Decision& out) {
  (void)world;
  (void)p;
  (void)v;
  int choice = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
  out.chosen = choice;
  return choice;
}

int UtilityPolicy::decide(const World& world, int v, const Packet& p,
                          const std::vector<int>& candidates, const Eigen::MatrixXd*, Rng&,
                          Decision& out) {
  const auto& nodes = world.nodes();
  int choice = v;
  double own = nodes[v].peers[p.dst].timer;
  double best = own;
  for (int u : candidates) {
    if (u == v) continue;
    if (u == p.dst) {
      choice = u;  // destination in range: hand it over
      break;
    }
    double timer = nodes[u].peers[p.dst].timer;
    if (own - timer > theta_ && timer < best) {
      best = timer;
      choice = u;
    }
  }
  out.chosen = choice;
  return choice;
}

int SeekFocusPolicy::decide(const World& world, int v, const Packet& p,
                            const std::vector<int>& candidates, const Eigen::MatrixXd*, Rng& rng,
                            Decision& out) {
  const auto& nodes = world.nodes();
  PacketState& st = state_[p.id];

  int choice = v;
  double own = nodes[v].peers[p.dst].timer;
  int greedy = v;
  double best = own;
  bool dst_adjacent = false;
  for (int u : candidates) {
    if (u == v) continue;
    if (u == p.dst) dst_adjacent = true;
    double timer = nodes[u].peers[p.dst].timer;
    if (timer < best) {
      best = timer;
      greedy = u;
    }
  }

  if (dst_adjacent) {
    out.chosen = p.dst;
    return p.dst;
  }

  const double local_best = std::min(own, best);
  if (!st.focusing && local_best <= focus_threshold_) {
    st.focusing = true;
    st.best_timer = local_best;
    st.last_progress_t = world.now();
  }
  if (st.focusing) {
    if (local_best < st.best_timer) {
      st.best_timer = local_best;
      st.last_progress_t = world.now();
    }
    if (world.now() - st.last_progress_t > stall_timeout_) {
      st.focusing = false;  // stuck in a local minimum, go back to seeking
    } else {
      choice = best < own ? greedy : v;
      out.chosen = choice;
      return choice;
    }
  }
  // seek: uniform random neighbor when there is one
  if (candidates.size() > 1) {
    do {
      choice = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
    } while (choice == v && candidates.size() > 1);
  }
  out.chosen = choice;
  return choice;
}

}  // namespace dtn
