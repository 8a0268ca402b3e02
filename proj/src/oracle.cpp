#include "dtn/oracle.hpp"

#include <fstream>
#include <map>

#include "dtn/errors.hpp"
#include "dtn/mobility.hpp"
#include "dtn/world.hpp"

namespace dtn {

OracleResult oracle_run(const SimConfig& cfg) {
  cfg.validate();
  Mobility mobility(cfg);
  TrafficGen traffic(cfg);
  const int n = cfg.node_count;
  const double r2 = cfg.tx_range * cfg.tx_range;

  struct Infection {
    std::vector<char> holds;  // per node
    std::vector<int> hops;    // per node, hop count of its copy
    std::vector<int> parent;
    std::vector<int> infected_at;
  };
  std::vector<Packet> packets;
  std::vector<Infection> inf;

  OracleResult result;
  std::vector<std::vector<int>> nbrs(n);

  for (int t = 0; t < cfg.duration; ++t) {
    mobility.advance_to(t);
    const auto& pos = mobility.positions();
    for (auto& nb : nbrs) nb.clear();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((pos[i] - pos[j]).squaredNorm() <= r2) {
          nbrs[i].push_back(j);
          nbrs[j].push_back(i);
        }

    for (Packet& p : traffic.step(t)) {
      Infection i;
      i.holds.assign(n, 0);
      i.hops.assign(n, 0);
      i.parent.assign(n, -1);
      i.infected_at.assign(n, -1);
      i.holds[p.src] = 1;
      i.infected_at[p.src] = t;
      packets.push_back(std::move(p));
      inf.push_back(std::move(i));
    }

    // one synchronous flooding round: copies held at the start of the step
    // spread one hop
    for (size_t pid = 0; pid < packets.size(); ++pid) {
      Packet& p = packets[pid];
      if (p.status != PacketStatus::kInFlight || p.created_at >= t) continue;
      Infection& i = inf[pid];
      std::vector<std::pair<int, int>> newly;  // (node, source holder)
      for (int u = 0; u < n; ++u) {
        if (!i.holds[u] || i.infected_at[u] >= t) continue;
        for (int w : nbrs[u]) {
          if (i.holds[w]) continue;
          // first copy to arrive this step wins; scan order makes the
          // lowest-hop parent win ties below
          newly.push_back({w, u});
        }
      }
      for (auto [w, u] : newly) {
        if (i.holds[w] && i.infected_at[w] == t && i.hops[w] <= i.hops[u] + 1) continue;
        if (i.holds[w] && i.infected_at[w] < t) continue;
        i.holds[w] = 1;
        i.hops[w] = i.hops[u] + 1;
        i.parent[w] = u;
        i.infected_at[w] = t;
      }
      if (i.holds[p.dst]) {
        p.status = PacketStatus::kDelivered;
        p.delivered_at = t;
        p.forwards = i.hops[p.dst];
        // record the winning path back to the source
        int node = p.dst;
        while (node != p.src) {
          result.winning_paths.push_back(
              {p.id, node, i.parent[node], i.infected_at[node], i.hops[node]});
          node = i.parent[node];
        }
      }
    }
  }

  MetricsReport rep = summarize_packets(packets);
  rep.scenario_id = cfg.scenario_id;
  rep.policy = "oracle";
  rep.seed = cfg.rng_seed;
  rep.config_digest = config_digest(cfg);
  result.report = std::move(rep);
  return result;
}

void write_oracle_paths_csv(const OracleResult& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open '" + path + "' for writing");
  f << "# digest=" << digest_hex(r.report.config_digest) << " seed=" << r.report.seed << "\n";
  f << "packet_id,node,parent,infected_at,hops\n";
  for (const auto& h : r.winning_paths)
    f << h.packet_id << ',' << h.node << ',' << h.parent << ',' << h.t << ',' << h.hops << '\n';
}

}  // namespace dtn
