#include "dtn/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dtn/config.hpp"
#include "dtn/errors.hpp"

namespace dtn {

std::string to_string(PacketStatus s) {
  switch (s) {
    case PacketStatus::kInFlight: return "in-flight";
    case PacketStatus::kDelivered: return "delivered";
    case PacketStatus::kDroppedTtl: return "dropped-ttl";
    case PacketStatus::kDroppedBuffer: return "dropped-buffer";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string metrics_csv_header() {
  return "scenario,seed,policy,delivery_rate,mean_delay_s,mean_forwards";
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  os << r.scenario_id << ',' << r.seed << ',' << r.policy << ',' << format_double(r.delivery_rate)
     << ',' << format_double(r.mean_delay) << ',' << format_double(r.mean_forwards);
  return os.str();
}

void write_packets_csv(const MetricsReport& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open '" + path + "' for writing");
  f << "# digest=" << digest_hex(r.config_digest) << " seed=" << r.seed << " policy=" << r.policy
    << "\n";
  f << "packet_id,src,dst,created,status,delivered_at,forwards\n";
  for (const PacketRecord& p : r.packets) {
    f << p.id << ',' << p.src << ',' << p.dst << ',' << p.created << ',' << to_string(p.status)
      << ',';
    if (p.delivered_at >= 0) f << p.delivered_at;
    f << ',' << p.forwards << '\n';
  }
}

void write_decision_log_csv(const std::vector<DecisionRecord>& log, const std::string& path,
                            uint64_t digest, uint64_t seed) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open '" + path + "' for writing");
  f << "# digest=" << digest_hex(digest) << " seed=" << seed << "\n";
  f << "t,packet,holder,chosen,explore,n_fast,n_slow,chose_fast,dest_group_present,"
       "chose_dest_group,dest_is_nbr\n";
  for (const DecisionRecord& d : log) {
    f << d.t << ',' << d.packet << ',' << d.holder << ',' << d.chosen << ',' << (d.explored ? 1 : 0)
      << ',' << d.n_fast << ',' << d.n_slow << ',' << (d.chose_fast ? 1 : 0) << ','
      << (d.dest_group_present ? 1 : 0) << ',' << (d.chose_dest_group ? 1 : 0) << ','
      << (d.dest_is_nbr ? 1 : 0) << '\n';
  }
}

std::vector<DecisionRecord> read_decision_log_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open decision log '" + path + "'");
  std::vector<DecisionRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    DecisionRecord d{};
    int explored, chose_fast, grp_present, chose_grp, dest_nbr;
    int got = std::sscanf(line.c_str(), "%d,%d,%d,%d,%d,%d,%d,%d,%d,%d,%d", &d.t, &d.packet,
                          &d.holder, &d.chosen, &explored, &d.n_fast, &d.n_slow, &chose_fast,
                          &grp_present, &chose_grp, &dest_nbr);
    if (got != 11)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed decision row");
    d.explored = explored != 0;
    d.chose_fast = chose_fast != 0;
    d.dest_group_present = grp_present != 0;
    d.chose_dest_group = chose_grp != 0;
    d.dest_is_nbr = dest_nbr != 0;
    out.push_back(d);
  }
  return out;
}

}  // namespace dtn
