#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtn/packet.hpp"
#include "dtn/policy.hpp"

namespace dtn {

struct PacketRecord {
  int id, src, dst, created;
  PacketStatus status;
  int delivered_at;  // -1 if not delivered
  int forwards;
};

// delivery_rate is over all generated packets; the means are over delivered
// packets only.
struct MetricsReport {
  std::string scenario_id;
  std::string policy;
  uint64_t seed = 0;
  uint64_t config_digest = 0;
  double delivery_rate = 0;
  double mean_delay = 0;      // seconds
  double mean_forwards = 0;
  long generated = 0, delivered = 0, dropped_ttl = 0, dropped_buffer = 0;
  std::vector<PacketRecord> packets;
};

MetricsReport summarize_packets(const std::vector<Packet>& packets);

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& r);
void write_packets_csv(const MetricsReport& r, const std::string& path);
void write_decision_log_csv(const std::vector<DecisionRecord>& log, const std::string& path,
                            uint64_t digest, uint64_t seed);
std::vector<DecisionRecord> read_decision_log_csv(const std::string& path);

std::string format_double(double v);  // canonical %.10g used in all CSVs

}  // namespace dtn
