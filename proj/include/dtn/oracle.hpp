#pragma once

#include <string>
#include <vector>

#include "dtn/config.hpp"
#include "dtn/metrics.hpp"

namespace dtn {

// Epidemic flooding reference. Copies spread one hop per timestep over the
// same mobility and traffic streams as any policy run with the same config
// (traffic has its own RNG stream, so packets pair exactly). Copies ignore
// buffers and TTLs; a packet's delay is its first copy's arrival and its
// forwards count is that copy's hop count.
struct OracleCopyHop {
  int packet_id;
  int node;    // infected node
  int parent;  // who copied to it
  int t;
  int hops;    // path length from the source
};

struct OracleResult {
  MetricsReport report;
  std::vector<OracleCopyHop> winning_paths;  // source-to-destination hops of first copies
};

OracleResult oracle_run(const SimConfig& cfg);

void write_oracle_paths_csv(const OracleResult& r, const std::string& path);

}  // namespace dtn
