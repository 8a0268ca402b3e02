#pragma once

#include <string>
#include <vector>

#include "dtn/policy.hpp"

namespace dtn {

// Forwarding-preference statistics over one policy's decision logs.
// Qualifying decisions for the speed analysis have both fast and slow
// neighbors; staying counts as not choosing a fast node. The uniform
// baseline is the per-decision fast fraction n_fast / (n_fast + n_slow),
// averaged over the same decisions. Everything is reported twice: over all
// qualifying decisions and excluding those where the destination was a
// neighbor.
struct BehaviorStats {
  long n = 0;                 // qualifying mixed-speed decisions
  double p_choose_fast = 0;
  double uniform_baseline = 0;
  long n_group = 0;           // decisions with both groups present (rpgm)
  double p_choose_dest_group = 0;
};

struct BehaviorReport {
  std::string policy;
  bool empty = true;  // no qualifying decisions at all
  BehaviorStats all;
  BehaviorStats excl_dst_nbr;
};

BehaviorReport analyze_decisions(const std::vector<DecisionRecord>& log,
                                 const std::string& policy);

// Reads one or more decision log CSVs for the same policy and aggregates.
BehaviorReport analyze_decision_files(const std::vector<std::string>& paths,
                                      const std::string& policy);

std::string behavior_csv_header();
std::string behavior_csv_rows(const BehaviorReport& r);

}  // namespace dtn
