#pragma once

#include <map>
#include <string>
#include <vector>

#include "dtn/config.hpp"
#include "dtn/metrics.hpp"
#include "dtn/qnet.hpp"

namespace dtn {

// An evaluation campaign: scenarios x policies x seeds, paired seeds across
// policies. Policy specs: drl-cl / drl-base (model file required), utility,
// seek-focus, random, oracle.
struct Campaign {
  std::vector<std::string> scenario_paths;
  std::vector<std::string> policies;
  std::map<std::string, std::string> model_paths;  // policy name -> model file
  std::vector<uint64_t> seeds;
  std::string outdir = "out";
  double utility_theta = 10.0;
  bool decision_logs = true;
};

Campaign load_campaign(const std::string& path);

struct CampaignResult {
  std::vector<MetricsReport> runs;
  std::vector<std::string> decision_logs;  // aligned with runs; empty when not written
  std::string runs_csv;                    // per-run rows
  std::string summary_csv;                 // mean + 95% CI per scenario x policy
  long dominance_violations = -1;          // -1: no oracle in the campaign
  long dominance_compared = 0;
};

// Runs one (scenario, policy, seed) cell in-process.
MetricsReport run_cell(const SimConfig& cfg, const std::string& policy_name,
                       const QNetwork* model, double utility_theta,
                       std::vector<DecisionRecord>* decisions);

CampaignResult run_campaign(const Campaign& campaign);

// Student-t 97.5% quantile for the given degrees of freedom (95% two-sided CI).
double t_quantile_975(int df);

struct SummaryRow {
  std::string scenario, policy;
  int n = 0;
  double delivery_mean = 0, delivery_ci = 0;
  double delay_mean = 0, delay_ci = 0;
  double forwards_mean = 0, forwards_ci = 0;
};

std::vector<SummaryRow> summarize(const std::vector<MetricsReport>& runs);

}  // namespace dtn
