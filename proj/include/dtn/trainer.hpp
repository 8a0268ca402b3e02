#pragma once

#include <string>
#include <vector>

#include "dtn/config.hpp"
#include "dtn/qnet.hpp"
#include "dtn/replay.hpp"

namespace dtn {

// Continual-learning plan: an ordered scenario sequence plus the round and
// sampling parameters.
struct CLPlan {
  std::vector<SimConfig> scenarios;
  double alpha = 0.1;
  int batch = 32;
  int round_len = 1000;
  double epsilon = 0.1;
  QHyper hyper;
  uint64_t train_seed = 7;
  bool replay = true;  // false: sequential training without frozen datasets
};

CLPlan load_plan(const std::string& path);

struct RoundLoss {
  std::string scenario_id;
  int round = 0;
  size_t sample_n = 0;  // per dataset
  double train_first = 0, train_last = 0, val_last = 0;
};

// Simulates one scenario with the epsilon-greedy policy, training at every
// round boundary on a balanced sample over all stored datasets plus the
// growing current one. The scenario's dataset freezes on return.
void train_scenario(QNetwork& net, const SimConfig& scenario, const CLPlan& plan,
                    ReplayStore& store, std::vector<RoundLoss>* losses);

// Full plan: fresh network, scenarios in order, weights and Adam state
// carried across transitions.
QNetwork train_cl(const CLPlan& plan, ReplayStore& store, std::vector<RoundLoss>* losses);

// Round-based fine-tuning from a base model: replay uses only the data
// gathered in the new scenario; base weights (and optimizer state) are the
// starting point. budget_steps = 0 returns the base unchanged.
QNetwork fine_tune(const QNetwork& base, const SimConfig& scenario, int budget_steps,
                   int round_len, const CLPlan& plan, std::vector<RoundLoss>* losses);

void write_loss_csv(const std::vector<RoundLoss>& losses, const std::string& path);

}  // namespace dtn
