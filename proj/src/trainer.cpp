#include "dtn/trainer.hpp"

#include <fstream>
#include <sstream>

#include "dtn/drl_policy.hpp"
#include "dtn/errors.hpp"
#include "dtn/metrics.hpp"
#include "dtn/world.hpp"

namespace dtn {

namespace {

void round_update(QNetwork& net, ReplayStore& store, const CLPlan& plan, Rng& rng,
                  const std::string& scenario_id, int round, std::vector<RoundLoss>* losses) {
  if (store.current().items.empty()) return;  // nothing gathered yet: skip the round
  auto samples = balanced_sample(store, plan.alpha, rng);
  if (samples.empty()) return;
  auto batches = interleave_batches(samples, plan.batch, rng);

  // regression targets come from a snapshot frozen at the round boundary
  const QNetwork snapshot = net;
  std::vector<TrainBatch> train;
  train.reserve(batches.size());
  for (const auto& batch : batches) {
    TrainBatch tb;
    tb.X.resize(static_cast<int>(batch.size()), net.input_dim());
    for (size_t i = 0; i < batch.size(); ++i) {
      tb.X.row(static_cast<int>(i)).segment(0, kStateDim) = batch[i]->state;
      tb.X.row(static_cast<int>(i)).segment(kStateDim, kActionDim) = batch[i]->action;
    }
    tb.y = bellman_targets(snapshot, batch, net.hyper.gamma);
    train.push_back(std::move(tb));
  }
  EpochTrace trace = train_epochs(net, train, rng);
  if (losses) {
    RoundLoss rl;
    rl.scenario_id = scenario_id;
    rl.round = round;
    rl.sample_n = samples.front().size();
    rl.train_first = trace.train_loss.front();
    rl.train_last = trace.train_loss.back();
    rl.val_last = trace.val_loss.back();
    losses->push_back(rl);
  }
}

}  // namespace

void train_scenario(QNetwork& net, const SimConfig& scenario, const CLPlan& plan,
                    ReplayStore& store, std::vector<RoundLoss>* losses) {
  if (net.schema_hash != store.schema_hash)
    throw SchemaError("train_scenario: network and replay store schema mismatch");
  if (!plan.replay && store.datasets.size() > 0) store.datasets.clear();  // sequential mode
  store.datasets.push_back({scenario.scenario_id, {}});

  World world(scenario);
  world.reward_gamma = net.hyper.gamma;
  world.experience_sink = &store.current().items;
  DrlPolicy policy(&net, plan.epsilon);
  Rng rng = Rng(plan.train_seed).fork(fnv1a64(scenario.scenario_id));

  int round = 0;
  for (int t = 0; t < scenario.duration; ++t) {
    world.step(policy);
    if ((t + 1) % plan.round_len == 0)
      round_update(net, store, plan, rng, scenario.scenario_id, ++round, losses);
  }
}

QNetwork train_cl(const CLPlan& plan, ReplayStore& store, std::vector<RoundLoss>* losses) {
  if (plan.scenarios.empty()) throw ConfigError("training plan has no scenarios");
  const FeatureParams& fp = plan.scenarios.front().features;
  store.schema_hash = schema_hash(fp);
  QNetwork net(QNetwork::default_dims(kFeatureDim), store.schema_hash, plan.train_seed,
               plan.hyper);
  for (const SimConfig& scenario : plan.scenarios)
    train_scenario(net, scenario, plan, store, losses);
  return net;
}

QNetwork fine_tune(const QNetwork& base, const SimConfig& scenario, int budget_steps,
                   int round_len, const CLPlan& plan, std::vector<RoundLoss>* losses) {
  QNetwork net = base;
  if (budget_steps <= 0) return net;
  if (net.schema_hash != schema_hash(scenario.features))
    throw SchemaError("fine_tune: model schema does not match runtime feature schema");

  SimConfig cfg = scenario;
  cfg.duration = budget_steps;
  cfg.cooldown = 0;
  CLPlan local = plan;
  local.round_len = round_len;

  ReplayStore store;
  store.schema_hash = net.schema_hash;
  local.replay = true;  // single dataset: the fine-tuning data itself
  train_scenario(net, cfg, local, store, losses);
  return net;
}

CLPlan load_plan(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open plan '" + path + "'");
  CLPlan plan;
  std::string line;
  int lineno = 0;
  std::string dir;
  if (auto slash = path.find_last_of('/'); slash != std::string::npos)
    dir = path.substr(0, slash + 1);
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string key, eq, val;
    if (!(is >> key)) continue;
    if (!(is >> eq >> val) || eq != "=")
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    if (key == "scenario") {
      std::string p = val;
      if (!p.empty() && p[0] != '/' && !dir.empty()) p = dir + p;
      plan.scenarios.push_back(load_scenario(p));
    } else if (key == "alpha") plan.alpha = std::stod(val);
    else if (key == "batch") plan.batch = std::stoi(val);
    else if (key == "round_len") plan.round_len = std::stoi(val);
    else if (key == "epsilon") plan.epsilon = std::stod(val);
    else if (key == "lr") plan.hyper.lr = std::stod(val);
    else if (key == "epochs") plan.hyper.epochs = std::stoi(val);
    else if (key == "gamma") plan.hyper.gamma = std::stod(val);
    else if (key == "val_split") plan.hyper.val_split = std::stod(val);
    else if (key == "train_seed") plan.train_seed = std::stoull(val);
    else if (key == "replay") plan.replay = val != "0" && val != "false";
    else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (plan.scenarios.empty()) throw ConfigError(path + ": plan needs at least one scenario");
  plan.hyper.batch = plan.batch;
  return plan;
}

void write_loss_csv(const std::vector<RoundLoss>& losses, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open '" + path + "' for writing");
  f << "scenario,round,sample_n,train_loss_first,train_loss_last,val_loss\n";
  for (const auto& l : losses)
    f << l.scenario_id << ',' << l.round << ',' << l.sample_n << ','
      << format_double(l.train_first) << ',' << format_double(l.train_last) << ','
      << format_double(l.val_last) << '\n';
}

}  // namespace dtn
