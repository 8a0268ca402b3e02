#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dtn/trainer.hpp"

using namespace dtn;

namespace {

SimConfig toy_scenario(const std::string& id, double range, int duration, uint64_t seed) {
  SimConfig cfg;
  cfg.scenario_id = id;
  cfg.node_count = 10;
  cfg.area_width = 300;
  cfg.area_height = 300;
  cfg.tx_range = range;
  cfg.duration = duration;
  cfg.cooldown = 0;
  cfg.initial_ttl = 60;
  cfg.buffer_cap = 200;
  cfg.flow_arrival_rate = 0.05;
  cfg.packet_rate = 0.1;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("train_scenario runs one round per round_len steps") {
  CLPlan plan;
  plan.round_len = 100;
  plan.hyper.epochs = 2;
  SimConfig cfg = toy_scenario("rounds", 70, 600, 5);
  plan.scenarios.push_back(cfg);
  ReplayStore store;
  std::vector<RoundLoss> losses;
  QNetwork net = train_cl(plan, store, &losses);
  // busy enough traffic: every round has data, so 600/100 rounds trained
  CHECK(losses.size() == 6);
  CHECK(store.datasets.size() == 1);
  CHECK(store.datasets[0].items.size() > 100);
}

TEST_CASE("an empty current dataset skips the round") {
  CLPlan plan;
  plan.round_len = 50;
  SimConfig cfg = toy_scenario("quiet", 70, 100, 5);
  cfg.flow_arrival_rate = 0.0;  // no traffic at all
  plan.scenarios.push_back(cfg);
  ReplayStore store;
  std::vector<RoundLoss> losses;
  QNetwork net = train_cl(plan, store, &losses);
  CHECK(losses.empty());
  CHECK(store.datasets[0].items.empty());
}

TEST_CASE("continual plan freezes datasets in order and keeps them intact") {
  CLPlan plan;
  plan.round_len = 150;
  plan.hyper.epochs = 2;
  plan.scenarios.push_back(toy_scenario("one", 80, 300, 5));
  plan.scenarios.push_back(toy_scenario("two", 30, 300, 6));
  ReplayStore store;
  QNetwork net = train_cl(plan, store, nullptr);
  REQUIRE(store.datasets.size() == 2);
  CHECK(store.datasets[0].scenario_id == "one");
  CHECK(store.datasets[1].scenario_id == "two");
  CHECK(!store.datasets[0].items.empty());
  CHECK(net.schema_hash == store.schema_hash);
}

TEST_CASE("whole-pipeline determinism under fixed seeds") {
  auto run = []() {
    CLPlan plan;
    plan.round_len = 100;
    plan.hyper.epochs = 2;
    plan.train_seed = 42;
    plan.scenarios.push_back(toy_scenario("det", 60, 300, 5));
    ReplayStore store;
    QNetwork net = train_cl(plan, store, nullptr);
    Eigen::VectorXd probe = Eigen::VectorXd::Constant(kFeatureDim, 0.3);
    return net.value(probe);
  };
  CHECK(run() == run());
}

TEST_CASE("fine_tune with zero budget returns the base unchanged") {
  SimConfig cfg = toy_scenario("ft", 60, 200, 9);
  QNetwork base(QNetwork::default_dims(kFeatureDim), schema_hash(cfg.features), 3);
  CLPlan plan;
  QNetwork tuned = fine_tune(base, cfg, 0, 50, plan, nullptr);
  for (size_t l = 0; l < base.W.size(); ++l) CHECK(tuned.W[l] == base.W[l]);
}

TEST_CASE("fine_tune budget 2000 at round 50 trains 40 rounds") {
  SimConfig cfg = toy_scenario("ft40", 70, 100, 9);
  QNetwork base(QNetwork::default_dims(kFeatureDim), schema_hash(cfg.features), 3);
  CLPlan plan;
  plan.hyper.epochs = 1;
  std::vector<RoundLoss> losses;
  QNetwork tuned = fine_tune(base, cfg, 2000, 50, plan, &losses);
  CHECK(losses.size() == 40);  // every round has data under this traffic
  bool changed = false;
  for (size_t l = 0; l < base.W.size(); ++l)
    if (tuned.W[l] != base.W[l]) changed = true;
  CHECK(changed);
}

TEST_CASE("fine_tune rejects a schema-mismatched base model") {
  SimConfig cfg = toy_scenario("ftbad", 60, 100, 9);
  QNetwork base(QNetwork::default_dims(kFeatureDim), 0xdeadbeef, 3);
  CLPlan plan;
  CHECK_THROWS_AS(fine_tune(base, cfg, 100, 50, plan, nullptr), SchemaError);
}

TEST_CASE("plan files parse with relative scenario paths and unknown-key rejection") {
  {
    std::ofstream s("tr_scn.cfg");
    s << "scenario_id = planned\nnode_count = 5\ntx_range = 50\nduration = 100\n";
  }
  {
    std::ofstream p("tr_plan.cfg");
    p << "# comment\nscenario = tr_scn.cfg\nalpha = 0.2\nround_len = 25\nepsilon = 0.05\n";
  }
  CLPlan plan = load_plan("tr_plan.cfg");
  CHECK(plan.scenarios.size() == 1);
  CHECK(plan.scenarios[0].scenario_id == "planned");
  CHECK(plan.alpha == doctest::Approx(0.2));
  CHECK(plan.round_len == 25);
  {
    std::ofstream p("tr_plan_bad.cfg");
    p << "scenario = tr_scn.cfg\nwat = 1\n";
  }
  CHECK_THROWS_AS(load_plan("tr_plan_bad.cfg"), ConfigError);
  std::remove("tr_scn.cfg");
  std::remove("tr_plan.cfg");
  std::remove("tr_plan_bad.cfg");
}
