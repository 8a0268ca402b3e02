#include <doctest.h>

#include "dtn/config.hpp"
#include "dtn/schema.hpp"

using namespace dtn;

TEST_CASE("scenario parsing with defaults") {
  SimConfig cfg = parse_scenario(
      "scenario_id = demo\n"
      "node_count = 25\n"
      "tx_range = 50\n"
      "duration = 1000\n"
      "cooldown = 200\n",
      "inline");
  CHECK(cfg.scenario_id == "demo");
  CHECK(cfg.flow_rate() == doctest::Approx(0.001));
  CHECK(cfg.packet_rate == doctest::Approx(0.01));
  CHECK(cfg.flow_duration_mean == doctest::Approx(5000.0));
  CHECK(cfg.buffer_cap == 200);
  CHECK(cfg.initial_ttl == 300);
  CHECK(cfg.slow_count() == 25);
}

TEST_CASE("flow rate scales with node count") {
  SimConfig cfg;
  cfg.node_count = 100;
  CHECK(cfg.flow_rate() == doctest::Approx(0.004));
}

TEST_CASE("unknown keys are rejected with location") {
  CHECK_THROWS_WITH_AS(parse_scenario("bogus_key = 3\n", "f.cfg"),
                       doctest::Contains("f.cfg:1"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("node_count = 1\nduration = 10\n", "x"), ConfigError);
}

TEST_CASE("speed mix must sum to node_count") {
  CHECK_THROWS_AS(parse_scenario("node_count = 25\nslow_count = 10\nfast_count = 10\n"
                                 "duration = 10\n",
                                 "x"),
                  ConfigError);
  SimConfig ok = parse_scenario(
      "node_count = 25\nslow_count = 12\nfast_count = 13\nduration = 10\n", "x");
  CHECK(ok.speed_mix_mean() == doctest::Approx((12 * 3.0 + 13 * 15.0) / 25.0));
}

TEST_CASE("config digest is stable and key-sensitive") {
  SimConfig a, b;
  CHECK(config_digest(a) == config_digest(b));
  b.tx_range = 80;
  CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("schema hash changes with params and pins dimension") {
  FeatureParams p;
  FeatureParams q;
  q.dispersion_beta = 0.7;
  CHECK(schema_hash(p) != schema_hash(q));
  CHECK(kFeatureDim == 63);
  CHECK(kStateDim == 49);
  CHECK(kActionDim == 14);
  CHECK(feature_names().size() == 63);
}
