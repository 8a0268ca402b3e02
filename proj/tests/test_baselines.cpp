#include <doctest.h>

#include <cmath>
#include <fstream>

#include "dtn/baselines.hpp"
#include "dtn/oracle.hpp"
#include "dtn/world.hpp"

using namespace dtn;

namespace {

// world with controllable static geometry for heuristic-policy tests
struct Bench {
  SimConfig cfg;
  std::string trace = "bl_bench.csv";
  std::unique_ptr<World> world;

  Bench(std::vector<Vec2> pos, double range, int steps = 8) {
    std::ofstream f(trace);
    f << "t,node_id,x,y\n";
    for (int t = 0; t < steps; ++t)
      for (size_t n = 0; n < pos.size(); ++n)
        f << t << ',' << n << ',' << pos[n].x() << ',' << pos[n].y() << '\n';
    f.close();
    cfg.scenario_id = "bench";
    cfg.node_count = static_cast<int>(pos.size());
    cfg.tx_range = range;
    cfg.duration = steps;
    cfg.flow_arrival_rate = 0;
    cfg.mobility.model = MobilityModel::kTrace;
    cfg.mobility.trace_path = trace;
    world = std::make_unique<World>(cfg);
  }
  ~Bench() { std::remove(trace.c_str()); }
};

struct StayPolicy : ForwardingPolicy {
  int decide(const World&, int v, const Packet&, const std::vector<int>&, const Eigen::MatrixXd*,
             Rng&, Decision& out) override {
    out.chosen = v;
    return v;
  }
  std::string name() const override { return "stay"; }
};

Packet mk_packet(int id, int src, int dst) {
  Packet p;
  p.id = id;
  p.src = src;
  p.dst = dst;
  p.holder = src;
  p.ttl_remaining = 100;
  p.visited = {src};
  return p;
}

}  // namespace

TEST_CASE("utility: forward to a just-met neighbor, stay when nobody beats theta") {
  Bench bench({{0, 0}, {30, 0}, {60, 0}}, 40);
  StayPolicy stay;
  bench.world->step(stay);  // tables exchanged once
  auto& nodes = const_cast<std::vector<NodeState>&>(bench.world->nodes());
  UtilityPolicy utility(10.0);
  Rng rng(1);
  Decision out;

  // node 1 just met destination 2 (timer 0), node 0 has the packet with init timer
  Packet p = mk_packet(0, 0, 2);
  std::vector<int> cands = {0, 1};
  CHECK(utility.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 1);

  // all neighbors' timers >= own: stay
  nodes[0].peers[2].timer = 0;
  CHECK(utility.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 0);

  // margin below theta: stay (own 100 vs best 95)
  nodes[0].peers[2].timer = 100;
  nodes[1].peers[2].timer = 95;
  CHECK(utility.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 0);
  // margin above theta: forward
  nodes[1].peers[2].timer = 80;
  CHECK(utility.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 1);
}

TEST_CASE("utility never forwards to a strictly worse timer") {
  Bench bench({{0, 0}, {30, 0}, {60, 0}}, 40);
  StayPolicy stay;
  bench.world->step(stay);
  auto& nodes = const_cast<std::vector<NodeState>&>(bench.world->nodes());
  nodes[0].peers[2].timer = 50;
  nodes[1].peers[2].timer = 300;
  UtilityPolicy utility(10.0);
  Rng rng(1);
  Decision out;
  Packet p = mk_packet(0, 0, 2);
  std::vector<int> cands = {0, 1};
  CHECK(utility.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 0);
}

TEST_CASE("utility delivers when the destination is adjacent") {
  Bench bench({{0, 0}, {30, 0}}, 40);
  StayPolicy stay;
  bench.world->step(stay);
  UtilityPolicy utility(10.0);
  Rng rng(1);
  Decision out;
  Packet p = mk_packet(0, 0, 1);
  std::vector<int> cands = {0, 1};
  CHECK(utility.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 1);
}

TEST_CASE("seek-focus: random in seek, greedy in focus, timeout re-seeks") {
  Bench bench({{0, 0}, {30, 0}, {60, 0}, {30, 30}}, 40, 60);
  StayPolicy stay;
  bench.world->step(stay);
  auto& nodes = const_cast<std::vector<NodeState>&>(bench.world->nodes());
  SeekFocusPolicy sf(10.0, 20);
  Rng rng(7);
  Packet p = mk_packet(0, 0, 2);
  std::vector<int> cands = {0, 1, 3};

  // no utility info anywhere: behaves like random forwarding (never stays)
  for (auto& n : nodes) n.peers[2].timer = 500;
  nodes[0].peers[2].timer = 500;
  std::map<int, int> chosen_counts;
  for (int i = 0; i < 200; ++i) {
    Decision out;
    SeekFocusPolicy fresh(10.0, 20);
    int c = fresh.decide(*bench.world, 0, p, cands, nullptr, rng, out);
    CHECK(c != 0);
    ++chosen_counts[c];
  }
  CHECK(chosen_counts[1] > 50);
  CHECK(chosen_counts[3] > 50);

  // neighbor met d this step: focus, greedy forward
  nodes[1].peers[2].timer = 0;
  Decision out;
  SeekFocusPolicy sf2(10.0, 20);
  CHECK(sf2.decide(*bench.world, 0, p, cands, nullptr, rng, out) == 1);

  // stall: own timer is the local best and below threshold; after the
  // timeout the policy abandons focus and seeks randomly again
  for (auto& n : nodes) n.peers[2].timer = 500;
  nodes[0].peers[2].timer = 5;  // local minimum at the holder
  SeekFocusPolicy sf3(10.0, 3);
  bool stayed_first = false, moved_later = false;
  for (int step = 0; step < 12; ++step) {
    Decision o2;
    int c = sf3.decide(*bench.world, 0, p, cands, nullptr, rng, o2);
    // world.now() is fixed here, so emulate passing time via re-stepping
    if (step == 0) stayed_first = (c == 0);
    bench.world->step(stay);
    if (step > 6 && c != 0) moved_later = true;
    for (auto& n : nodes) n.peers[2].timer = 500;  // keep the landscape flat
    nodes[0].peers[2].timer = 5;
  }
  CHECK(stayed_first);
  CHECK(moved_later);
}

TEST_CASE("random policy: uniform over candidates, deterministic per seed") {
  Bench bench({{0, 0}, {30, 0}}, 40);
  RandomPolicy random;
  Packet p = mk_packet(0, 0, 1);
  std::vector<int> cands = {0, 1};
  Rng a(3), b(3);
  for (int i = 0; i < 100; ++i) {
    Decision o1, o2;
    CHECK(random.decide(*bench.world, 0, p, cands, nullptr, a, o1) ==
          random.decide(*bench.world, 0, p, cands, nullptr, b, o2));
  }
  std::vector<int> single = {0};
  Rng c(1);
  Decision out;
  CHECK(random.decide(*bench.world, 0, p, single, nullptr, c, out) == 0);
}

TEST_CASE("oracle: adjacent destination gives delay 1 and forwards 1") {
  std::ofstream f("bl_oracle1.csv");
  f << "t,node_id,x,y\n";
  for (int t = 0; t < 30; ++t) {
    f << t << ",0,0,0\n" << t << ",1,30,0\n";
  }
  f.close();
  SimConfig cfg;
  cfg.scenario_id = "o1";
  cfg.node_count = 2;
  cfg.tx_range = 40;
  cfg.duration = 30;
  cfg.cooldown = 10;
  cfg.initial_ttl = 10;
  cfg.flow_arrival_rate = 0.5;
  cfg.packet_rate = 0.3;
  cfg.mobility.model = MobilityModel::kTrace;
  cfg.mobility.trace_path = "bl_oracle1.csv";
  cfg.rng_seed = 8;
  OracleResult res = oracle_run(cfg);
  REQUIRE(res.report.generated > 0);
  for (const auto& p : res.report.packets) {
    CHECK(p.status == PacketStatus::kDelivered);
    CHECK(p.delivered_at - p.created == 1);
    CHECK(p.forwards == 1);
  }
  std::remove("bl_oracle1.csv");
}

TEST_CASE("oracle: static 4-node line end-to-end needs 3 forwards") {
  std::ofstream f("bl_oracle2.csv");
  f << "t,node_id,x,y\n";
  for (int t = 0; t < 30; ++t)
    for (int n = 0; n < 4; ++n) f << t << ',' << n << ',' << 40 * n << ",0\n";
  f.close();
  SimConfig cfg;
  cfg.scenario_id = "o2";
  cfg.node_count = 4;
  cfg.tx_range = 45;
  cfg.duration = 30;
  cfg.flow_arrival_rate = 0;
  cfg.mobility.model = MobilityModel::kTrace;
  cfg.mobility.trace_path = "bl_oracle2.csv";
  // no flows from traffic; craft one packet through a one-off burst config
  SimConfig burst = cfg;
  burst.flow_arrival_rate = 3.0;
  burst.packet_rate = 0.4;
  burst.cooldown = 15;
  burst.initial_ttl = 14;
  burst.rng_seed = 12;
  OracleResult res = oracle_run(burst);
  REQUIRE(res.report.generated > 0);
  bool saw_end_to_end = false;
  for (const auto& p : res.report.packets) {
    CHECK(p.status == PacketStatus::kDelivered);
    int hops = std::abs(p.dst - p.src);
    CHECK(p.forwards == hops);  // shortest path on the line
    CHECK(p.delivered_at - p.created == hops);
    if (hops == 3) saw_end_to_end = true;
  }
  CHECK(saw_end_to_end);
  std::remove("bl_oracle2.csv");
}

TEST_CASE("oracle dominance against single-copy policies on a mobile run") {
  SimConfig cfg;
  cfg.scenario_id = "dom";
  cfg.node_count = 15;
  cfg.tx_range = 60;
  cfg.duration = 800;
  cfg.cooldown = 300;
  cfg.initial_ttl = 300;
  cfg.flow_arrival_rate = 0.03;
  cfg.packet_rate = 0.1;
  cfg.rng_seed = 77;

  OracleResult oracle = oracle_run(cfg);
  std::map<int, int> oracle_delay;
  for (const auto& p : oracle.report.packets)
    if (p.status == PacketStatus::kDelivered) oracle_delay[p.id] = p.delivered_at - p.created;

  for (int which = 0; which < 2; ++which) {
    World world(cfg);
    UtilityPolicy utility(10.0);
    RandomPolicy random;
    ForwardingPolicy& policy =
        which == 0 ? static_cast<ForwardingPolicy&>(utility) : random;
    world.run(policy);
    MetricsReport rep = world.collect_metrics(policy.name());
    CHECK(rep.generated == oracle.report.generated);
    for (const auto& p : rep.packets) {
      if (p.status != PacketStatus::kDelivered) continue;
      REQUIRE(oracle_delay.count(p.id));
      CHECK(oracle_delay[p.id] <= p.delivered_at - p.created);
    }
  }
}

TEST_CASE("oracle forwards >= 1 for delivered packets and paths are recorded") {
  SimConfig cfg;
  cfg.scenario_id = "paths";
  cfg.node_count = 10;
  cfg.tx_range = 70;
  cfg.duration = 400;
  cfg.cooldown = 150;
  cfg.initial_ttl = 150;
  cfg.flow_arrival_rate = 0.05;
  cfg.packet_rate = 0.1;
  cfg.rng_seed = 6;
  OracleResult res = oracle_run(cfg);
  long delivered = 0;
  for (const auto& p : res.report.packets)
    if (p.status == PacketStatus::kDelivered) {
      ++delivered;
      CHECK(p.forwards >= 1);
    }
  REQUIRE(delivered > 0);
  CHECK(!res.winning_paths.empty());
}
