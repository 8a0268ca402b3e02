#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dtn/behavior.hpp"
#include "dtn/campaign.hpp"

using namespace dtn;

TEST_CASE("student-t summary matches a hand example") {
  std::vector<MetricsReport> runs(5);
  double vals[5] = {1.0, 2.0, 3.0, 4.0, 5.0};
  for (int i = 0; i < 5; ++i) {
    runs[i].scenario_id = "s";
    runs[i].policy = "p";
    runs[i].mean_delay = vals[i];
    runs[i].delivery_rate = 1.0;
  }
  auto rows = summarize(runs);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 5);
  CHECK(rows[0].delay_mean == doctest::Approx(3.0));
  // sd = sqrt(2.5), halfwidth = 2.776 * sd / sqrt(5)
  CHECK(rows[0].delay_ci == doctest::Approx(2.776 * std::sqrt(2.5) / std::sqrt(5.0)).epsilon(1e-3));
  CHECK(rows[0].delivery_ci == doctest::Approx(0.0));
  CHECK(t_quantile_975(4) == doctest::Approx(2.776));
}

TEST_CASE("behavior analysis golden cases") {
  std::vector<DecisionRecord> log;
  // every qualifying decision picks a fast node; 2 fast + 2 slow everywhere
  for (int i = 0; i < 10; ++i) {
    DecisionRecord d{};
    d.t = i;
    d.n_fast = 2;
    d.n_slow = 2;
    d.chose_fast = true;
    log.push_back(d);
  }
  BehaviorReport rep = analyze_decisions(log, "x");
  CHECK(!rep.empty);
  CHECK(rep.all.n == 10);
  CHECK(rep.all.p_choose_fast == doctest::Approx(1.0));
  CHECK(rep.all.uniform_baseline == doctest::Approx(0.5));

  BehaviorReport none = analyze_decisions({}, "x");
  CHECK(none.empty);
  std::string csv = behavior_csv_rows(none);
  CHECK(csv.find(",1\n") != std::string::npos);  // empty-report marker column
}

TEST_CASE("behavior analysis: dest-neighbor exclusion variant differs") {
  std::vector<DecisionRecord> log;
  for (int i = 0; i < 8; ++i) {
    DecisionRecord d{};
    d.n_fast = 1;
    d.n_slow = 1;
    d.chose_fast = i < 4;     // half choose fast...
    d.dest_is_nbr = i < 4;    // ...exactly when the destination was adjacent
    log.push_back(d);
  }
  BehaviorReport rep = analyze_decisions(log, "x");
  CHECK(rep.all.p_choose_fast == doctest::Approx(0.5));
  CHECK(rep.excl_dst_nbr.p_choose_fast == doctest::Approx(0.0));
  CHECK(rep.excl_dst_nbr.n == 4);
}

TEST_CASE("campaign files parse, unknown keys rejected") {
  {
    std::ofstream f("camp_scn.cfg");
    f << "scenario_id = cs\nnode_count = 6\ntx_range = 60\nduration = 120\ncooldown = 60\n"
      << "initial_ttl = 60\nflow_arrival_rate = 0.05\npacket_rate = 0.2\n";
  }
  {
    std::ofstream f("camp_ok.cfg");
    f << "scenario = camp_scn.cfg\npolicy = utility\npolicy = random\nseeds = 1,2\n"
      << "outdir = camp_test_out\ndecision_logs = 0\n";
  }
  Campaign c = load_campaign("camp_ok.cfg");
  CHECK(c.scenario_paths.size() == 1);
  CHECK(c.policies.size() == 2);
  CHECK(c.seeds == std::vector<uint64_t>{1, 2});
  {
    std::ofstream f("camp_bad.cfg");
    f << "scenario = camp_scn.cfg\npolicy = utility\nseeds = 1\nnope = 2\n";
  }
  CHECK_THROWS_AS(load_campaign("camp_bad.cfg"), ConfigError);

  // run it end to end: runs.csv rows = scenarios x policies x seeds
  CampaignResult res = run_campaign(c);
  CHECK(res.runs.size() == 4);
  std::ifstream runs(res.runs_csv);
  std::string line;
  int rows = 0;
  while (std::getline(runs, line))
    if (!line.empty() && line[0] != '#' && line.rfind("scenario,", 0) != 0) ++rows;
  CHECK(rows == 4);
  std::remove("camp_scn.cfg");
  std::remove("camp_ok.cfg");
  std::remove("camp_bad.cfg");
  std::filesystem::remove_all("camp_test_out");
}

TEST_CASE("summary aggregation is recomputable from per-run reports") {
  std::vector<MetricsReport> runs;
  for (int seed = 1; seed <= 3; ++seed) {
    MetricsReport r;
    r.scenario_id = "s";
    r.policy = "p";
    r.seed = seed;
    r.delivery_rate = 0.5 + 0.1 * seed;
    runs.push_back(r);
  }
  auto rows = summarize(runs);
  double mean = (0.6 + 0.7 + 0.8) / 3;
  CHECK(rows[0].delivery_mean == doctest::Approx(mean));
}
