#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "dtn/errors.hpp"
#include "dtn/replay.hpp"
#include "dtn/schema.hpp"

using namespace dtn;

namespace {

ExperienceDataset make_dataset(const std::string& id, int n, int tag) {
  ExperienceDataset ds;
  ds.scenario_id = id;
  for (int i = 0; i < n; ++i) {
    Experience e;
    e.t = tag * 1000000 + i;  // unique marker
    e.reward = -1;
    e.terminal = true;
    e.state = Eigen::VectorXd::Zero(kStateDim);
    e.action = Eigen::VectorXd::Zero(kActionDim);
    ds.items.push_back(std::move(e));
  }
  return ds;
}

}  // namespace

TEST_CASE("balanced sample size follows the rule") {
  // n = max_i ceil(alpha|D_i|), capped by the current dataset
  CHECK(balanced_sample_size({1000, 800, 50}, 0.1) == 50);
  CHECK(balanced_sample_size({1000}, 0.1) == 100);
  CHECK(balanced_sample_size({100, 100, 1000000}, 0.1) == 100000);
  CHECK(balanced_sample_size({1000, 800, 0}, 0.1) == 0);
  CHECK(balanced_sample_size({5, 5, 5}, 0.1) == 1);  // ceil keeps tiny sets alive
}

TEST_CASE("sampler law matches a direct arithmetic oracle on random instances") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + rng.uniform_int(5);
    std::vector<size_t> sizes;
    for (int i = 0; i < k; ++i) sizes.push_back(static_cast<size_t>(rng.uniform_int(5000)));
    double alpha = 0.01 + 0.4 * rng.uniform();
    size_t expect = 0;
    for (size_t s : sizes)
      expect = std::max(expect, static_cast<size_t>(std::ceil(alpha * static_cast<double>(s))));
    if (expect >= sizes.back()) expect = sizes.back();
    CHECK(balanced_sample_size(sizes, alpha) == expect);
  }
}

TEST_CASE("balanced_sample returns k equally sized samples from their own datasets") {
  ReplayStore store;
  store.datasets.push_back(make_dataset("a", 40, 1));
  store.datasets.push_back(make_dataset("b", 2000, 2));
  store.datasets.push_back(make_dataset("c", 900, 3));
  Rng rng(4);
  auto samples = balanced_sample(store, 0.1, rng);
  REQUIRE(samples.size() == 3);
  const size_t n = 200;  // max(4, 200, 90) = 200 < 900
  for (size_t d = 0; d < 3; ++d) {
    CHECK(samples[d].size() == n);
    for (const auto* e : samples[d]) CHECK(e->t / 1000000 == static_cast<int>(d) + 1);
  }
  // the small frozen dataset was sampled with replacement up to n
  std::set<int> uniq;
  for (const auto* e : samples[0]) uniq.insert(e->t);
  CHECK(uniq.size() <= 40);
  // without replacement where possible: all draws distinct
  std::set<int> uniq_c;
  for (const auto* e : samples[2]) uniq_c.insert(e->t);
  CHECK(uniq_c.size() == n);
}

TEST_CASE("interleave: 3 datasets x 64 samples at b=32 give 6 batches, all consumed once") {
  ReplayStore store;
  store.datasets.push_back(make_dataset("a", 64, 1));
  store.datasets.push_back(make_dataset("b", 64, 2));
  store.datasets.push_back(make_dataset("c", 64, 3));
  Rng rng(7);
  std::vector<std::vector<const Experience*>> samples;
  for (const auto& ds : store.datasets) {
    std::vector<const Experience*> s;
    for (const auto& e : ds.items) s.push_back(&e);
    samples.push_back(s);
  }
  auto batches = interleave_batches(samples, 32, rng);
  CHECK(batches.size() == 6);
  std::map<int, int> per_dataset;
  std::multiset<const Experience*> seen;
  for (const auto& b : batches) {
    CHECK(b.size() == 32);
    ++per_dataset[b.front()->t / 1000000];
    for (const auto* e : b) seen.insert(e);
  }
  CHECK(per_dataset[1] == 2);
  CHECK(per_dataset[2] == 2);
  CHECK(per_dataset[3] == 2);
  // multiset equality with the inputs
  std::multiset<const Experience*> expect;
  for (const auto& s : samples)
    for (const auto* e : s) expect.insert(e);
  CHECK(seen == expect);
}

TEST_CASE("interleave: short last batch and label positions are unbiased") {
  Rng rng(11);
  ExperienceDataset a = make_dataset("a", 48, 1);  // 2 batches: 32 + 16
  ExperienceDataset b = make_dataset("b", 48, 2);
  std::vector<std::vector<const Experience*>> samples(2);
  for (const auto& e : a.items) samples[0].push_back(&e);
  for (const auto& e : b.items) samples[1].push_back(&e);

  std::vector<std::map<int, int>> pos_label(4);
  for (int trial = 0; trial < 1000; ++trial) {
    auto batches = interleave_batches(samples, 32, rng);
    REQUIRE(batches.size() == 4);
    int sizes[2] = {0, 0};
    for (size_t i = 0; i < 4; ++i) {
      int label = batches[i].front()->t / 1000000;
      ++pos_label[i][label];
      sizes[label - 1] += static_cast<int>(batches[i].size());
    }
    CHECK(sizes[0] == 48);
    CHECK(sizes[1] == 48);
  }
  // by symmetry each label appears at each position about half the time
  for (int i = 0; i < 4; ++i) {
    CHECK(pos_label[i][1] > 400);
    CHECK(pos_label[i][1] < 600);
  }
}

TEST_CASE("within-dataset batch order preserves sample order") {
  Rng rng(2);
  ExperienceDataset a = make_dataset("a", 96, 1);
  std::vector<std::vector<const Experience*>> samples(1);
  for (const auto& e : a.items) samples[0].push_back(&e);
  auto batches = interleave_batches(samples, 32, rng);
  REQUIRE(batches.size() == 3);
  int last = -1;
  for (const auto& b : batches)
    for (const auto* e : b) {
      CHECK(e->t > last);
      last = e->t;
    }
}

TEST_CASE("sampling never mutates the datasets") {
  ReplayStore store;
  store.datasets.push_back(make_dataset("a", 100, 1));
  store.datasets.push_back(make_dataset("b", 300, 2));
  std::vector<int> before;
  for (const auto& e : store.datasets[0].items) before.push_back(e.t);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    auto samples = balanced_sample(store, 0.2, rng);
    interleave_batches(samples, 32, rng);
  }
  std::vector<int> after;
  for (const auto& e : store.datasets[0].items) after.push_back(e.t);
  CHECK(before == after);
}

TEST_CASE("experience log round-trips and checks its schema") {
  ExperienceDataset ds;
  ds.scenario_id = "logtest";
  Rng rng(13);
  for (int i = 0; i < 5; ++i) {
    Experience e;
    e.t = i;
    e.reward = -2;
    e.terminal = (i % 2) == 0;
    e.state = Eigen::VectorXd::Random(kStateDim);
    e.action = Eigen::VectorXd::Random(kActionDim);
    if (!e.terminal) e.next_candidates = Eigen::MatrixXd::Random(3, kFeatureDim);
    ds.items.push_back(std::move(e));
  }
  const uint64_t schema = 0xfeedbeef;
  write_experience_log(ds, schema, "digest=x seed=1", "replay_log_test.log");
  ExperienceDataset back = read_experience_log("replay_log_test.log", schema);
  CHECK(back.scenario_id == "logtest");
  REQUIRE(back.items.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(back.items[i].reward == ds.items[i].reward);
    CHECK(back.items[i].terminal == ds.items[i].terminal);
    CHECK(back.items[i].state == ds.items[i].state);
    CHECK(back.items[i].next_candidates.rows() == ds.items[i].next_candidates.rows());
    if (ds.items[i].next_candidates.rows() > 0)
      CHECK(back.items[i].next_candidates == ds.items[i].next_candidates);
  }
  CHECK_THROWS_AS(read_experience_log("replay_log_test.log", 0x1234), SchemaError);
  std::remove("replay_log_test.log");
}
