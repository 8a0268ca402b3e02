#include "dtn/replay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dtn/config.hpp"
#include "dtn/errors.hpp"
#include "dtn/schema.hpp"

namespace dtn {

size_t balanced_sample_size(const std::vector<size_t>& sizes, double alpha) {
  if (sizes.empty()) return 0;
  size_t n = 0;
  for (size_t s : sizes)
    n = std::max(n, static_cast<size_t>(std::ceil(alpha * static_cast<double>(s))));
  const size_t current = sizes.back();
  if (n >= current) n = current;
  return n;
}

std::vector<std::vector<const Experience*>> balanced_sample(const ReplayStore& store,
                                                            double alpha, Rng& rng) {
  std::vector<size_t> sizes;
  for (const auto& ds : store.datasets) sizes.push_back(ds.items.size());
  const size_t n = balanced_sample_size(sizes, alpha);
  std::vector<std::vector<const Experience*>> out;
  if (n == 0) return out;
  for (const auto& ds : store.datasets) {
    std::vector<const Experience*> sample;
    sample.reserve(n);
    const size_t sz = ds.items.size();
    if (sz >= n) {
      // partial Fisher-Yates: first n of a shuffled index range
      std::vector<size_t> idx(sz);
      std::iota(idx.begin(), idx.end(), 0);
      for (size_t i = 0; i < n; ++i) {
        size_t j = i + static_cast<size_t>(rng.uniform_int(static_cast<int>(sz - i)));
        std::swap(idx[i], idx[j]);
        sample.push_back(&ds.items[idx[i]]);
      }
    } else {
      for (size_t i = 0; i < n; ++i)
        sample.push_back(&ds.items[rng.uniform_int(static_cast<int>(sz))]);
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<std::vector<const Experience*>> interleave_batches(
    const std::vector<std::vector<const Experience*>>& samples, int b, Rng& rng) {
  struct Cursor {
    const std::vector<const Experience*>* sample;
    size_t next = 0;
  };
  std::vector<Cursor> cursors;
  for (const auto& s : samples)
    if (!s.empty()) cursors.push_back({&s, 0});

  std::vector<std::vector<const Experience*>> batches;
  while (!cursors.empty()) {
    int pick = rng.uniform_int(static_cast<int>(cursors.size()));
    Cursor& c = cursors[pick];
    size_t take = std::min(static_cast<size_t>(b), c.sample->size() - c.next);
    batches.emplace_back(c.sample->begin() + c.next, c.sample->begin() + c.next + take);
    c.next += take;
    if (c.next >= c.sample->size()) cursors.erase(cursors.begin() + pick);
  }
  return batches;
}

void write_experience_log(const ExperienceDataset& ds, uint64_t schema_hash,
                          const std::string& provenance, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open '" + path + "' for writing");
  f << "# dtn-exp v1 schema=" << digest_hex(schema_hash) << " scenario=" << ds.scenario_id;
  if (!provenance.empty()) f << ' ' << provenance;
  f << "\n# columns: t reward terminal n_cands state[" << kStateDim << "] action[" << kActionDim
    << "] cands[n_cands*" << kFeatureDim << "]\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    f << buf;
  };
  for (const Experience& e : ds.items) {
    f << e.t << ' ' << e.reward << ' ' << (e.terminal ? 1 : 0) << ' ' << e.next_candidates.rows();
    for (int i = 0; i < e.state.size(); ++i) put(e.state[i]);
    for (int i = 0; i < e.action.size(); ++i) put(e.action[i]);
    for (int r = 0; r < e.next_candidates.rows(); ++r)
      for (int c = 0; c < e.next_candidates.cols(); ++c) put(e.next_candidates(r, c));
    f << '\n';
  }
}

ExperienceDataset read_experience_log(const std::string& path, uint64_t expected_schema) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open experience log '" + path + "'");
  std::string header;
  std::getline(f, header);
  auto spos = header.find("schema=");
  if (header.rfind("# dtn-exp v1", 0) != 0 || spos == std::string::npos)
    throw SchemaError(path + ": not a dtn-exp v1 file");
  uint64_t schema = std::stoull(header.substr(spos + 7, 16), nullptr, 16);
  if (expected_schema != 0 && schema != expected_schema)
    throw SchemaError(path + ": schema mismatch");
  ExperienceDataset ds;
  auto npos = header.find("scenario=");
  if (npos != std::string::npos) {
    std::string rest = header.substr(npos + 9);
    ds.scenario_id = rest.substr(0, rest.find(' '));
  }
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    Experience e;
    int term = 0;
    long n_cands = 0;
    if (!(is >> e.t >> e.reward >> term >> n_cands))
      throw SchemaError(path + ": malformed experience row");
    e.terminal = term != 0;
    e.state.resize(kStateDim);
    e.action.resize(kActionDim);
    for (int i = 0; i < kStateDim; ++i) is >> e.state[i];
    for (int i = 0; i < kActionDim; ++i) is >> e.action[i];
    e.next_candidates.resize(n_cands, kFeatureDim);
    for (long r = 0; r < n_cands; ++r)
      for (int c = 0; c < kFeatureDim; ++c) is >> e.next_candidates(r, c);
    if (!is) throw SchemaError(path + ": truncated experience row");
    ds.items.push_back(std::move(e));
  }
  return ds;
}

}  // namespace dtn
