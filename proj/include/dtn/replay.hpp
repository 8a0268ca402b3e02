#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtn/policy.hpp"
#include "dtn/rng.hpp"

namespace dtn {

struct ExperienceDataset {
  std::string scenario_id;
  std::vector<Experience> items;
};

// Ordered datasets, one per scenario; all but the last are frozen, the last
// is the one currently being gathered.
struct ReplayStore {
  uint64_t schema_hash = 0;
  std::vector<ExperienceDataset> datasets;

  ExperienceDataset& current() { return datasets.back(); }
  const ExperienceDataset& current() const { return datasets.back(); }
};

// The balanced sample size: n = max_i ceil(alpha * |D_i|), capped to the
// current dataset's size. Returns 0 when the current dataset is empty
// (training for that round is skipped).
size_t balanced_sample_size(const std::vector<size_t>& sizes, double alpha);

// n uniform draws from each dataset: without replacement where the dataset
// has n items, with replacement for smaller (frozen) datasets, so every
// scenario contributes the same amount.
std::vector<std::vector<const Experience*>> balanced_sample(const ReplayStore& store,
                                                            double alpha, Rng& rng);

// Splits each dataset's sample into ceil(n/b) batches (last one short) and
// merges them by repeatedly drawing uniformly among datasets that still
// have batches left. Every batch appears exactly once.
std::vector<std::vector<const Experience*>> interleave_batches(
    const std::vector<std::vector<const Experience*>>& samples, int b, Rng& rng);

// Experience log file: header with schema hash + provenance, one row per
// experience. Append-only during training.
void write_experience_log(const ExperienceDataset& ds, uint64_t schema_hash,
                          const std::string& provenance, const std::string& path);
ExperienceDataset read_experience_log(const std::string& path, uint64_t expected_schema);

}  // namespace dtn
