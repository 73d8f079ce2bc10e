#pragma once

#include <cstdint>
#include <functional>

#include "mrproxy/stats.hpp"

namespace mrproxy {

// A scalar statistic evaluated under bootstrap frequency weights.
using WeightedStatistic = std::function<double(RowWeights)>;

struct BootstrapOptions {
  int replicates = 500;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Nonparametric bootstrap standard error of `statistic` over n_rows rows.
// Replicate r resamples rows with the stream derive_seed(seed, r), so the
// result is independent of thread count. Replicates whose statistic throws
// are dropped; more than 10% dropped raises EstimatorUnstable.
double bootstrap_se(std::size_t n_rows, const WeightedStatistic& statistic,
                    const BootstrapOptions& options);

}  // namespace mrproxy
