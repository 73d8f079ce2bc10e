#include "mrproxy/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mrproxy/errors.hpp"
#include "mrproxy/rng.hpp"

namespace mrproxy {

namespace {

constexpr std::uint64_t kResampleTag = 0x626f6f74ULL;

std::optional<double> run_replicate(std::size_t n_rows, const WeightedStatistic& statistic,
                                    std::uint64_t seed, int r,
                                    std::vector<std::uint32_t>& counts) {
  std::fill(counts.begin(), counts.end(), 0u);
  CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(r)), 0, kResampleTag);
  for (std::size_t i = 0; i < n_rows; ++i) ++counts[rng.below(n_rows)];
  try {
    const double value = statistic(counts);
    if (!std::isfinite(value)) return std::nullopt;
    return value;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

double bootstrap_se(std::size_t n_rows, const WeightedStatistic& statistic,
                    const BootstrapOptions& options) {
  if (options.replicates < 2) throw ConfigError("replicates", "bootstrap needs >= 2 replicates");
  if (n_rows == 0) throw ConfigError("n_rows", "cannot bootstrap an empty sample");

  const int reps = options.replicates;
  std::vector<std::optional<double>> values(static_cast<std::size_t>(reps));
  unsigned workers = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));

  auto work = [&](unsigned worker) {
    std::vector<std::uint32_t> counts(n_rows);
    for (int r = static_cast<int>(worker); r < reps; r += static_cast<int>(workers)) {
      values[static_cast<std::size_t>(r)] = run_replicate(n_rows, statistic, options.seed, r, counts);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  // Replicate order is fixed, so the reduction is schedule-independent.
  std::vector<double> ok;
  ok.reserve(values.size());
  for (const auto& v : values) {
    if (v) ok.push_back(*v);
  }
  const std::size_t failed = values.size() - ok.size();
  if (failed * 10 > values.size()) {
    throw EstimatorUnstable("statistic failed in " + std::to_string(failed) + " of " +
                            std::to_string(values.size()) + " bootstrap replicates");
  }
  if (ok.size() < 2) throw EstimatorUnstable("fewer than two usable bootstrap replicates");
  double mean = 0.0;
  for (double v : ok) mean += v;
  mean /= static_cast<double>(ok.size());
  double ss = 0.0;
  for (double v : ok) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(ok.size() - 1));
}

}  // namespace mrproxy
