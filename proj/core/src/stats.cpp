#include "mrproxy/stats.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "mrproxy/errors.hpp"

namespace mrproxy {

namespace {

void require_same_size(std::span<const double> x, std::span<const double> y,
                       RowWeights w) {
  if (x.size() != y.size() || (!w.empty() && w.size() != x.size())) {
    throw std::invalid_argument("column lengths differ");
  }
}

inline double weight_at(RowWeights w, std::size_t i) {
  return w.empty() ? 1.0 : static_cast<double>(w[i]);
}

}  // namespace

double weighted_mean(std::span<const double> x, RowWeights weights) {
  if (!weights.empty() && weights.size() != x.size()) {
    throw std::invalid_argument("column lengths differ");
  }
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = weight_at(weights, i);
    total += wi * x[i];
    mass += wi;
  }
  if (mass == 0.0) throw std::invalid_argument("weighted_mean of empty sample");
  return total / mass;
}

double ols_slope(std::span<const double> x, std::span<const double> y,
                 RowWeights weights) {
  require_same_size(x, y, weights);
  double mass = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = weight_at(weights, i);
    mass += wi;
    sx += wi * x[i];
    sy += wi * y[i];
  }
  if (mass == 0.0) throw DegenerateInstrument("instrument column is empty");
  const double mx = sx / mass;
  const double my = sy / mass;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = weight_at(weights, i);
    const double dx = x[i] - mx;
    sxx += wi * dx * dx;
    sxy += wi * dx * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateInstrument("instrument has zero variance");
  return sxy / sxx;
}

double carrier_mean_difference(std::span<const double> x, std::span<const double> y,
                               RowWeights weights) {
  require_same_size(x, y, weights);
  double mass[2] = {0.0, 0.0};
  double total[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int g = x[i] >= 0.5 ? 1 : 0;
    const double wi = weight_at(weights, i);
    mass[g] += wi;
    total[g] += wi * y[i];
  }
  if (mass[0] == 0.0 || mass[1] == 0.0) {
    throw DegenerateInstrument("instrument has a single level");
  }
  return total[1] / mass[1] - total[0] / mass[0];
}

double correlation(std::span<const double> x, std::span<const double> y) {
  return partial_correlation(x, y, {});
}

double partial_correlation(std::span<const double> x, std::span<const double> y,
                           const std::vector<std::span<const double>>& given) {
  std::vector<std::span<const double>> cols{x, y};
  cols.insert(cols.end(), given.begin(), given.end());
  const std::size_t k = cols.size();
  const std::size_t n = x.size();
  for (const auto& c : cols) {
    if (c.size() != n) throw std::invalid_argument("column lengths differ");
  }
  if (n < k + 1) throw std::invalid_argument("too few rows for partial correlation");

  Eigen::VectorXd means(k);
  for (std::size_t j = 0; j < k; ++j) means[j] = weighted_mean(cols[j]);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd row(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) row[j] = cols[j][i] - means[j];
    cov.selfadjointView<Eigen::Lower>().rankUpdate(row);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  const Eigen::MatrixXd precision = cov.inverse();
  return -precision(0, 1) / std::sqrt(precision(0, 0) * precision(1, 1));
}

}  // namespace mrproxy
