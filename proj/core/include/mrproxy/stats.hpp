#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mrproxy {

// Frequency weights over rows (bootstrap counts). An empty span counts every
// row once.
using RowWeights = std::span<const std::uint32_t>;

double weighted_mean(std::span<const double> x, RowWeights weights = {});

// Least-squares slope of y on x. Throws DegenerateInstrument when x has no
// variance under the weights.
double ols_slope(std::span<const double> x, std::span<const double> y,
                 RowWeights weights = {});

// mean(y | x >= 1) - mean(y | x < 1), i.e. carriers minus non-carriers for a
// dosage or 0/1 column. Throws DegenerateInstrument when a group is empty.
double carrier_mean_difference(std::span<const double> x, std::span<const double> y,
                               RowWeights weights = {});

double correlation(std::span<const double> x, std::span<const double> y);

// Partial correlation of x and y given the columns in `given`, from the
// inverse of the joint sample covariance matrix.
double partial_correlation(std::span<const double> x, std::span<const double> y,
                           const std::vector<std::span<const double>>& given);

}  // namespace mrproxy
