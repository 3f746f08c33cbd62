#pragma once

#include <map>
#include <string>
#include <vector>

namespace dgca {

enum class Alternative { TwoSided, Greater, Less };

struct UTestResult {
  double u = 0.0;  // U statistic of the first sample: #{a_i > b_j} + 0.5 #{a_i == b_j}
  double p = 1.0;
  bool exact = false;
};

/// Mann-Whitney U test with midranks for ties. Uses the exact permutation
/// distribution of the (midrank) rank sum when the smaller sample has at most
/// `exact_limit` values, otherwise the tie-corrected normal approximation
/// with continuity correction. "Greater" tests whether `a` tends to exceed `b`.
/// Throws std::invalid_argument on an empty sample.
UTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                           Alternative alternative = Alternative::TwoSided,
                           std::size_t exact_limit = 8);

struct BonferroniResult {
  double threshold = 0.0;
  std::vector<bool> significant;
};

BonferroniResult bonferroni(const std::vector<double>& pvalues, double alpha = 0.05);

/// Linear-interpolation quantile (q in [0, 1]) of an unsorted sample.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

struct MedianIqr {
  double median = 0.0;
  double iqr = 0.0;
  std::size_t count = 0;
};

MedianIqr median_iqr(const std::vector<double>& values);

/// "median (iqr)" with three decimals.
std::string format_median_iqr(const MedianIqr& m);

}  // namespace dgca
