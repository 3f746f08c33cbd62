#include "dgca/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace dgca {
namespace {

// Doubled midranks of the pooled sample (integers), plus the tie-size list.
struct PooledRanks {
  std::vector<long> doubled;  // doubled[i]: 2 * midrank of pooled[i]
  std::vector<std::size_t> tie_sizes;
};

PooledRanks pooled_ranks(const std::vector<double>& pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  PooledRanks out;
  out.doubled.assign(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // Ranks i+1 .. j+1 share the midrank (i + j + 2) / 2.
    const long doubled_mid = static_cast<long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) out.doubled[order[k]] = doubled_mid;
    out.tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return out;
}

// Number of size-m subsets of `ranks` for each doubled rank sum.
std::vector<long double> subset_sum_counts(const std::vector<long>& ranks, std::size_t m) {
  const long max_sum = std::accumulate(ranks.begin(), ranks.end(), 0L);
  std::vector<std::vector<long double>> counts(
      m + 1, std::vector<long double>(static_cast<std::size_t>(max_sum) + 1, 0.0L));
  counts[0][0] = 1.0L;
  for (std::size_t idx = 0; idx < ranks.size(); ++idx) {
    const auto r = static_cast<std::size_t>(ranks[idx]);
    for (std::size_t k = std::min(m, idx + 1); k >= 1; --k) {
      auto& dst = counts[k];
      const auto& src = counts[k - 1];
      for (std::size_t s = dst.size(); s-- > r;) dst[s] += src[s - r];
    }
  }
  return counts[m];
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

UTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                           Alternative alternative, std::size_t exact_limit) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const PooledRanks ranks = pooled_ranks(pooled);

  long doubled_rank_sum_a = 0;
  for (std::size_t i = 0; i < n1; ++i) doubled_rank_sum_a += ranks.doubled[i];
  // 2U = 2R - n1(n1+1)
  const long doubled_offset = static_cast<long>(n1 * (n1 + 1));
  const long doubled_u = doubled_rank_sum_a - doubled_offset;

  UTestResult result;
  result.u = static_cast<double>(doubled_u) / 2.0;
  const double nn = static_cast<double>(n1) * static_cast<double>(n2);

  if (std::min(n1, n2) <= exact_limit) {
    result.exact = true;
    // Distribution of the doubled rank sum of sample a over all C(N, n1) splits.
    // Enumerating subsets of the smaller sample is cheaper; map back through
    // R_a = total - R_b.
    const long total = std::accumulate(ranks.doubled.begin(), ranks.doubled.end(), 0L);
    const bool use_a = n1 <= n2;
    const auto counts = subset_sum_counts(ranks.doubled, use_a ? n1 : n2);
    long double le = 0.0L, ge = 0.0L, all = 0.0L;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] == 0.0L) continue;
      const long sum_a = use_a ? static_cast<long>(s) : total - static_cast<long>(s);
      all += counts[s];
      if (sum_a <= doubled_rank_sum_a) le += counts[s];
      if (sum_a >= doubled_rank_sum_a) ge += counts[s];
    }
    const double p_le = static_cast<double>(le / all);
    const double p_ge = static_cast<double>(ge / all);
    switch (alternative) {
      case Alternative::TwoSided: result.p = std::min(1.0, 2.0 * std::min(p_le, p_ge)); break;
      case Alternative::Greater: result.p = p_ge; break;
      case Alternative::Less: result.p = p_le; break;
    }
    return result;
  }

  const double n = static_cast<double>(n1 + n2);
  double tie_term = 0.0;
  for (std::size_t t : ranks.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double var = nn / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) {
    result.p = 1.0;
    return result;
  }
  const double sd = std::sqrt(var);
  const double mu = nn / 2.0;
  switch (alternative) {
    case Alternative::TwoSided: {
      const double z = std::max(0.0, std::abs(result.u - mu) - 0.5) / sd;
      result.p = std::min(1.0, 2.0 * normal_sf(z));
      break;
    }
    case Alternative::Greater:
      result.p = normal_sf((result.u - mu - 0.5) / sd);
      break;
    case Alternative::Less:
      result.p = normal_sf(-(result.u - mu + 0.5) / sd);
      break;
  }
  return result;
}

BonferroniResult bonferroni(const std::vector<double>& pvalues, double alpha) {
  if (pvalues.empty()) throw std::invalid_argument("bonferroni: no p-values");
  BonferroniResult out;
  out.threshold = alpha / static_cast<double>(pvalues.size());
  for (double p : pvalues) out.significant.push_back(p < out.threshold);
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

MedianIqr median_iqr(const std::vector<double>& values) {
  MedianIqr m;
  m.count = values.size();
  m.median = quantile(values, 0.5);
  m.iqr = quantile(values, 0.75) - quantile(values, 0.25);
  return m;
}

std::string format_median_iqr(const MedianIqr& m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f (%.3f)", m.median, m.iqr);
  return buf;
}

}  // namespace dgca
