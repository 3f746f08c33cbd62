#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dgca {

/// Coefficients of y(t+1) = g(a*y(t) + b*y(t)*sum_{i<N} y(t-i) + c*u(t-N+1)*u(t) + d) + offset,
/// with g the identity or tanh.
struct NarmaConstants {
  double a = 0.3;
  double b = 0.05;
  double c = 1.5;
  double d = 0.1;
  bool tanh_wrap = false;
  double offset = 0.0;

  /// Standard NARMA-10 form for N < 20, tanh-stabilised form for N >= 20.
  static NarmaConstants for_order(int order);
};

struct NarmaSeries {
  int order = 0;
  std::vector<double> u;  // inputs, uniform on [0, 0.5]
  std::vector<double> y;  // y[t] is the target once u[0..t] has been seen
  int retries = 0;        // re-draws caused by divergence
};

inline constexpr double kNarmaDivergence = 1e3;
inline constexpr int kNarmaMaxRetries = 100;

/// Targets for a given input with zero history before t = 0. Entry t is
/// y(t+1) of the recurrence driven by u(t) = input[t].
std::vector<double> narma_targets(std::span<const double> input, int order,
                                  const NarmaConstants& constants);

/// Draws a length-T series. If any |y| exceeds kNarmaDivergence the input is
/// re-drawn from the next derived seed. Throws std::invalid_argument for
/// order < 1 or length <= order.
NarmaSeries narma_series(int order, std::size_t length, std::uint64_t seed);
NarmaSeries narma_series(int order, std::size_t length, std::uint64_t seed,
                         const NarmaConstants& constants);

/// CSV with header t,u,y.
void write_series_csv(const NarmaSeries& series, const std::filesystem::path& path);

}  // namespace dgca
