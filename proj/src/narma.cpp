#include "dgca/narma.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dgca/rng.hpp"

namespace dgca {

NarmaConstants NarmaConstants::for_order(int order) {
  NarmaConstants k;
  if (order >= 20) {
    k.d = 0.01;
    k.tanh_wrap = true;
    k.offset = 0.2;
  }
  return k;
}

std::vector<double> narma_targets(std::span<const double> input, int order,
                                  const NarmaConstants& k) {
  if (order < 1) throw std::invalid_argument("narma: order must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(input.size());
  const std::ptrdiff_t lag = order - 1;
  std::vector<double> y(input.size(), 0.0);
  auto y_at = [&](std::ptrdiff_t t) { return t >= 0 ? y[static_cast<std::size_t>(t)] : 0.0; };
  auto u_at = [&](std::ptrdiff_t t) { return t >= 0 ? input[static_cast<std::size_t>(t)] : 0.0; };

  // y[t] = y(t+1); the recurrence reads y(t) = y[t-1], which is zero before the start.
  double window = 0.0;  // sum of y(t), ..., y(t-N+1)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const double prev = y_at(t - 1);
    const double z = k.a * prev + k.b * prev * window + k.c * u_at(t - lag) * u_at(t) + k.d;
    const double next = (k.tanh_wrap ? std::tanh(z) : z) + k.offset;
    y[static_cast<std::size_t>(t)] = next;
    window += next - y_at(t - order);
  }
  return y;
}

NarmaSeries narma_series(int order, std::size_t length, std::uint64_t seed) {
  return narma_series(order, length, seed, NarmaConstants::for_order(order));
}

NarmaSeries narma_series(int order, std::size_t length, std::uint64_t seed,
                         const NarmaConstants& constants) {
  if (order < 1) throw std::invalid_argument("narma: order must be >= 1");
  if (length <= static_cast<std::size_t>(order)) {
    throw std::invalid_argument("narma: series length must exceed the order");
  }
  NarmaSeries series;
  series.order = order;
  for (int attempt = 0; attempt <= kNarmaMaxRetries; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    series.u.resize(length);
    for (double& v : series.u) v = rng.uniform(0.0, 0.5);
    series.y = narma_targets(series.u, order, constants);
    bool bounded = true;
    for (double v : series.y) {
      if (!std::isfinite(v) || std::abs(v) > kNarmaDivergence) {
        bounded = false;
        break;
      }
    }
    if (bounded) {
      series.retries = attempt;
      return series;
    }
  }
  throw std::runtime_error("narma: series diverged on every retry");
}

void write_series_csv(const NarmaSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,u,y\n";
  char buf[96];
  for (std::size_t t = 0; t < series.u.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", t, series.u[t], series.y[t]);
    out << buf;
  }
}

}  // namespace dgca
