#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dgca/narma.hpp"

using namespace dgca;

TEST_CASE("zero input prefix follows the recurrence by hand") {
  const std::vector<double> u(40, 0.0);
  const auto y = narma_targets(u, 10, NarmaConstants::for_order(10));
  CHECK(std::abs(y[0] - 0.1) < 1e-12);
  CHECK(std::abs(y[1] - (0.3 * 0.1 + 0.05 * 0.1 * 0.1 + 0.1)) < 1e-12);
  CHECK(std::abs(y[1] - 0.1305) < 1e-12);
}

TEST_CASE("recurrence against a direct loop with explicit history") {
  const auto series = narma_series(10, 300, 17);
  const auto& u = series.u;
  const auto& y = series.y;
  // yy[t + 1] is y(t+1); yy[0] = y(0) = 0.
  std::vector<double> yy(u.size() + 1, 0.0);
  for (std::size_t t = 0; t < u.size(); ++t) {
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
      if (static_cast<long>(t) - i >= 0) sum += yy[t - static_cast<std::size_t>(i)];
    }
    const double lagged = t >= 9 ? u[t - 9] : 0.0;
    yy[t + 1] = 0.3 * yy[t] + 0.05 * yy[t] * sum + 1.5 * lagged * u[t] + 0.1;
    CHECK(std::abs(y[t] - yy[t + 1]) < 1e-12);
  }
}

TEST_CASE("higher orders use the tanh-stabilised form") {
  const auto c = NarmaConstants::for_order(20);
  CHECK(c.tanh_wrap);
  CHECK(c.d == 0.01);
  CHECK(c.offset == 0.2);
  const std::vector<double> u(5, 0.0);
  const auto y = narma_targets(u, 20, c);
  CHECK(y[0] == doctest::Approx(std::tanh(0.01) + 0.2).epsilon(1e-14));
  for (int order : {20, 30}) {
    const auto s = narma_series(order, 3000, 99);
    for (double v : s.y) CHECK(std::abs(v) < 1.3);
  }
}

TEST_CASE("series are deterministic, bounded and validated") {
  const auto a = narma_series(10, 500, 5);
  const auto b = narma_series(10, 500, 5);
  CHECK(a.u == b.u);
  CHECK(a.y == b.y);
  CHECK(a.u.size() == 500);
  CHECK(a.y.size() == 500);
  CHECK(narma_series(10, 500, 6).u != a.u);
  CHECK_THROWS_AS(narma_series(10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(narma_series(0, 10, 1), std::invalid_argument);

  int retried = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = narma_series(10, 1000, seed);
    for (double v : s.u) {
      CHECK(v >= 0.0);
      CHECK(v <= 0.5);
    }
    for (double v : s.y) CHECK(std::abs(v) <= kNarmaDivergence);
    retried += s.retries > 0;
  }
  CHECK(retried <= 2);
}

TEST_CASE("series csv") {
  const auto s = narma_series(10, 20, 1);
  const auto path = std::filesystem::temp_directory_path() / "dgca_narma_test.csv";
  write_series_csv(s, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,u,y");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 20);
  std::filesystem::remove(path);
}
