#include "dgca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace dgca {
namespace {

double dense_spectral_radius(const Eigen::MatrixXd& w) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(w, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral radius: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Power iteration estimate, or nullopt if it does not settle within max_iter.
std::optional<double> power_iteration(const Eigen::MatrixXd& w, Rng& rng, double tol, int max_iter) {
  const Eigen::Index n = w.rows();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
  const double norm0 = x.norm();
  if (norm0 == 0.0) return std::nullopt;
  x /= norm0;
  double previous = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = w * x;
    const double estimate = y.norm();
    if (estimate == 0.0) return 0.0;  // nilpotent along this start vector
    // A settled norm is not enough: a complex dominant pair can make it stall
    // while x keeps rotating. Accept only a real eigenpair, W x = +-lambda x.
    const bool settled = previous >= 0.0 && std::abs(estimate - previous) <= tol * std::max(1.0, estimate);
    if (settled) {
      const double residual = std::min((y - estimate * x).norm(), (y + estimate * x).norm());
      if (residual <= 100.0 * tol * std::max(1.0, estimate)) return estimate;
    }
    x = y / estimate;
    previous = estimate;
  }
  return std::nullopt;
}

// Runs each input stream from x(0) = 0 and collects the final state as a column.
std::optional<Eigen::MatrixXd> final_states(const ReservoirSystem& sys,
                                            const std::vector<std::vector<double>>& streams) {
  const auto n = static_cast<Eigen::Index>(sys.size());
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(streams.size()));
  for (std::size_t s = 0; s < streams.size(); ++s) {
    const ReservoirRun run = run_reservoir(sys, streams[s], streams[s].size() - 1);
    if (run.diverged) return std::nullopt;
    out.col(static_cast<Eigen::Index>(s)) = run.states.row(run.states.rows() - 1).transpose();
  }
  return out;
}

std::size_t stream_count(const ReservoirSystem& sys, const MetricConfig& cfg) {
  return std::min(sys.size(), cfg.rank_streams);
}

void check_streams(const MetricConfig& cfg) {
  if (cfg.stream_length == 0) throw std::invalid_argument("metrics: stream length must be positive");
}

double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double va = ca.squaredNorm();
  const double vb = cb.squaredNorm();
  if (!(va > 1e-300) || !(vb > 1e-300)) return 0.0;
  const double cov = ca.dot(cb);
  return cov * cov / (va * vb);
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& w, const MetricConfig& cfg) {
  if (w.rows() != w.cols()) throw std::invalid_argument("spectral radius: matrix is not square");
  if (w.size() == 0) return 0.0;
  if (static_cast<std::size_t>(w.rows()) <= cfg.sr_dense_limit) return dense_spectral_radius(w);
  Rng rng(derive_seed(cfg.rng_seed, stream::kMetrics, 0x5e));
  for (int attempt = 0; attempt < cfg.sr_restarts; ++attempt) {
    if (auto est = power_iteration(w, rng, cfg.sr_tolerance, cfg.sr_max_iter)) return *est;
  }
  return dense_spectral_radius(w);
}

int numerical_rank(const Eigen::MatrixXd& m, double relative_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  const double cutoff = relative_tol * s[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) ++rank;
  }
  return rank;
}

std::optional<Eigen::MatrixXd> kernel_states(const ReservoirSystem& sys, const MetricConfig& cfg) {
  check_streams(cfg);
  Rng rng(derive_seed(cfg.rng_seed, stream::kMetrics, 0x4b));
  std::vector<std::vector<double>> streams(stream_count(sys, cfg));
  for (auto& s : streams) {
    s.resize(cfg.stream_length);
    for (double& v : s) v = rng.uniform(0.0, 0.5);
  }
  return final_states(sys, streams);
}

std::optional<Eigen::MatrixXd> generalization_states(const ReservoirSystem& sys,
                                                     const MetricConfig& cfg) {
  check_streams(cfg);
  Rng rng(derive_seed(cfg.rng_seed, stream::kMetrics, 0x47));
  std::vector<double> base(cfg.stream_length);
  for (double& v : base) v = rng.uniform(0.0, 0.5);
  std::vector<std::vector<double>> streams(stream_count(sys, cfg));
  for (auto& s : streams) {
    s = base;
    for (double& v : s) v = std::clamp(v + rng.uniform(-cfg.gr_noise, cfg.gr_noise), 0.0, 0.5);
  }
  return final_states(sys, streams);
}

int kernel_rank(const ReservoirSystem& sys, const MetricConfig& cfg) {
  const auto states = kernel_states(sys, cfg);
  return states ? numerical_rank(*states, cfg.rank_tolerance) : 0;
}

int generalization_rank(const ReservoirSystem& sys, const MetricConfig& cfg) {
  const auto states = generalization_states(sys, cfg);
  return states ? numerical_rank(*states, cfg.rank_tolerance) : 0;
}

double linear_memory_capacity(const ReservoirSystem& sys, const MetricConfig& cfg) {
  const std::size_t n = sys.size();
  const std::size_t max_delay = cfg.lmc_max_delay == 0 ? 2 * n : cfg.lmc_max_delay;
  if (cfg.lmc_length <= cfg.lmc_washout + cfg.lmc_test + 1) {
    throw std::invalid_argument("lmc: length must exceed washout + test");
  }
  const std::size_t nominal_train = cfg.lmc_length - cfg.lmc_washout - cfg.lmc_test;
  // Delayed targets must stay inside the drive signal, so the discarded
  // prefix grows with the longest delay while train/test lengths stay fixed.
  const std::size_t start = std::max(cfg.lmc_washout, max_delay);
  const std::size_t total = start + nominal_train + cfg.lmc_test;

  Rng rng(derive_seed(cfg.rng_seed, stream::kMetrics, 0x4c));
  std::vector<double> u(total);
  for (double& v : u) v = rng.uniform(0.0, 0.5);

  const ReservoirRun run = run_reservoir(sys, u, start);
  if (run.diverged) return 0.0;
  const auto train = static_cast<Eigen::Index>(nominal_train);
  const auto test = static_cast<Eigen::Index>(cfg.lmc_test);
  const Eigen::MatrixXd x_test = run.states.bottomRows(test);
  const BayesianRidge solver(run.states.topRows(train), cfg.ridge);

  double capacity = 0.0;
  Eigen::VectorXd target_train(train);
  Eigen::VectorXd target_test(test);
  for (std::size_t k = 1; k <= max_delay; ++k) {
    // Row r corresponds to time start + r; its delay-k target is u(start + r - k + 1).
    for (Eigen::Index r = 0; r < train; ++r) {
      target_train[r] = u[start + static_cast<std::size_t>(r) + 1 - k];
    }
    for (Eigen::Index r = 0; r < test; ++r) {
      target_test[r] = u[start + nominal_train + static_cast<std::size_t>(r) + 1 - k];
    }
    const LinearReadout readout = solver.fit(target_train);
    const double mc = squared_correlation(readout.predict(x_test), target_test);
    capacity += std::clamp(mc, 0.0, 1.0);
  }
  return std::clamp(capacity, 0.0, static_cast<double>(max_delay));
}

MetricSuite metric_suite(const StateGraph& g, const MetricConfig& cfg) {
  MetricSuite suite;
  if (g.empty()) return suite;
  Rng weight_rng(derive_seed(cfg.rng_seed, stream::kInputWeights));
  const ReservoirSystem sys = build_reservoir(g, weight_rng, cfg.reservoir);
  const double n = static_cast<double>(sys.size());
  suite.n = sys.size();
  suite.kernel_rank = kernel_rank(sys, cfg);
  suite.generalization_rank = generalization_rank(sys, cfg);
  suite.memory_capacity = linear_memory_capacity(sys, cfg);
  suite.kr = suite.kernel_rank / n;
  suite.gr = suite.generalization_rank / n;
  suite.lmc = std::min(1.0, suite.memory_capacity / n);
  suite.sr = spectral_radius(sys.weights, cfg);
  suite.valid = true;
  return suite;
}

std::string_view to_string(MetricKind k) {
  switch (k) {
    case MetricKind::KR: return "kr";
    case MetricKind::GR: return "gr";
    case MetricKind::LMC: return "lmc";
    case MetricKind::SR: return "sr";
    case MetricKind::All: return "all";
  }
  return "unknown";
}

MetricKind metric_kind_from_string(std::string_view s) {
  if (s == "kr") return MetricKind::KR;
  if (s == "gr") return MetricKind::GR;
  if (s == "lmc") return MetricKind::LMC;
  if (s == "sr") return MetricKind::SR;
  if (s == "all") return MetricKind::All;
  throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

double sr_fitness(double sr) { return 1.0 / (1.0 + std::abs(sr - 1.0)); }

double metric_fitness(MetricKind kind, const StateGraph& g, const MetricConfig& cfg) {
  if (g.empty()) return 0.0;
  if (kind == MetricKind::All) {
    const MetricSuite s = metric_suite(g, cfg);
    return s.kr + s.gr + s.lmc + sr_fitness(s.sr);
  }
  if (kind == MetricKind::SR) return sr_fitness(spectral_radius(bipolarize(g), cfg));

  Rng weight_rng(derive_seed(cfg.rng_seed, stream::kInputWeights));
  const ReservoirSystem sys = build_reservoir(g, weight_rng, cfg.reservoir);
  const double n = static_cast<double>(sys.size());
  switch (kind) {
    case MetricKind::KR: return kernel_rank(sys, cfg) / n;
    case MetricKind::GR: return generalization_rank(sys, cfg) / n;
    case MetricKind::LMC: return std::min(1.0, linear_memory_capacity(sys, cfg) / n);
    default: break;
  }
  return 0.0;
}

}  // namespace dgca
