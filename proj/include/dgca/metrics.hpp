#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "dgca/graph.hpp"
#include "dgca/readout.hpp"
#include "dgca/reservoir.hpp"

namespace dgca {

/// Protocol constants for the task-independent reservoir metrics.
struct MetricConfig {
  // Kernel / generalisation rank
  std::size_t rank_streams = 50;  // m = min(n, rank_streams)
  std::size_t stream_length = 100;
  std::size_t stream_washout = 50;
  double gr_noise = 0.01;
  double rank_tolerance = 1e-6;  // relative to the largest singular value
  // Linear memory capacity
  std::size_t lmc_length = 2200;
  std::size_t lmc_washout = 200;
  std::size_t lmc_test = 500;
  std::size_t lmc_max_delay = 0;  // 0 means 2n
  BayesianRidgeOptions ridge;
  // Spectral radius
  double sr_tolerance = 1e-8;
  std::size_t sr_dense_limit = 64;
  int sr_restarts = 3;
  int sr_max_iter = 2000;

  ReservoirOptions reservoir;
  std::uint64_t rng_seed = 0;
};

/// Largest eigenvalue magnitude. Dense eigensolver up to sr_dense_limit nodes;
/// above it, power iteration with random restarts, falling back to the dense
/// solver when the iteration does not settle (e.g. complex dominant pairs).
double spectral_radius(const Eigen::MatrixXd& w, const MetricConfig& cfg = {});

/// Number of singular values above tol * largest.
int numerical_rank(const Eigen::MatrixXd& m, double relative_tol);

/// Final reservoir states (n x m) for m independent uniform [0, 0.5] streams.
/// Empty optional when any stream diverges.
std::optional<Eigen::MatrixXd> kernel_states(const ReservoirSystem& sys, const MetricConfig& cfg);

/// As kernel_states, but all streams share one base signal plus uniform noise
/// of amplitude cfg.gr_noise, clamped to [0, 0.5].
std::optional<Eigen::MatrixXd> generalization_states(const ReservoirSystem& sys,
                                                     const MetricConfig& cfg);

/// Rank of kernel_states (0 on divergence).
int kernel_rank(const ReservoirSystem& sys, const MetricConfig& cfg);
/// Rank of generalization_states (0 on divergence).
int generalization_rank(const ReservoirSystem& sys, const MetricConfig& cfg);

/// Sum over delays k = 1..k_max of the squared correlation between u(t-k+1)
/// (k = 1 is the most recent input the state has absorbed) and its linear
/// reconstruction on held-out steps. Clamped to [0, k_max]; 0 on divergence.
double linear_memory_capacity(const ReservoirSystem& sys, const MetricConfig& cfg);

struct MetricSuite {
  std::size_t n = 0;
  int kernel_rank = 0;
  int generalization_rank = 0;
  double memory_capacity = 0.0;  // raw LMC
  double kr = 0.0;                // normalised by n
  double gr = 0.0;
  double lmc = 0.0;
  double sr = 0.0;
  bool valid = false;
};

/// All four metrics. An empty graph gives an invalid, all-zero suite.
MetricSuite metric_suite(const StateGraph& g, const MetricConfig& cfg);

enum class MetricKind { KR, GR, LMC, SR, All };

std::string_view to_string(MetricKind k);
MetricKind metric_kind_from_string(std::string_view s);

/// KR/GR/LMC: normalised value; SR: 1 / (1 + |SR - 1|); All: sum of the four.
/// Empty graphs score 0.
double metric_fitness(MetricKind kind, const StateGraph& g, const MetricConfig& cfg);

double sr_fitness(double sr);

}  // namespace dgca
