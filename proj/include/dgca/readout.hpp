#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dgca {

struct BayesianRidgeOptions {
  int max_iter = 3000;
  double tol = 1e-6;
  // Gamma hyperpriors on the noise precision (alpha) and weight precision (lambda).
  double alpha_1 = 1e-6;
  double alpha_2 = 1e-6;
  double lambda_1 = 1e-6;
  double lambda_2 = 1e-6;
};

struct LinearReadout {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double alpha = 0.0;   // noise precision
  double lambda = 0.0;  // weight precision
  int iterations = 0;

  Eigen::VectorXd predict(const Eigen::MatrixXd& states) const;
};

/// Evidence-approximation Bayesian ridge regression with intercept.
///
/// The centred Gram matrix is eigendecomposed once; each evidence update is
/// then O(features), so one solver can be refit cheaply against many targets
/// sharing the same design matrix.
class BayesianRidge {
 public:
  explicit BayesianRidge(const Eigen::MatrixXd& design, BayesianRidgeOptions options = {});

  LinearReadout fit(const Eigen::VectorXd& target) const;

  Eigen::Index samples() const noexcept { return samples_; }
  Eigen::Index features() const noexcept { return features_; }

 private:
  BayesianRidgeOptions options_;
  Eigen::Index samples_;
  Eigen::Index features_;
  Eigen::RowVectorXd column_mean_;
  Eigen::MatrixXd centered_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
};

/// One-shot fit. Throws std::invalid_argument on shape mismatch or non-finite input.
LinearReadout train_readout(const Eigen::MatrixXd& states, std::span<const double> target,
                            const BayesianRidgeOptions& options = {});

/// sqrt(mean((pred - truth)^2) / var(truth)). Throws if lengths differ, are
/// shorter than 2, or truth has zero variance.
double nrmse(std::span<const double> pred, std::span<const double> truth);

}  // namespace dgca
