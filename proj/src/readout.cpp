#include "dgca/readout.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dgca {

Eigen::VectorXd LinearReadout::predict(const Eigen::MatrixXd& states) const {
  return (states * weights).array() + intercept;
}

BayesianRidge::BayesianRidge(const Eigen::MatrixXd& design, BayesianRidgeOptions options)
    : options_(options), samples_(design.rows()), features_(design.cols()) {
  if (samples_ < 2) throw std::invalid_argument("bayesian ridge: need at least two samples");
  if (!design.allFinite()) throw std::invalid_argument("bayesian ridge: non-finite design");
  column_mean_ = design.colwise().mean();
  centered_ = design.rowwise() - column_mean_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered_.transpose() * centered_);
  eigenvectors_ = eig.eigenvectors();
  eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
}

LinearReadout BayesianRidge::fit(const Eigen::VectorXd& target) const {
  if (target.size() != samples_) throw std::invalid_argument("bayesian ridge: target length");
  if (!target.allFinite()) throw std::invalid_argument("bayesian ridge: non-finite target");

  const double n = static_cast<double>(samples_);
  const double y_mean = target.mean();
  const Eigen::VectorXd y = target.array() - y_mean;
  const double yy = y.squaredNorm();
  // Projection of X^T y onto the Gram eigenbasis.
  const Eigen::VectorXd proj = eigenvectors_.transpose() * (centered_.transpose() * y);

  const double eps = std::numeric_limits<double>::epsilon();
  double alpha = 1.0 / (yy / n + eps);
  double lambda = 1.0;
  Eigen::VectorXd coef_basis(features_);

  auto solve = [&](double a, double l) {
    // w = (X^T X + l/a I)^-1 X^T y in the eigenbasis.
    const double ratio = l / a;
    for (Eigen::Index i = 0; i < features_; ++i) {
      coef_basis[i] = proj[i] / (eigenvalues_[i] + ratio);
    }
    // ||y - Xw||^2 = y'y - 2 w'X'y + w'X'Xw
    double rss = yy;
    for (Eigen::Index i = 0; i < features_; ++i) {
      rss += -2.0 * coef_basis[i] * proj[i] + eigenvalues_[i] * coef_basis[i] * coef_basis[i];
    }
    return std::max(rss, 0.0);
  };

  int iter = 0;
  for (; iter < options_.max_iter; ++iter) {
    const double rss = solve(alpha, lambda);
    double gamma = 0.0;
    for (Eigen::Index i = 0; i < features_; ++i) {
      gamma += alpha * eigenvalues_[i] / (lambda + alpha * eigenvalues_[i]);
    }
    const double new_lambda =
        (gamma + 2.0 * options_.lambda_1) / (coef_basis.squaredNorm() + 2.0 * options_.lambda_2);
    const double new_alpha = (n - gamma + 2.0 * options_.alpha_1) / (rss + 2.0 * options_.alpha_2);
    const bool converged = std::abs(new_alpha - alpha) <= options_.tol * alpha &&
                           std::abs(new_lambda - lambda) <= options_.tol * lambda;
    alpha = new_alpha;
    lambda = new_lambda;
    if (converged) {
      ++iter;
      break;
    }
  }
  solve(alpha, lambda);

  LinearReadout out;
  out.weights = eigenvectors_ * coef_basis;
  out.intercept = y_mean - column_mean_.dot(out.weights);
  out.alpha = alpha;
  out.lambda = lambda;
  out.iterations = iter;
  return out;
}

LinearReadout train_readout(const Eigen::MatrixXd& states, std::span<const double> target,
                            const BayesianRidgeOptions& options) {
  if (static_cast<std::size_t>(states.rows()) != target.size()) {
    throw std::invalid_argument("train_readout: row count does not match target length");
  }
  const Eigen::Map<const Eigen::VectorXd> y(target.data(), static_cast<Eigen::Index>(target.size()));
  return BayesianRidge(states, options).fit(y);
}

double nrmse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("nrmse: length mismatch");
  if (truth.size() < 2) throw std::invalid_argument("nrmse: need at least two samples");
  const double n = static_cast<double>(truth.size());
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= n;
  double var = 0.0;
  double mse = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    var += (truth[i] - mean) * (truth[i] - mean);
    mse += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  }
  var /= n;
  mse /= n;
  if (!(var > 0.0)) throw std::invalid_argument("nrmse: target has zero variance");
  return std::sqrt(mse / var);
}

}  // namespace dgca
