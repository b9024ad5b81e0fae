#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "anchored/geometry.hpp"
#include "anchored/kernels.hpp"

namespace anchored {

struct FitDiagnostics {
  double condition_estimate = 0.0;
  double solve_residual = 0.0;
  double objective_value = 0.0;
  double jitter_used = 0.0;
};

/// Diagonal of the block matrix W: 1/N_k repeated N_k times per block.
std::vector<double> block_weight_diagonal(const std::vector<int>& block_sizes);

/// Factorization of K(X,X) + lambda D, where D = I for the plain estimator
/// and D = W^{-1} = diag(N_k,...) for the block-weighted one. The same
/// factorization serves any number of right-hand sides.
///
/// Solves are accepted when the residual against the unperturbed system is
/// <= 1e-8 ||y||; otherwise the factorization is retried with escalating
/// diagonal jitter (1e-14 * trace/N, growing tenfold up to 1e-8 * trace/N)
/// before a numerical_error is raised.
class KernelSystem {
 public:
  KernelSystem(const LambdaKernel& kernel, std::vector<Point> X,
               std::vector<int> block_sizes, double lambda);

  Eigen::VectorXd solve(const Eigen::VectorXd& y);

  const std::vector<Point>& points() const { return X_; }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  const Eigen::MatrixXd& gram_matrix() const { return gram_; }
  double lambda() const { return lambda_; }
  double condition_estimate() const { return condition_estimate_; }
  double jitter_used() const { return jitter_; }
  double last_residual() const { return last_residual_; }

 private:
  void factorize(double jitter);

  std::vector<Point> X_;
  std::vector<int> block_sizes_;
  double lambda_ = 0.0;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd penalty_diag_;  // lambda * D
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  double condition_estimate_ = 0.0;
  double jitter_ = 0.0;
  double last_residual_ = 0.0;
};

/// A fitted penalized least-squares model: prediction at x is
/// sum_i alpha_i K(x, x_i).
class RegressionModel {
 public:
  RegressionModel() = default;
  RegressionModel(LambdaKernel kernel, std::vector<Point> X, std::vector<int> block_sizes,
                  Eigen::VectorXd alpha, double lambda, bool weighted, FitDiagnostics diag);

  std::vector<double> predict(const std::vector<Point>& points) const;
  /// Naive per-point double loop, kept as the reference path.
  std::vector<double> predict_serial(const std::vector<Point>& points) const;

  const LambdaKernel& kernel() const { return *kernel_; }
  const std::vector<Point>& points() const { return X_; }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  bool weighted() const { return weighted_; }
  const FitDiagnostics& diagnostics() const { return diag_; }

 private:
  std::shared_ptr<const LambdaKernel> kernel_;
  std::vector<Point> X_;
  std::vector<int> block_sizes_;
  Eigen::VectorXd alpha_;
  double lambda_ = 0.0;
  bool weighted_ = false;
  FitDiagnostics diag_;
};

/// Minimizer of J(s) = sum_j |y_j - s(x_j)|^2 + lambda ||s||^2 over the
/// kernel's native space: alpha = (K(X,X) + lambda I)^{-1} y.
RegressionModel fit_plain(const LambdaKernel& kernel, const std::vector<Point>& X,
                          const std::vector<double>& y, double lambda);

/// Minimizer of J^(Lambda)(s) = sum_v (1/#X_v) ||y - s||^2_{l2(X_v)}
/// + lambda ||s||^2: alpha = (K(X,X) + lambda W^{-1})^{-1} y, with y ordered
/// block by block to match the sampling set.
RegressionModel fit_weighted(const LambdaKernel& kernel, const SamplingSet& sampling,
                             const std::vector<double>& y, double lambda);

/// J (or J^(Lambda) when block sizes are given) for an arbitrary coefficient
/// vector in the span of K(.,x_i); ||s||^2 is the Gram quadratic form.
double objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& gram,
                 const Eigen::VectorXd& y, double lambda,
                 const std::vector<int>& block_sizes = {});

/// Objective of a fitted model against its training values.
double objective(const RegressionModel& model, const std::vector<double>& y);

/// Native norm squared ||s||^2_K = alpha^T K(X,X) alpha of a model.
double native_norm_squared(const RegressionModel& model);

/// Smoothing-parameter selection rules.
struct LambdaRule {
  enum class Kind { ratio_f1_f2, sobolev_h, mixed_logN, fixed };
  Kind kind = Kind::fixed;

  double f1 = 1.0, f2 = 1.0;   // ratio_f1_f2: sqrt(lambda) = F1/F2
  double sigma = 0.0;          // sobolev_h, mixed_logN
  double dim = 0.0;            // sobolev_h: sqrt(lambda) = h^(sigma - dim/2)
  double h = 0.0;              // sobolev_h fill distance
  int order = 1;               // mixed_logN: n (the family order)
  double n_points = 0.0;       // mixed_logN: N
  double fixed_lambda = 1e-6;  // fixed
};

/// Exponents of the mixed-regularity rate: rho1 = (sigma + 5/2)(n-1) + 1,
/// rho2 = 2n - 1.
double rho1_exponent(double sigma, int n);
double rho2_exponent(int n);

double select_lambda(const LambdaRule& rule);

}  // namespace anchored
