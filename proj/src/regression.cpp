#include "anchored/regression.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "anchored/errors.hpp"

namespace anchored {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kJitterStart = 1e-14;
constexpr double kJitterStop = 1e-8;

}  // namespace

std::vector<double> block_weight_diagonal(const std::vector<int>& block_sizes) {
  std::vector<double> w;
  for (int n : block_sizes) {
    if (n <= 0) throw input_error("block_weight_diagonal: empty block");
    for (int i = 0; i < n; ++i) w.push_back(1.0 / static_cast<double>(n));
  }
  return w;
}

KernelSystem::KernelSystem(const LambdaKernel& kernel, std::vector<Point> X,
                           std::vector<int> block_sizes, double lambda)
    : X_(std::move(X)), block_sizes_(std::move(block_sizes)), lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw input_error("fit: lambda must be positive");
  if (X_.empty()) throw input_error("fit: empty point set");

  const auto n = static_cast<Eigen::Index>(X_.size());
  gram_ = gram(kernel, X_, X_);

  penalty_diag_ = Eigen::VectorXd::Constant(n, lambda_);
  if (!block_sizes_.empty()) {
    int total = 0;
    for (int b : block_sizes_) total += b;
    if (total != static_cast<int>(X_.size())) {
      throw input_error("fit: block sizes do not sum to the point count");
    }
    // lambda * W^{-1}: the inverse of the diagonal W is formed exactly.
    Eigen::Index row = 0;
    for (int b : block_sizes_) {
      for (int i = 0; i < b; ++i) penalty_diag_(row++) = lambda_ * static_cast<double>(b);
    }
  }
  factorize(0.0);
}

void KernelSystem::factorize(double jitter) {
  Eigen::MatrixXd A = gram_;
  A.diagonal() += penalty_diag_;
  if (jitter > 0.0) A.diagonal().array() += jitter;
  ldlt_.compute(A);
  jitter_ = jitter;
  const auto d = ldlt_.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double dmin = d.cwiseAbs().minCoeff();
  condition_estimate_ = (dmin > 0.0) ? dmax / dmin : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd KernelSystem::solve(const Eigen::VectorXd& y) {
  if (y.size() != gram_.rows()) throw input_error("solve: value count does not match points");
  const double ynorm = y.norm();

  const double trace_scale = gram_.trace() / static_cast<double>(gram_.rows());
  double jitter = jitter_;
  while (true) {
    const Eigen::VectorXd alpha = ldlt_.solve(y);
    const Eigen::VectorXd residual =
        gram_ * alpha + penalty_diag_.cwiseProduct(alpha) - y;
    last_residual_ = residual.norm();
    if (ldlt_.info() == Eigen::Success && last_residual_ <= kResidualTol * std::max(ynorm, 1e-300)) {
      return alpha;
    }
    jitter = (jitter == 0.0) ? kJitterStart * trace_scale : jitter * 10.0;
    if (jitter > 1.5 * kJitterStop * trace_scale) {
      std::ostringstream msg;
      msg << "kernel system solve failed: residual " << last_residual_ << " vs tolerance "
          << kResidualTol * ynorm << ", condition estimate " << condition_estimate_
          << " after jitter escalation";
      throw numerical_error(msg.str());
    }
    factorize(jitter);
  }
}

RegressionModel::RegressionModel(LambdaKernel kernel, std::vector<Point> X,
                                 std::vector<int> block_sizes, Eigen::VectorXd alpha,
                                 double lambda, bool weighted, FitDiagnostics diag)
    : kernel_(std::make_shared<const LambdaKernel>(std::move(kernel))),
      X_(std::move(X)),
      block_sizes_(std::move(block_sizes)),
      alpha_(std::move(alpha)),
      lambda_(lambda),
      weighted_(weighted),
      diag_(diag) {}

std::vector<double> RegressionModel::predict(const std::vector<Point>& points) const {
  const auto n = static_cast<long long>(points.size());
  std::vector<double> out(points.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const Point& p = points[static_cast<std::size_t>(i)];
    double s = 0.0;
    for (std::size_t k = 0; k < X_.size(); ++k) {
      s += alpha_(static_cast<Eigen::Index>(k)) * (*kernel_)(p, X_[k]);
    }
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

std::vector<double> RegressionModel::predict_serial(const std::vector<Point>& points) const {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < X_.size(); ++k) {
      s += alpha_(static_cast<Eigen::Index>(k)) * (*kernel_)(points[i], X_[k]);
    }
    out[i] = s;
  }
  return out;
}

namespace {

RegressionModel finish_fit(const LambdaKernel& kernel, KernelSystem& system,
                           const std::vector<double>& y, double lambda, bool weighted) {
  const Eigen::VectorXd yv =
      Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::VectorXd alpha = system.solve(yv);

  FitDiagnostics diag;
  diag.condition_estimate = system.condition_estimate();
  diag.solve_residual = system.last_residual();
  diag.jitter_used = system.jitter_used();
  diag.objective_value = objective(alpha, system.gram_matrix(), yv, lambda, system.block_sizes());

  return RegressionModel(kernel, system.points(), system.block_sizes(), alpha, lambda,
                         weighted, diag);
}

}  // namespace

RegressionModel fit_plain(const LambdaKernel& kernel, const std::vector<Point>& X,
                          const std::vector<double>& y, double lambda) {
  if (X.size() != y.size()) throw input_error("fit_plain: |X| != |y|");
  KernelSystem system(kernel, X, {}, lambda);
  return finish_fit(kernel, system, y, lambda, /*weighted=*/false);
}

RegressionModel fit_weighted(const LambdaKernel& kernel, const SamplingSet& sampling,
                             const std::vector<double>& y, double lambda) {
  std::vector<Point> X;
  std::vector<int> block_sizes;
  sampling.flatten(X, block_sizes);
  if (X.size() != y.size()) {
    throw input_error("fit_weighted: values must be ordered block by block (|X| != |y|)");
  }
  KernelSystem system(kernel, std::move(X), std::move(block_sizes), lambda);
  return finish_fit(kernel, system, y, lambda, /*weighted=*/true);
}

double objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& gram,
                 const Eigen::VectorXd& y, double lambda,
                 const std::vector<int>& block_sizes) {
  const Eigen::VectorXd s = gram * alpha;
  const Eigen::VectorXd r = y - s;
  double misfit = 0.0;
  if (block_sizes.empty()) {
    misfit = r.squaredNorm();
  } else {
    Eigen::Index row = 0;
    for (int b : block_sizes) {
      double block = 0.0;
      for (int i = 0; i < b; ++i) {
        block += r(row) * r(row);
        ++row;
      }
      misfit += block / static_cast<double>(b);
    }
  }
  return misfit + lambda * alpha.dot(gram * alpha);
}

double objective(const RegressionModel& model, const std::vector<double>& y) {
  const Eigen::MatrixXd G = gram(model.kernel(), model.points(), model.points());
  const Eigen::VectorXd yv =
      Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  return objective(model.alpha(), G, yv, model.lambda(), model.block_sizes());
}

double native_norm_squared(const RegressionModel& model) {
  const Eigen::MatrixXd G = gram(model.kernel(), model.points(), model.points());
  return model.alpha().dot(G * model.alpha());
}

double rho1_exponent(double sigma, int n) { return (sigma + 2.5) * (n - 1) + 1.0; }

double rho2_exponent(int n) { return 2.0 * n - 1.0; }

double select_lambda(const LambdaRule& rule) {
  double lambda = 0.0;
  switch (rule.kind) {
    case LambdaRule::Kind::ratio_f1_f2: {
      if (!(rule.f1 > 0.0) || !(rule.f2 > 0.0)) {
        throw input_error("select_lambda: ratio rule needs F1, F2 > 0");
      }
      const double root = rule.f1 / rule.f2;
      lambda = root * root;
      break;
    }
    case LambdaRule::Kind::sobolev_h: {
      const double exponent = rule.sigma - rule.dim / 2.0;
      if (!(exponent > 0.0)) {
        throw input_error("select_lambda: sobolev rule needs sigma > dim/2");
      }
      if (!(rule.h > 0.0)) throw input_error("select_lambda: fill distance must be positive");
      const double root = std::pow(rule.h, exponent);
      lambda = root * root;
      break;
    }
    case LambdaRule::Kind::mixed_logN: {
      if (rule.n_points < 2.0) {
        throw input_error("select_lambda: mixed rule needs N >= 2");
      }
      const double logN = std::log(rule.n_points);
      const double root = std::pow(logN, rho1_exponent(rule.sigma, rule.order) -
                                             rho2_exponent(rule.order)) *
                          std::pow(rule.n_points, -rule.sigma + 0.5);
      lambda = root * root;
      break;
    }
    case LambdaRule::Kind::fixed:
      lambda = rule.fixed_lambda;
      break;
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw input_error("select_lambda: rule produced a non-positive lambda");
  }
  return lambda;
}

}  // namespace anchored
