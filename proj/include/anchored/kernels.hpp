#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"

namespace anchored {

/// Univariate kernel on [a_j,b_j] annihilating at the anchor component:
/// k(x, c_j) = 0 for every x.
///
/// Two families are supported. anchored_h1 is the reproducing kernel of the
/// univariate H^1 functions vanishing at c_j with inner product <f',g'>:
/// k(x,y) = min(|x-c|,|y-c|) when x and y lie on the same side of the anchor,
/// 0 otherwise. The pinned kinds start from a classical kernel k0 and force
/// annihilation via k(x,y) = k0(x,y) - k0(x,c) k0(c,y) / k0(c,c).
struct UnivariateKernel {
  enum class Kind { anchored_h1, pinned_brownian, pinned_matern };

  Kind kind = Kind::anchored_h1;
  double anchor = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  // Matern parameters (nu in {0.5, 1.5, 2.5}).
  double nu = 2.5;
  double lengthscale = 1.0;

  double operator()(double x, double y) const;
};

UnivariateKernel make_anchored_h1(double anchor, double lo, double hi);
UnivariateKernel make_pinned_brownian(double anchor, double lo, double hi);
UnivariateKernel make_pinned_matern(double anchor, double lo, double hi, double nu,
                                    double lengthscale = 1.0);

/// The Lambda-subspace kernel
///   K(x,y) = sum_{u in Lambda} gamma_u prod_{j in u} k_j(x_j, y_j),
/// with the empty product equal to 1 (constant term gamma_empty).
class LambdaKernel {
 public:
  LambdaKernel(DownwardClosedFamily family, std::vector<double> gamma,
               std::vector<UnivariateKernel> factors);

  double operator()(std::span<const double> x, std::span<const double> y) const;

  const DownwardClosedFamily& family() const { return family_; }
  const std::vector<double>& gamma() const { return gamma_; }
  const std::vector<UnivariateKernel>& factors() const { return factors_; }
  int dim() const { return family_.dim; }
  double gamma_empty() const;

 private:
  DownwardClosedFamily family_;
  std::vector<double> gamma_;
  std::vector<UnivariateKernel> factors_;
};

/// Gram matrix G[i][j] = K(y_i, x_j). Univariate factor values are computed
/// once per (coordinate, pair) and reused across the Lambda terms; rows run
/// in parallel.
Eigen::MatrixXd gram(const LambdaKernel& kernel, const std::vector<Point>& Y,
                     const std::vector<Point>& X);

/// Serial reference: every entry evaluated independently through
/// LambdaKernel::operator(). Kept for parity tests and benchmarks.
Eigen::MatrixXd gram_serial(const LambdaKernel& kernel, const std::vector<Point>& Y,
                            const std::vector<Point>& X);

}  // namespace anchored
