#include "anchored/kernels.hpp"

#include <cmath>

#include "anchored/errors.hpp"

namespace anchored {

namespace {

double matern(double r, double nu, double ell) {
  const double t = std::abs(r) / ell;
  if (nu == 0.5) return std::exp(-t);
  if (nu == 1.5) {
    const double s = std::sqrt(3.0) * t;
    return (1.0 + s) * std::exp(-s);
  }
  if (nu == 2.5) {
    const double s = std::sqrt(5.0) * t;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
  }
  throw input_error("matern: nu must be one of 0.5, 1.5, 2.5");
}

// Brownian-motion kernel shifted to the interval origin. Positive
// semidefinite on [lo,hi]; k(lo,lo) = 0.
double brownian(double x, double y, double lo) {
  return std::min(x - lo, y - lo);
}

}  // namespace

double UnivariateKernel::operator()(double x, double y) const {
  switch (kind) {
    case Kind::anchored_h1: {
      const double dx = x - anchor;
      const double dy = y - anchor;
      if (dx * dy <= 0.0) return 0.0;
      return std::min(std::abs(dx), std::abs(dy));
    }
    case Kind::pinned_brownian: {
      const double kcc = brownian(anchor, anchor, lo);
      return brownian(x, y, lo) - brownian(x, anchor, lo) * brownian(anchor, y, lo) / kcc;
    }
    case Kind::pinned_matern: {
      const double kcc = matern(0.0, nu, lengthscale);
      return matern(x - y, nu, lengthscale) -
             matern(x - anchor, nu, lengthscale) * matern(anchor - y, nu, lengthscale) / kcc;
    }
  }
  return 0.0;
}

UnivariateKernel make_anchored_h1(double anchor, double lo, double hi) {
  if (anchor < lo || anchor > hi) throw input_error("kernel anchor outside interval");
  return UnivariateKernel{UnivariateKernel::Kind::anchored_h1, anchor, lo, hi, 0.0, 1.0};
}

UnivariateKernel make_pinned_brownian(double anchor, double lo, double hi) {
  if (anchor < lo || anchor > hi) throw input_error("kernel anchor outside interval");
  if (anchor == lo) {
    // k0(c,c) = 0: the pinning denominator vanishes.
    throw input_error("pinned_brownian: anchor coincides with the interval origin");
  }
  return UnivariateKernel{UnivariateKernel::Kind::pinned_brownian, anchor, lo, hi, 0.0, 1.0};
}

UnivariateKernel make_pinned_matern(double anchor, double lo, double hi, double nu,
                                    double lengthscale) {
  if (anchor < lo || anchor > hi) throw input_error("kernel anchor outside interval");
  if (nu != 0.5 && nu != 1.5 && nu != 2.5) {
    throw input_error("pinned_matern: nu must be one of 0.5, 1.5, 2.5");
  }
  if (lengthscale <= 0.0) throw input_error("pinned_matern: lengthscale must be positive");
  return UnivariateKernel{UnivariateKernel::Kind::pinned_matern, anchor, lo, hi, nu, lengthscale};
}

LambdaKernel::LambdaKernel(DownwardClosedFamily family, std::vector<double> gamma,
                           std::vector<UnivariateKernel> factors)
    : family_(std::move(family)), gamma_(std::move(gamma)), factors_(std::move(factors)) {
  if (gamma_.size() != family_.members.size()) {
    throw input_error("LambdaKernel: gamma list must align with the family members");
  }
  if (static_cast<int>(factors_.size()) != family_.dim) {
    throw input_error("LambdaKernel: need one univariate factor per coordinate");
  }
  for (double g : gamma_) {
    if (!(g > 0.0)) throw input_error("LambdaKernel: weights gamma_u must be positive");
  }
}

double LambdaKernel::gamma_empty() const {
  for (std::size_t i = 0; i < family_.members.size(); ++i) {
    if (family_.members[i].bits == 0) return gamma_[i];
  }
  return 0.0;
}

double LambdaKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  double total = 0.0;
  for (std::size_t i = 0; i < family_.members.size(); ++i) {
    double term = gamma_[i];
    std::uint64_t bits = family_.members[i].bits;
    while (bits != 0) {
      const int j = std::countr_zero(bits);
      term *= factors_[static_cast<std::size_t>(j)](x[static_cast<std::size_t>(j)],
                                                    y[static_cast<std::size_t>(j)]);
      bits &= bits - 1;
    }
    total += term;
  }
  return total;
}

Eigen::MatrixXd gram(const LambdaKernel& kernel, const std::vector<Point>& Y,
                     const std::vector<Point>& X) {
  const auto rows = static_cast<Eigen::Index>(Y.size());
  const auto cols = static_cast<Eigen::Index>(X.size());
  const int d = kernel.dim();
  const auto& members = kernel.family().members;
  const auto& gamma = kernel.gamma();
  const auto& factors = kernel.factors();

  Eigen::MatrixXd G(rows, cols);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) {
    std::vector<double> uni(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Point& yi = Y[static_cast<std::size_t>(i)];
      const Point& xj = X[static_cast<std::size_t>(j)];
      for (int k = 0; k < d; ++k) {
        uni[static_cast<std::size_t>(k)] =
            factors[static_cast<std::size_t>(k)](yi[static_cast<std::size_t>(k)],
                                                 xj[static_cast<std::size_t>(k)]);
      }
      double total = 0.0;
      for (std::size_t m = 0; m < members.size(); ++m) {
        double term = gamma[m];
        std::uint64_t bits = members[m].bits;
        while (bits != 0) {
          term *= uni[static_cast<std::size_t>(std::countr_zero(bits))];
          bits &= bits - 1;
        }
        total += term;
      }
      G(i, j) = total;
    }
  }
  return G;
}

Eigen::MatrixXd gram_serial(const LambdaKernel& kernel, const std::vector<Point>& Y,
                            const std::vector<Point>& X) {
  Eigen::MatrixXd G(static_cast<Eigen::Index>(Y.size()), static_cast<Eigen::Index>(X.size()));
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      G(i, j) = kernel(Y[static_cast<std::size_t>(i)], X[static_cast<std::size_t>(j)]);
    }
  }
  return G;
}

}  // namespace anchored
