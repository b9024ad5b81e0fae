#include "anchored/quadrature.hpp"

#include <cmath>

#include "anchored/errors.hpp"

namespace anchored {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw input_error("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean evaluation of P_n' at the converged node.
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }
  return rule;
}

double tensor_quadrature(const std::function<double(std::span<const double>)>& g,
                         const Box& box, int n) {
  validate_box(box);
  const int d = box.dim();
  if (d > 4) throw capability_error("tensor_quadrature supports dimension <= 4");
  const QuadratureRule rule = gauss_legendre(n);

  long long total = 1;
  for (int j = 0; j < d; ++j) total *= n;

  double sum = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      const auto i = static_cast<std::size_t>(rest % n);
      rest /= n;
      const double half = 0.5 * (box.upper[static_cast<std::size_t>(j)] -
                                 box.lower[static_cast<std::size_t>(j)]);
      const double mid = 0.5 * (box.upper[static_cast<std::size_t>(j)] +
                                box.lower[static_cast<std::size_t>(j)]);
      x[static_cast<std::size_t>(j)] = mid + half * rule.nodes[i];
      w *= half * rule.weights[i];
    }
    sum += w * g(x);
  }
  return sum;
}

double mixed_central_difference(const std::function<double(std::span<const double>)>& g,
                                std::span<const double> x, const SubsetMask& u, double h) {
  if (!(h > 0.0)) throw input_error("mixed_central_difference: step must be positive");
  const auto idx = u.indices();
  const int k = static_cast<int>(idx.size());
  if (k == 0) return g(x);

  std::vector<double> arg(x.begin(), x.end());
  double total = 0.0;
  const long long corners = 1LL << k;
  for (long long corner = 0; corner < corners; ++corner) {
    double sign = 1.0;
    for (int b = 0; b < k; ++b) {
      const double dir = ((corner >> b) & 1) ? 1.0 : -1.0;
      if (dir < 0.0) sign = -sign;
      arg[static_cast<std::size_t>(idx[static_cast<std::size_t>(b)] - 1)] =
          x[static_cast<std::size_t>(idx[static_cast<std::size_t>(b)] - 1)] + dir * h;
    }
    total += sign * g(arg);
  }
  return total / std::pow(2.0 * h, k);
}

double mixed_central_difference_richardson(
    const std::function<double(std::span<const double>)>& g, std::span<const double> x,
    const SubsetMask& u, double h, double* disagreement) {
  const double coarse = mixed_central_difference(g, x, u, h);
  const double fine = mixed_central_difference(g, x, u, 0.5 * h);
  if (disagreement != nullptr) {
    const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-14});
    *disagreement = std::abs(fine - coarse) / scale;
  }
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace anchored
