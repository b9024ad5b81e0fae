#pragma once

#include <functional>
#include <span>
#include <vector>

#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"

namespace anchored {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;  // summing to 2
};

/// Gauss-Legendre rule with n nodes on [-1,1] (Newton iteration on the
/// Legendre recurrence).
QuadratureRule gauss_legendre(int n);

/// Integrates g over the box by a tensor Gauss-Legendre rule with n nodes
/// per axis. Box dimension is expected to be small (<= 4).
double tensor_quadrature(const std::function<double(std::span<const double>)>& g,
                         const Box& box, int n);

/// Mixed central difference approximating the cross derivative
/// D^u g = d^{#u} g / prod_{j in u} dx_j at x, with step h in every active
/// direction: (2h)^{-#u} sum over the corners of the stencil.
double mixed_central_difference(const std::function<double(std::span<const double>)>& g,
                                std::span<const double> x, const SubsetMask& u, double h);

/// Richardson-extrapolated variant: (4 D(h/2) - D(h)) / 3, with the
/// relative disagreement of the two raw estimates reported.
double mixed_central_difference_richardson(
    const std::function<double(std::span<const double>)>& g, std::span<const double> x,
    const SubsetMask& u, double h, double* disagreement = nullptr);

}  // namespace anchored
