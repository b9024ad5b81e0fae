#pragma once

#include <functional>
#include <span>
#include <vector>

#include "anchored/decomposition.hpp"
#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"

namespace anchored {

/// 1-D elliptic problem -d/dx( a(x,y) du/dx ) = f(x) on D = [x_lo,x_hi] with
/// homogeneous Dirichlet conditions and the finite-noise coefficient
/// a(x,y) = abar(x) + sum_j y_j psi_j(x), parameters y in [-1/2,1/2]^d.
struct DiffusionProblem {
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::function<double(double)> abar;
  std::vector<std::function<double(double)>> psi;
  std::function<double(double)> rhs;

  int parameter_dim() const { return static_cast<int>(psi.size()); }
  double coefficient(double x, std::span<const double> y) const;

  /// abar = 1, rhs = 1, psi_j(x) = beta j^-theta sin(j pi x) on [0,1].
  static DiffusionProblem standard_affine(int d, double beta, double theta);

  Box parameter_box() const { return Box::cube(parameter_dim(), -0.5, 0.5); }
};

struct FemSolution {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int interior_nodes = 0;
  std::vector<double> values;  // interior nodal values of u_h
  Point y;

  double mesh_width() const { return (x_hi - x_lo) / (interior_nodes + 1); }
  /// Piecewise-linear interpolant value at x.
  double at(double x) const;
  /// ||v||_{H1_0}^2 = sum over elements of (v_{i+1}-v_i)^2 / h, exact for
  /// piecewise-linear v.
  double h10_norm_squared() const;
};

/// Piecewise-linear Galerkin solve with element-midpoint quadrature of both
/// a(.,y) and the load; the stiffness matrix is tridiagonal (Thomas solve).
FemSolution fem_solve(const DiffusionProblem& problem, std::span<const double> y,
                      int interior_nodes);

struct QoiSpec {
  enum class Kind { mean_value, point_value, weighted_integral };
  Kind kind = Kind::mean_value;
  double x0 = 0.5;                        // point_value
  std::function<double(double)> weight;   // weighted_integral
};

double qoi(const QoiSpec& spec, const FemSolution& sol);

struct CoercivityReport {
  double a_min = 0.0;
  double a_max = 0.0;
  double worst_x = 0.0;
  Point worst_y;
  bool positive = false;
};

/// Extremes of a over D x Omega: at each grid x the worst parameter is
/// y_j = -sign(psi_j(x))/2 for the minimum (+ for the maximum).
CoercivityReport coercivity_check(const DiffusionProblem& problem, int grid_resolution);

struct DerivativeBoundReport {
  double lhs = 0.0;   // H1_0 norm of the mixed parametric derivative of u_h
  double rhs = 0.0;   // (||F|| / a_min) #u! prod_j (||psi_j|| / a_min)
  double f_norm = 0.0;
  double a_min = 0.0;
  double fd_disagreement = 0.0;
  bool pass = false;
};

/// Verifies the parametric derivative bound at y for the direction set u
/// (#u <= 3), with ||F||_{H^-1} estimated by a Riesz solve (a = 1) on the
/// same mesh. Raises a numerical_error when Richardson disagreement of the
/// finite difference exceeds 10%.
DerivativeBoundReport derivative_bound_check(const DiffusionProblem& problem,
                                             std::span<const double> y, const SubsetMask& u,
                                             int interior_nodes, double fd_step);

/// u_G at each parameter point via fem_solve + qoi. Parallel over points,
/// deterministic output order; returns one value per input point.
std::vector<double> sample_ug(const DiffusionProblem& problem, const QoiSpec& spec,
                              const std::vector<Point>& points, int interior_nodes);

/// Serial reference for sample_ug.
std::vector<double> sample_ug_serial(const DiffusionProblem& problem, const QoiSpec& spec,
                                     const std::vector<Point>& points, int interior_nodes);

/// Wraps u_G as a metered black box over the parameter box.
BlackBoxFunction make_ug_function(const DiffusionProblem& problem, const QoiSpec& spec,
                                  int interior_nodes);

/// ||psi_j||_inf / a_min for j = 1..d, with sup norms taken over a fine grid.
std::vector<double> psi_ratios(const DiffusionProblem& problem, int grid_resolution);

/// ||F||_{H^-1(D)} estimated as the H1_0 norm of the Riesz representer
/// (solve with a = 1).
double rhs_dual_norm(const DiffusionProblem& problem, int interior_nodes);

}  // namespace anchored
