#include "anchored/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anchored/errors.hpp"

namespace anchored {

namespace {

/// Thomas solve of the symmetric tridiagonal system (diag, off) x = rhs.
std::vector<double> thomas_solve(std::vector<double> diag, std::vector<double> off,
                                 std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
  }
  return x;
}

struct Assembled {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> load;
};

Assembled assemble(const DiffusionProblem& problem, std::span<const double> y,
                   int interior_nodes, bool unit_coefficient) {
  const int m = interior_nodes;
  const double h = (problem.x_hi - problem.x_lo) / static_cast<double>(m + 1);

  // a and f at element midpoints; elements e_i = [x_{i-1}, x_i], i = 1..m+1.
  std::vector<double> a_mid(static_cast<std::size_t>(m + 1));
  std::vector<double> f_mid(static_cast<std::size_t>(m + 1));
  for (int e = 0; e <= m; ++e) {
    const double mid = problem.x_lo + (static_cast<double>(e) + 0.5) * h;
    const double a = unit_coefficient ? 1.0 : problem.coefficient(mid, y);
    if (!(a > 0.0)) {
      std::ostringstream msg;
      msg << "coercivity failure: a(x,y) = " << a << " at x = " << mid << ", y = (";
      for (std::size_t j = 0; j < y.size(); ++j) msg << (j ? "," : "") << y[j];
      msg << ")";
      throw input_error(msg.str());
    }
    a_mid[static_cast<std::size_t>(e)] = a;
    f_mid[static_cast<std::size_t>(e)] = problem.rhs(mid);
  }

  Assembled out;
  out.diag.resize(static_cast<std::size_t>(m));
  out.off.assign(static_cast<std::size_t>(std::max(0, m - 1)), 0.0);
  out.load.resize(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    out.diag[k] = (a_mid[k] + a_mid[k + 1]) / h;
    if (i < m) out.off[k] = -a_mid[k + 1] / h;
    out.load[k] = 0.5 * h * (f_mid[k] + f_mid[k + 1]);
  }
  return out;
}

}  // namespace

double DiffusionProblem::coefficient(double x, std::span<const double> y) const {
  double a = abar(x);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    a += y[j] * psi[j](x);
  }
  return a;
}

DiffusionProblem DiffusionProblem::standard_affine(int d, double beta, double theta) {
  if (d < 1) throw input_error("standard_affine: need d >= 1 parameters");
  DiffusionProblem p;
  p.x_lo = 0.0;
  p.x_hi = 1.0;
  p.abar = [](double) { return 1.0; };
  p.rhs = [](double) { return 1.0; };
  for (int j = 1; j <= d; ++j) {
    p.psi.push_back([beta, theta, j](double x) {
      return beta * std::pow(static_cast<double>(j), -theta) *
             std::sin(static_cast<double>(j) * M_PI * x);
    });
  }
  return p;
}

double FemSolution::at(double x) const {
  const double h = mesh_width();
  const double t = (x - x_lo) / h;
  const auto cell = static_cast<long long>(std::floor(t));
  const long long m = interior_nodes;
  if (cell < 0 || cell > m) {
    // Outside the domain (or exactly at the right endpoint).
    if (x >= x_hi) return 0.0;
    if (x <= x_lo) return 0.0;
  }
  const double frac = t - static_cast<double>(cell);
  auto node_value = [&](long long i) -> double {
    if (i <= 0 || i > m) return 0.0;
    return values[static_cast<std::size_t>(i - 1)];
  };
  return (1.0 - frac) * node_value(cell) + frac * node_value(cell + 1);
}

double FemSolution::h10_norm_squared() const {
  const double h = mesh_width();
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double diff = values[i] - prev;
    total += diff * diff / h;
    prev = values[i];
  }
  total += prev * prev / h;  // last element down to the zero boundary value
  return total;
}

FemSolution fem_solve(const DiffusionProblem& problem, std::span<const double> y,
                      int interior_nodes) {
  if (interior_nodes < 1) throw input_error("fem_solve: need at least one interior node");
  if (static_cast<int>(y.size()) != problem.parameter_dim()) {
    throw input_error("fem_solve: parameter dimension mismatch");
  }
  Assembled sys = assemble(problem, y, interior_nodes, /*unit_coefficient=*/false);

  FemSolution sol;
  sol.x_lo = problem.x_lo;
  sol.x_hi = problem.x_hi;
  sol.interior_nodes = interior_nodes;
  sol.y.assign(y.begin(), y.end());
  sol.values = thomas_solve(sys.diag, sys.off, sys.load);

  // Galerkin residual of the direct solve; anything large signals breakdown.
  double res = 0.0, scale = 0.0;
  for (int i = 0; i < interior_nodes; ++i) {
    const auto k = static_cast<std::size_t>(i);
    double row = sys.diag[k] * sol.values[k];
    if (i > 0) row += sys.off[k - 1] * sol.values[k - 1];
    if (i + 1 < interior_nodes) row += sys.off[k] * sol.values[k + 1];
    res += (row - sys.load[k]) * (row - sys.load[k]);
    scale += sys.load[k] * sys.load[k];
  }
  if (!(res <= 1e-20 * std::max(scale, 1e-300))) {
    throw numerical_error("fem_solve: Galerkin residual " +
                          std::to_string(std::sqrt(res / std::max(scale, 1e-300))) +
                          " exceeds tolerance");
  }
  return sol;
}

double qoi(const QoiSpec& spec, const FemSolution& sol) {
  const double h = sol.mesh_width();
  switch (spec.kind) {
    case QoiSpec::Kind::mean_value: {
      // Exact integral of the piecewise-linear interpolant (boundary values 0).
      double sum = 0.0;
      for (double v : sol.values) sum += v;
      return h * sum;
    }
    case QoiSpec::Kind::point_value:
      return sol.at(spec.x0);
    case QoiSpec::Kind::weighted_integral: {
      if (!spec.weight) throw input_error("qoi: weighted_integral needs a weight function");
      // Two-point Gauss per element on w * u_h.
      const double g = 1.0 / std::sqrt(3.0);
      double total = 0.0;
      for (int e = 0; e <= sol.interior_nodes; ++e) {
        const double a = sol.x_lo + e * h;
        const double mid = a + 0.5 * h;
        for (double s : {-g, g}) {
          const double x = mid + 0.5 * h * s;
          total += 0.5 * h * spec.weight(x) * sol.at(x);
        }
      }
      return total;
    }
  }
  return 0.0;
}

CoercivityReport coercivity_check(const DiffusionProblem& problem, int grid_resolution) {
  if (grid_resolution < 2) throw input_error("coercivity_check: need >= 2 grid points");
  CoercivityReport report;
  report.a_min = std::numeric_limits<double>::infinity();
  report.a_max = -std::numeric_limits<double>::infinity();
  const int d = problem.parameter_dim();
  for (int i = 0; i < grid_resolution; ++i) {
    const double x = problem.x_lo + (problem.x_hi - problem.x_lo) *
                                        static_cast<double>(i) /
                                        static_cast<double>(grid_resolution - 1);
    double spread = 0.0;
    for (int j = 0; j < d; ++j) spread += std::abs(problem.psi[static_cast<std::size_t>(j)](x));
    const double base = problem.abar(x);
    const double lo = base - 0.5 * spread;
    const double hi = base + 0.5 * spread;
    if (lo < report.a_min) {
      report.a_min = lo;
      report.worst_x = x;
      report.worst_y.assign(static_cast<std::size_t>(d), 0.0);
      for (int j = 0; j < d; ++j) {
        const double p = problem.psi[static_cast<std::size_t>(j)](x);
        report.worst_y[static_cast<std::size_t>(j)] = (p > 0.0) ? -0.5 : 0.5;
      }
    }
    report.a_max = std::max(report.a_max, hi);
  }
  report.positive = report.a_min > 0.0;
  return report;
}

std::vector<double> psi_ratios(const DiffusionProblem& problem, int grid_resolution) {
  const CoercivityReport rep = coercivity_check(problem, grid_resolution);
  if (!rep.positive) throw input_error("psi_ratios: problem is not coercive");
  std::vector<double> ratios;
  for (const auto& psi : problem.psi) {
    double sup = 0.0;
    for (int i = 0; i < grid_resolution; ++i) {
      const double x = problem.x_lo + (problem.x_hi - problem.x_lo) *
                                          static_cast<double>(i) /
                                          static_cast<double>(grid_resolution - 1);
      sup = std::max(sup, std::abs(psi(x)));
    }
    ratios.push_back(sup / rep.a_min);
  }
  return ratios;
}

double rhs_dual_norm(const DiffusionProblem& problem, int interior_nodes) {
  Assembled sys = assemble(problem, {}, interior_nodes, /*unit_coefficient=*/true);
  FemSolution riesz;
  riesz.x_lo = problem.x_lo;
  riesz.x_hi = problem.x_hi;
  riesz.interior_nodes = interior_nodes;
  riesz.values = thomas_solve(sys.diag, sys.off, sys.load);
  return std::sqrt(riesz.h10_norm_squared());
}

DerivativeBoundReport derivative_bound_check(const DiffusionProblem& problem,
                                             std::span<const double> y, const SubsetMask& u,
                                             int interior_nodes, double fd_step) {
  const int k = u.cardinality();
  if (k < 1 || k > 3) {
    throw capability_error("derivative_bound_check: #u must be between 1 and 3");
  }
  if (!(fd_step > 0.0)) throw input_error("derivative_bound_check: step must be positive");

  const auto idx = u.indices();
  auto nodal_difference = [&](double h) {
    std::vector<double> acc(static_cast<std::size_t>(interior_nodes), 0.0);
    const long long corners = 1LL << k;
    Point yy(y.begin(), y.end());
    for (long long corner = 0; corner < corners; ++corner) {
      double sign = 1.0;
      for (int b = 0; b < k; ++b) {
        const double dir = ((corner >> b) & 1) ? 1.0 : -1.0;
        if (dir < 0.0) sign = -sign;
        yy[static_cast<std::size_t>(idx[static_cast<std::size_t>(b)] - 1)] =
            y[static_cast<std::size_t>(idx[static_cast<std::size_t>(b)] - 1)] + dir * h;
      }
      const FemSolution sol = fem_solve(problem, yy, interior_nodes);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * sol.values[i];
    }
    const double scale = std::pow(2.0 * h, k);
    for (double& v : acc) v /= scale;
    return acc;
  };

  const std::vector<double> coarse = nodal_difference(fd_step);
  const std::vector<double> fine = nodal_difference(0.5 * fd_step);

  FemSolution der;
  der.x_lo = problem.x_lo;
  der.x_hi = problem.x_hi;
  der.interior_nodes = interior_nodes;
  der.values.resize(coarse.size());
  FemSolution gap = der;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    der.values[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    gap.values[i] = fine[i] - coarse[i];
  }

  DerivativeBoundReport report;
  report.lhs = std::sqrt(der.h10_norm_squared());
  report.fd_disagreement =
      std::sqrt(gap.h10_norm_squared()) / std::max(report.lhs, 1e-300);
  if (report.fd_disagreement > 0.10) {
    throw numerical_error("derivative_bound_check: finite-difference step is noise-dominated "
                          "(Richardson disagreement " +
                          std::to_string(report.fd_disagreement) + ")");
  }

  constexpr int kGrid = 2048;
  const CoercivityReport coercivity = coercivity_check(problem, kGrid);
  if (!coercivity.positive) throw input_error("derivative_bound_check: problem not coercive");
  report.a_min = coercivity.a_min;
  report.f_norm = rhs_dual_norm(problem, interior_nodes);

  const std::vector<double> ratios = psi_ratios(problem, kGrid);
  double rhs = report.f_norm / report.a_min;
  double factorial = 1.0;
  for (int i = 1; i <= k; ++i) factorial *= i;
  rhs *= factorial;
  for (int j : idx) rhs *= ratios[static_cast<std::size_t>(j - 1)];
  report.rhs = rhs;
  report.pass = report.lhs <= rhs * 1.05;
  return report;
}

std::vector<double> sample_ug(const DiffusionProblem& problem, const QoiSpec& spec,
                              const std::vector<Point>& points, int interior_nodes) {
  std::vector<double> out(points.size());
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        qoi(spec, fem_solve(problem, points[static_cast<std::size_t>(i)], interior_nodes));
  }
  return out;
}

std::vector<double> sample_ug_serial(const DiffusionProblem& problem, const QoiSpec& spec,
                                     const std::vector<Point>& points, int interior_nodes) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = qoi(spec, fem_solve(problem, points[i], interior_nodes));
  }
  return out;
}

BlackBoxFunction make_ug_function(const DiffusionProblem& problem, const QoiSpec& spec,
                                  int interior_nodes) {
  auto shared = std::make_shared<DiffusionProblem>(problem);
  return BlackBoxFunction(problem.parameter_dim(),
                          [shared, spec, interior_nodes](std::span<const double> y) {
                            return qoi(spec, fem_solve(*shared, y, interior_nodes));
                          });
}

}  // namespace anchored
