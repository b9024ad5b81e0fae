#pragma once

#include <span>
#include <vector>

#include "anchored/decomposition.hpp"
#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"

namespace anchored {

/// Riemann zeta(s) for s in (1,2], via direct series plus an Euler-Maclaurin
/// tail through the 1/12 term; absolute accuracy ~1e-13.
double riemann_zeta_12(double s);

/// rho(c) = 2 zeta(2c) / (2 pi^2)^c for c in (1/2,1].
double rho(double c);

/// Weight scheme for gamma_u. The product and order dependent kind is
///   gamma_u = ((#u+n)!/m * prod_{j in u} alpha_j / sqrt(rho(c)))^(2/(1+c)).
struct WeightScheme {
  enum class Kind { constant, product_order_dependent };
  Kind kind = Kind::constant;

  double constant_value = 1.0;

  double c = 1.0;                // in (1/2, 1]
  int n = 0;                     // order shift (n >= 0)
  int m = 1;                     // scale divisor (m >= 1)
  std::vector<double> alpha;     // alpha_j > 0, one per coordinate

  static WeightScheme constant(double gamma);
  static WeightScheme product_order_dependent(double c, int n, int m,
                                              std::vector<double> alpha);
};

double gamma_weight(const WeightScheme& scheme, const SubsetMask& u);

/// Per-member gamma values aligned with the family ordering.
std::vector<double> gamma_for_family(const WeightScheme& scheme,
                                     const DownwardClosedFamily& family);

/// sum_{u in complement(Lambda)} 2^(#u * e) gamma_u^(1/2) by full enumeration
/// (d <= 24). Exponent e is 1/2 or 1.
double tail_sum_exact(const WeightScheme& scheme, const DownwardClosedFamily& family,
                      double exponent);

struct TailBound {
  bool feasible = false;
  double alpha_sum = 0.0;       // sum_j alpha_j^(1/(1+c))
  double alpha_sum_limit = 0.0; // rho(c)^(1/(2(1+c))) / 2
  double geometric_base = 0.0;  // q = sum_j ((2^(c+1)/sqrt(rho)) alpha_j)^(1/(1+c))
  double c2 = 0.0;              // C_2(n), maximized directly over k
  double value = 0.0;           // C_2(n) m^(-1/(c+1)) q^(L+1) / (1-q)
};

/// Closed-form bound on sum_{#u > L} 2^(#u) gamma_u^(1/2) for product and
/// order dependent weights. Reports infeasibility when the alpha condition
/// sum_j alpha_j^(1/(1+c)) < rho(c)^(1/(2(1+c)))/2 fails.
TailBound tail_sum_bound(const WeightScheme& scheme, int L);

struct EpsilonReport {
  double value = 0.0;
  bool in_unit_interval = false;
  bool max_ratio_ok = false;  // max_j ratio_j <= 1
  bool sum_ok = false;        // sum_j ratio_j^(1/(1+c)) < min(sqrt(6), rho^(1/(2(1+c)))/2)
};

/// epsilon = (2 / rho(c)^(1/(2(1+c)))) sum_j ratio_j^(1/(1+c)) together with
/// the feasibility conditions on the ratios (reported, not enforced).
EpsilonReport epsilon(double c, std::span<const double> ratios);

struct OrderSelection {
  int order = 0;
  double tail = 0.0;
  bool met = false;
  bool exact_mode = false;  // true: enumerated tail; false: closed-form bound
};

/// Smallest L with tail(L) <= tolerance, where tail uses exact enumeration
/// over complement(order_family(d, L)) when d <= 24 and the closed-form bound
/// otherwise. exponent as in tail_sum_exact; the bound mode always reflects
/// exponent 1.
OrderSelection select_order(const WeightScheme& scheme, int d, double tolerance,
                            double exponent);

/// Bound on ||f - f_Lambda||_inf, up to the embedding constant (taken as 1):
/// sum_{u in complement} Ktilde_u(a,b) gamma_u^(1/2) * norm_estimate. With
/// box_unit set, the simplified factor 2^(#u/2) is used instead of Ktilde_u.
double truncation_bound(const WeightScheme& scheme, const DownwardClosedFamily& family,
                        double norm_estimate, const Box& box, bool box_unit);

struct NormEstimateOptions {
  int max_order = 2;          // truncate the u-sum to #u <= max_order
  int quadrature_points = 64; // per axis
  double fd_step = 1e-4;
};

/// Truncated weighted norm estimate
///   sum_{#u <= n} gamma_u^{-1} integral_{[a_u,b_u]} |D^u f((x;c)_u)|^2 dx_u,
/// with the mixed derivatives approximated by Richardson-extrapolated central
/// differences and the integrals by tensor Gauss-Legendre quadrature.
double weighted_norm_estimate(const BlackBoxFunction& f, const Anchor& anchor,
                              const Box& box, const WeightScheme& scheme,
                              const NormEstimateOptions& options);

struct PoincareReport {
  double lhs = 0.0;       // ||D^v g||_{L2}
  double rhs = 0.0;       // ||D^u g||_{L2}
  double constant = 0.0;  // C_{v,u}(a,b)
  double ratio = 0.0;     // lhs / (C * rhs)
  bool pass = false;
};

/// C_{v,u}(a,b) = prod_{j in u} (b_j-a_j)^(1/2) prod_{j in u \ v} (b_j-a_j)^(1/2);
/// equals 1 for v = u.
double poincare_constant(const SubsetMask& v, const SubsetMask& u, const Box& box_u);

/// Verifies ||D^v g|| <= C_{v,u} ||D^u g|| for a function g on [a_u,b_u] that
/// vanishes whenever some coordinate in u \ v equals the pinning value.
/// g takes #u coordinates.
PoincareReport poincare_check(const std::function<double(std::span<const double>)>& g,
                              const SubsetMask& u, const SubsetMask& v, const Box& box_u,
                              int quadrature_points, double fd_step);

}  // namespace anchored
