#include "anchored/weights.hpp"

#include <algorithm>
#include <cmath>

#include "anchored/errors.hpp"
#include "anchored/quadrature.hpp"

namespace anchored {

double riemann_zeta_12(double s) {
  if (!(s > 1.0) || s > 2.0 + 1e-12) {
    throw input_error("riemann_zeta_12: s must lie in (1,2]");
  }
  // zeta(s) = sum_{k<K} k^-s + K^(1-s)/(s-1) + K^-s/2 + s K^(-s-1)/12.
  // The next Euler-Maclaurin term is O(K^(-s-3)); K=1000 leaves < 1e-13.
  constexpr int K = 1000;
  double sum = 0.0;
  for (int k = K - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  const double Kd = static_cast<double>(K);
  sum += std::pow(Kd, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(Kd, -s);
  sum += s * std::pow(Kd, -s - 1.0) / 12.0;
  return sum;
}

double rho(double c) {
  if (!(c > 0.5) || c > 1.0) {
    throw input_error("rho: c must lie in (1/2,1]");
  }
  return 2.0 * riemann_zeta_12(2.0 * c) / std::pow(2.0 * M_PI * M_PI, c);
}

WeightScheme WeightScheme::constant(double gamma) {
  if (!(gamma > 0.0)) throw input_error("constant weight scheme needs gamma > 0");
  WeightScheme s;
  s.kind = Kind::constant;
  s.constant_value = gamma;
  return s;
}

WeightScheme WeightScheme::product_order_dependent(double c, int n, int m,
                                                   std::vector<double> alpha) {
  if (!(c > 0.5) || c > 1.0) throw input_error("weight scheme: c must lie in (1/2,1]");
  if (n < 0) throw input_error("weight scheme: n must be >= 0");
  if (m < 1) throw input_error("weight scheme: m must be >= 1");
  for (double a : alpha) {
    if (!(a > 0.0)) throw input_error("weight scheme: alpha_j must be positive");
  }
  WeightScheme s;
  s.kind = Kind::product_order_dependent;
  s.c = c;
  s.n = n;
  s.m = m;
  s.alpha = std::move(alpha);
  return s;
}

double gamma_weight(const WeightScheme& scheme, const SubsetMask& u) {
  if (scheme.kind == WeightScheme::Kind::constant) return scheme.constant_value;
  const double rho_c = rho(scheme.c);
  // log of (#u+n)!/m * prod_{j in u} alpha_j / sqrt(rho(c))
  double log_core = std::lgamma(static_cast<double>(u.cardinality() + scheme.n) + 1.0) -
                    std::log(static_cast<double>(scheme.m));
  for (int j : u.indices()) {
    const auto idx = static_cast<std::size_t>(j - 1);
    if (idx >= scheme.alpha.size()) {
      throw input_error("gamma_weight: alpha list shorter than coordinate index " +
                        std::to_string(j));
    }
    log_core += std::log(scheme.alpha[idx]) - 0.5 * std::log(rho_c);
  }
  return std::exp(2.0 / (1.0 + scheme.c) * log_core);
}

std::vector<double> gamma_for_family(const WeightScheme& scheme,
                                     const DownwardClosedFamily& family) {
  std::vector<double> g;
  g.reserve(family.members.size());
  for (const auto& u : family.members) g.push_back(gamma_weight(scheme, u));
  return g;
}

double tail_sum_exact(const WeightScheme& scheme, const DownwardClosedFamily& family,
                      double exponent) {
  if (exponent != 0.5 && exponent != 1.0) {
    throw input_error("tail_sum_exact: exponent must be 1/2 or 1");
  }
  double total = 0.0;
  for (const auto& u : complement_members(family)) {
    total += std::pow(2.0, exponent * static_cast<double>(u.cardinality())) *
             std::sqrt(gamma_weight(scheme, u));
  }
  return total;
}

TailBound tail_sum_bound(const WeightScheme& scheme, int L) {
  if (scheme.kind != WeightScheme::Kind::product_order_dependent) {
    throw input_error("tail_sum_bound: needs product and order dependent weights");
  }
  if (L < 0) throw input_error("tail_sum_bound: L must be >= 0");
  const double c = scheme.c;
  const double rho_c = rho(c);
  const double p = 1.0 / (1.0 + c);

  TailBound result;
  result.alpha_sum_limit = 0.5 * std::pow(rho_c, 0.5 * p);
  for (double a : scheme.alpha) result.alpha_sum += std::pow(a, p);
  result.geometric_base = std::pow(std::pow(2.0, c + 1.0) / std::sqrt(rho_c), p) *
                          result.alpha_sum;
  result.feasible = result.alpha_sum > 0.0 && result.alpha_sum < result.alpha_sum_limit;

  // C_2(n) = max_k ((k+n)!/k!)^(1/(1+c)) (1/k!)^(c/(1+c)); the sequence decays
  // factorially, so scanning k up to 200 brackets the interior maximum.
  double c2 = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double kd = static_cast<double>(k);
    const double log_term = p * (std::lgamma(kd + scheme.n + 1.0) - std::lgamma(kd + 1.0)) -
                            (c * p) * std::lgamma(kd + 1.0);
    c2 = std::max(c2, std::exp(log_term));
  }
  result.c2 = c2;

  if (!result.feasible) return result;
  const double q = result.geometric_base;
  result.value = c2 * std::pow(static_cast<double>(scheme.m), -p) *
                 std::pow(q, static_cast<double>(L + 1)) / (1.0 - q);
  return result;
}

EpsilonReport epsilon(double c, std::span<const double> ratios) {
  const double rho_c = rho(c);
  const double p = 1.0 / (1.0 + c);

  EpsilonReport report;
  double sum = 0.0;
  double max_ratio = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw input_error("epsilon: ratios must be nonnegative");
    sum += std::pow(r, p);
    max_ratio = std::max(max_ratio, r);
  }
  report.value = 2.0 / std::pow(rho_c, 0.5 * p) * sum;
  report.in_unit_interval = report.value > 0.0 && report.value < 1.0;
  report.max_ratio_ok = max_ratio <= 1.0;
  report.sum_ok = sum < std::min(std::sqrt(6.0), 0.5 * std::pow(rho_c, 0.5 * p));
  return report;
}

OrderSelection select_order(const WeightScheme& scheme, int d, double tolerance,
                            double exponent) {
  if (!(tolerance > 0.0)) throw input_error("select_order: tolerance must be positive");
  OrderSelection selection;
  selection.exact_mode = d <= kMaxEnumerationDim;
  for (int L = 0; L <= d; ++L) {
    double tail = 0.0;
    if (selection.exact_mode) {
      tail = tail_sum_exact(scheme, order_family(d, L), exponent);
    } else {
      const TailBound bound = tail_sum_bound(scheme, L);
      if (!bound.feasible) {
        throw input_error("select_order: weight scheme infeasible for the closed-form bound "
                          "(sum_j alpha_j^(1/(1+c)) = " + std::to_string(bound.alpha_sum) +
                          " not below " + std::to_string(bound.alpha_sum_limit) + ")");
      }
      tail = bound.value;
    }
    selection.order = L;
    selection.tail = tail;
    if (tail <= tolerance) {
      selection.met = true;
      return selection;
    }
  }
  selection.met = false;
  return selection;
}

double truncation_bound(const WeightScheme& scheme, const DownwardClosedFamily& family,
                        double norm_estimate, const Box& box, bool box_unit) {
  if (norm_estimate < 0.0) throw input_error("truncation_bound: norm estimate must be >= 0");
  double factor_sum = 0.0;
  for (const auto& u : complement_members(family)) {
    double factor = std::pow(2.0, 0.5 * static_cast<double>(u.cardinality()));
    if (!box_unit) {
      double outside = 1.0;
      double inside = 1.0;
      for (int j = 1; j <= family.dim; ++j) {
        const double side = box.upper[static_cast<std::size_t>(j - 1)] -
                            box.lower[static_cast<std::size_t>(j - 1)];
        if (u.contains(j)) inside *= side;
        else outside *= side;
      }
      factor *= std::sqrt(outside) * inside;
    }
    factor_sum += factor * std::sqrt(gamma_weight(scheme, u));
  }
  return factor_sum * norm_estimate;
}

double weighted_norm_estimate(const BlackBoxFunction& f, const Anchor& anchor,
                              const Box& box, const WeightScheme& scheme,
                              const NormEstimateOptions& options) {
  const int d = box.dim();
  if (options.max_order > 3) {
    throw capability_error("weighted_norm_estimate: max_order must be <= 3");
  }
  const DownwardClosedFamily family = order_family(d, options.max_order);

  double total = 0.0;
  for (const auto& u : family.members) {
    const double gamma_u = gamma_weight(scheme, u);
    if (u.cardinality() == 0) {
      const double fc = f(anchor.c);
      total += fc * fc / gamma_u;
      continue;
    }
    const Box sub = box.restrict_to(u);
    // Integrand: |D^u f((x;c)_u)|^2 over the active coordinates.
    auto integrand = [&](std::span<const double> x_u) {
      auto g = [&](std::span<const double> z_u) {
        return f(anchored_extend(z_u, u, anchor));
      };
      SubsetMask all{(u.cardinality() == 64) ? ~std::uint64_t{0}
                                             : (std::uint64_t{1} << u.cardinality()) - 1,
                     u.cardinality()};
      const double der =
          mixed_central_difference_richardson(g, x_u, all, options.fd_step);
      return der * der;
    };
    total += tensor_quadrature(integrand, sub, options.quadrature_points) / gamma_u;
  }
  return total;
}

double poincare_constant(const SubsetMask& v, const SubsetMask& u, const Box& box_u) {
  if ((v.bits & ~u.bits) != 0) throw input_error("poincare_constant: v must be a subset of u");
  if (v.bits == u.bits) return 1.0;
  const auto idx = u.indices();
  double prod_u = 1.0;
  double prod_diff = 1.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double side = box_u.upper[k] - box_u.lower[k];
    prod_u *= side;
    if (!v.contains(idx[k])) prod_diff *= side;
  }
  return std::sqrt(prod_u) * std::sqrt(prod_diff);
}

PoincareReport poincare_check(const std::function<double(std::span<const double>)>& g,
                              const SubsetMask& u, const SubsetMask& v, const Box& box_u,
                              int quadrature_points, double fd_step) {
  const int k = u.cardinality();
  if (box_u.dim() != k) throw input_error("poincare_check: box dimension must equal #u");
  if ((v.bits & ~u.bits) != 0) throw input_error("poincare_check: v must be a subset of u");

  // Positions of v inside u's coordinate list.
  const auto iu = u.indices();
  SubsetMask v_local{0, k};
  SubsetMask u_local{(k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1, k};
  for (int pos = 0; pos < k; ++pos) {
    if (v.contains(iu[static_cast<std::size_t>(pos)])) {
      v_local.bits |= (std::uint64_t{1} << pos);
    }
  }

  auto norm_of = [&](const SubsetMask& w) {
    auto integrand = [&](std::span<const double> x) {
      const double der = w.empty() ? g(x) : mixed_central_difference_richardson(g, x, w, fd_step);
      return der * der;
    };
    return std::sqrt(tensor_quadrature(integrand, box_u, quadrature_points));
  };

  PoincareReport report;
  report.lhs = norm_of(v_local);
  report.rhs = norm_of(u_local);
  report.constant = poincare_constant(v, u, box_u);
  const double bound = report.constant * report.rhs;
  report.ratio = (bound > 0.0) ? report.lhs / bound : (report.lhs == 0.0 ? 0.0 : 1e308);
  report.pass = report.lhs <= bound * 1.05 + 1e-12;
  return report;
}

}  // namespace anchored
