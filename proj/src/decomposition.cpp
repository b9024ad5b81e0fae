#include "anchored/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "anchored/errors.hpp"

namespace anchored {

double anchored_component(const BlackBoxFunction& f, const SubsetMask& u,
                          const Anchor& anchor, std::span<const double> x_u) {
  const int k = u.cardinality();
  if (k > kMaxComponentOrder) {
    throw capability_error("anchored_component: #u=" + std::to_string(k) +
                           " needs 2^#u evaluations, cap is " +
                           std::to_string(kMaxComponentOrder));
  }
  if (static_cast<int>(x_u.size()) != k) {
    throw input_error("anchored_component: coordinate count does not match #u");
  }
  const Point x_full = anchored_extend(x_u, u, anchor);

  double total = 0.0;
  for_each_subset(u, [&](const SubsetMask& v) {
    Point arg = anchor.c;
    for (int j : v.indices()) arg[j - 1] = x_full[j - 1];
    const int sign_exp = u.cardinality() - v.cardinality();
    const double sign = (sign_exp % 2 == 0) ? 1.0 : -1.0;
    total += sign * f(arg);
  });
  return total;
}

TruncationPlan build_truncation_plan(const DownwardClosedFamily& family,
                                     const Anchor& anchor) {
  std::unordered_map<std::uint64_t, long long> coeff;
  coeff.reserve(family.members.size() * 2);
  for (const auto& u : family.members) {
    for_each_subset(u, [&](const SubsetMask& v) {
      const int sign_exp = u.cardinality() - v.cardinality();
      coeff[v.bits] += (sign_exp % 2 == 0) ? 1 : -1;
    });
  }
  TruncationPlan plan;
  plan.family = family;
  plan.anchor = anchor;
  plan.coefficients.reserve(family.members.size());
  // Downward closedness guarantees every v appearing above is a member.
  for (const auto& v : family.members) plan.coefficients.push_back(coeff[v.bits]);
  return plan;
}

double eval_truncation(const TruncationPlan& plan, const BlackBoxFunction& f,
                       std::span<const double> x) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.family.members.size(); ++i) {
    const auto& v = plan.family.members[i];
    Point arg = plan.anchor.c;
    for (int j : v.indices()) arg[j - 1] = x[static_cast<std::size_t>(j - 1)];
    total += static_cast<double>(plan.coefficients[i]) * f(arg);
  }
  return total;
}

AnnihilationReport annihilation_check(const BlackBoxFunction& f,
                                      const DownwardClosedFamily& family,
                                      const Anchor& anchor, const Box& box, int trials,
                                      std::uint64_t seed) {
  if (trials < 1) throw input_error("annihilation_check: trials must be >= 1");

  // Restrict to non-empty members; the empty component has no coordinate to pin.
  std::vector<SubsetMask> candidates;
  for (const auto& u : family.members) {
    if (u.cardinality() > 0) candidates.push_back(u);
  }
  AnnihilationReport report;
  report.trials = trials;
  if (candidates.empty()) {
    report.pass = true;
    return report;
  }

  Rng rng(seed);
  double max_abs_f = 0.0;
  double max_violation = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SubsetMask u = candidates[rng.index(candidates.size())];
    const auto idx = u.indices();
    Point x_u(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      x_u[k] = rng.uniform(box.lower[static_cast<std::size_t>(idx[k] - 1)],
                           box.upper[static_cast<std::size_t>(idx[k] - 1)]);
    }
    // Pin one coordinate of u to the anchor value.
    const std::size_t pin = rng.index(idx.size());
    x_u[pin] = anchor.c[static_cast<std::size_t>(idx[pin] - 1)];

    max_abs_f = std::max(max_abs_f, std::abs(f(anchored_extend(x_u, u, anchor))));
    max_violation = std::max(max_violation, std::abs(anchored_component(f, u, anchor, x_u)));
  }
  report.max_violation = max_violation;
  report.scale = 1.0 + max_abs_f;
  report.pass = max_violation <= 1e-12 * report.scale;
  return report;
}

}  // namespace anchored
