#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"
#include "anchored/rng.hpp"

namespace anchored {

/// A deterministic scalar function of d variables with a metered evaluation
/// count. Copies share the counter, so parallel sampling through copies is
/// accounted for in one place.
class BlackBoxFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  BlackBoxFunction() = default;
  BlackBoxFunction(int d, Evaluator f)
      : d_(d), f_(std::move(f)), count_(std::make_shared<std::atomic<long long>>(0)) {}

  double operator()(std::span<const double> x) const {
    count_->fetch_add(1, std::memory_order_relaxed);
    return f_(x);
  }
  double operator()(const Point& x) const { return (*this)(std::span<const double>(x)); }

  int dim() const { return d_; }
  long long evaluations() const { return count_->load(); }
  void reset_evaluations() const { count_->store(0); }
  bool valid() const { return static_cast<bool>(f_); }

 private:
  int d_ = 0;
  Evaluator f_;
  std::shared_ptr<std::atomic<long long>> count_;
};

/// Max subset size for inclusion-exclusion (2^{#u} evaluations per call).
inline constexpr int kMaxComponentOrder = 20;

/// The anchored component f_{u;c} at the low-dimensional point x_u:
///   sum_{v subseteq u} (-1)^(#u - #v) f((x;c)_v),
/// with f_{empty;c} = f(c). Costs 2^{#u} black-box calls.
double anchored_component(const BlackBoxFunction& f, const SubsetMask& u,
                          const Anchor& anchor, std::span<const double> x_u);

/// Precollected inclusion-exclusion coefficients for evaluating the
/// truncation f_Lambda = sum_{u in Lambda} f_{u;c} with |Lambda| black-box
/// calls: f_Lambda(x) = sum_{v in Lambda} a_v f((x;c)_v) where
/// a_v = sum_{u in Lambda, u superset v} (-1)^(#u - #v).
struct TruncationPlan {
  DownwardClosedFamily family;
  Anchor anchor;
  std::vector<long long> coefficients;  // aligned with family.members
};

TruncationPlan build_truncation_plan(const DownwardClosedFamily& family, const Anchor& anchor);

double eval_truncation(const TruncationPlan& plan, const BlackBoxFunction& f,
                       std::span<const double> x);

struct AnnihilationReport {
  int trials = 0;
  double max_violation = 0.0;
  double scale = 1.0;  // 1 + max sampled |f|
  bool pass = false;
};

/// Samples random members u of the family and random x_u with one coordinate
/// pinned to the anchor; the component must vanish (up to 1e-12 relative to
/// the sampled magnitude of f).
AnnihilationReport annihilation_check(const BlackBoxFunction& f,
                                      const DownwardClosedFamily& family,
                                      const Anchor& anchor, const Box& box, int trials,
                                      std::uint64_t seed);

}  // namespace anchored
