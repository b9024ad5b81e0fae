#include "anchored/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "anchored/errors.hpp"

namespace anchored {

namespace {

constexpr double kSnapTol = 1e-14;

double snap(double v) {
  if (std::abs(v) < kSnapTol) return 0.0;
  if (std::abs(v - 1.0) < kSnapTol) return 1.0;
  if (std::abs(v + 1.0) < kSnapTol) return -1.0;
  return v;
}

}  // namespace

bool Box::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) return false;
  }
  return true;
}

Box Box::restrict_to(const SubsetMask& u) const {
  Box out;
  for (int j : u.indices()) {
    out.lower.push_back(lower[j - 1]);
    out.upper.push_back(upper[j - 1]);
  }
  return out;
}

Box Box::cube(int d, double lo, double hi) {
  return Box{Point(d, lo), Point(d, hi)};
}

void validate_box(const Box& box) {
  if (box.lower.size() != box.upper.size() || box.lower.empty()) {
    throw input_error("box bounds must be non-empty and of equal length");
  }
  for (std::size_t j = 0; j < box.lower.size(); ++j) {
    if (!(box.lower[j] < box.upper[j])) {
      throw input_error("box requires a_j < b_j in every coordinate");
    }
  }
}

void validate_anchor(const Anchor& anchor, const Box& box) {
  if (static_cast<int>(anchor.c.size()) != box.dim()) {
    throw input_error("anchor dimension does not match box");
  }
  for (int j = 0; j < box.dim(); ++j) {
    if (anchor.c[j] < box.lower[j] || anchor.c[j] > box.upper[j]) {
      throw input_error("anchor lies outside the box in coordinate " + std::to_string(j + 1));
    }
  }
}

Point anchored_extend(std::span<const double> x_tilde, const SubsetMask& u,
                      const Anchor& anchor) {
  if (static_cast<int>(x_tilde.size()) != u.cardinality()) {
    throw input_error("anchored_extend: got " + std::to_string(x_tilde.size()) +
                      " coordinates for a subset of size " +
                      std::to_string(u.cardinality()));
  }
  Point out = anchor.c;
  std::size_t k = 0;
  for (int j : u.indices()) out[j - 1] = x_tilde[k++];
  return out;
}

Point restrict_point(std::span<const double> x, const SubsetMask& u) {
  Point out;
  out.reserve(static_cast<std::size_t>(u.cardinality()));
  for (int j : u.indices()) out.push_back(x[j - 1]);
  return out;
}

double fill_distance(const std::vector<Point>& points, const Box& box, int resolution) {
  if (points.empty()) throw input_error("fill_distance: empty point set");
  validate_box(box);
  const int d = box.dim();
  if (d > 3) {
    throw capability_error("fill_distance probing supports dimension <= 3, got " +
                           std::to_string(d));
  }
  if (resolution < 2) throw input_error("fill_distance: need >= 2 probes per axis");

  long long total = 1;
  for (int j = 0; j < d; ++j) total *= resolution;

  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (long long idx = 0; idx < total; ++idx) {
    double probe[3];
    long long rest = idx;
    for (int j = 0; j < d; ++j) {
      const long long i = rest % resolution;
      rest /= resolution;
      probe[j] = box.lower[j] +
                 (box.upper[j] - box.lower[j]) * static_cast<double>(i) /
                     static_cast<double>(resolution - 1);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : points) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        const double diff = probe[j] - p[j];
        s += diff * diff;
      }
      best = std::min(best, s);
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

SeparationResult separation_radius(const std::vector<Point>& points) {
  if (points.size() < 2) throw input_error("separation_radius: need >= 2 points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = i + 1; k < points.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < points[i].size(); ++j) {
        const double diff = points[i][j] - points[k][j];
        s += diff * diff;
      }
      best = std::min(best, s);
    }
  }
  SeparationResult r;
  r.radius = 0.5 * std::sqrt(best);
  r.has_duplicates = (best == 0.0);
  return r;
}

std::vector<Point> uniform_grid(const Box& box_u, int m) {
  validate_box(box_u);
  if (m < 2) throw input_error("uniform_grid: need m >= 2 points per axis");
  const int d = box_u.dim();
  double count = 1.0;
  for (int j = 0; j < d; ++j) count *= m;
  if (count > 5e7) {
    throw capability_error("uniform_grid: m^dim = " + std::to_string(count) +
                           " exceeds the point cap");
  }
  const long long total = static_cast<long long>(count);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(total));
  for (long long idx = 0; idx < total; ++idx) {
    Point p(d);
    long long rest = idx;
    for (int j = 0; j < d; ++j) {
      const long long i = rest % m;
      rest /= m;
      p[j] = box_u.lower[j] + (box_u.upper[j] - box_u.lower[j]) *
                                  static_cast<double>(i) / static_cast<double>(m - 1);
    }
    out.push_back(std::move(p));
  }
  return out;
}

long long clenshaw_curtis_count(int j) {
  if (j < 1) throw input_error("clenshaw_curtis: level must be >= 1");
  if (j == 1) return 1;
  return (1LL << (j - 1)) + 1;
}

std::vector<double> clenshaw_curtis_level(int j) {
  const long long n = clenshaw_curtis_count(j);
  if (n == 1) return {0.0};
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (long long i = 1; i <= n; ++i) {
    pts[static_cast<std::size_t>(i - 1)] =
        snap(-std::cos(M_PI * static_cast<double>(i - 1) / static_cast<double>(n - 1)));
  }
  return pts;
}

std::vector<Point> sparse_grid(const SparseGridSpec& spec) {
  const int n = spec.u.cardinality();
  if (n == 0) return {Point{}};
  if (spec.q < n) {
    throw input_error("sparse_grid: total level q=" + std::to_string(spec.q) +
                      " below block dimension " + std::to_string(n));
  }

  // Pre-tabulate the levels that can appear: each i_k <= q - (n-1).
  const int max_level = spec.q - n + 1;
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(max_level) + 1);
  for (int j = 1; j <= max_level; ++j) levels[static_cast<std::size_t>(j)] = clenshaw_curtis_level(j);

  std::set<Point> unique_points;
  std::vector<int> comp(static_cast<std::size_t>(n), 1);

  auto emit_tensor = [&]() {
    long long count = 1;
    for (int k = 0; k < n; ++k) count *= clenshaw_curtis_count(comp[static_cast<std::size_t>(k)]);
    if (count + static_cast<long long>(unique_points.size()) > spec.max_points) {
      throw capability_error("sparse_grid: point count exceeds cap " +
                             std::to_string(spec.max_points));
    }
    for (long long idx = 0; idx < count; ++idx) {
      Point p(static_cast<std::size_t>(n));
      long long rest = idx;
      for (int k = 0; k < n; ++k) {
        const auto& y = levels[static_cast<std::size_t>(comp[static_cast<std::size_t>(k)])];
        p[static_cast<std::size_t>(k)] =
            y[static_cast<std::size_t>(rest % static_cast<long long>(y.size()))];
        rest /= static_cast<long long>(y.size());
      }
      unique_points.insert(std::move(p));
    }
  };

  // Enumerate all compositions of q into n parts >= 1.
  auto recurse = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == n - 1) {
      comp[static_cast<std::size_t>(slot)] = remaining;
      emit_tensor();
      return;
    }
    const int slots_after = n - 1 - slot;
    for (int level = 1; level <= remaining - slots_after; ++level) {
      comp[static_cast<std::size_t>(slot)] = level;
      self(self, slot + 1, remaining - level);
    }
  };
  recurse(recurse, 0, spec.q);

  return {unique_points.begin(), unique_points.end()};
}

std::size_t SamplingSet::total_points() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

double SamplingSet::fill() const {
  double h = 0.0;
  for (double f : block_fill) {
    if (!std::isnan(f)) h = std::max(h, f);
  }
  return h;
}

void SamplingSet::flatten(std::vector<Point>& points, std::vector<int>& block_sizes) const {
  points.clear();
  block_sizes.clear();
  for (const auto& b : blocks) {
    block_sizes.push_back(static_cast<int>(b.size()));
    points.insert(points.end(), b.begin(), b.end());
  }
}

SamplingSet assemble_sampling_set(const DownwardClosedFamily& family,
                                  const std::map<std::uint64_t, std::vector<Point>>& per_block,
                                  const Anchor& anchor, const Box& box,
                                  int fill_resolution) {
  validate_box(box);
  validate_anchor(anchor, box);

  SamplingSet set;
  set.family = family;
  set.box = box;
  set.anchor = anchor;
  set.blocks.reserve(family.members.size());
  set.block_fill.reserve(family.members.size());

  std::set<Point> seen;
  for (const auto& u : family.members) {
    auto it = per_block.find(u.bits);
    if (it == per_block.end()) {
      throw input_error("assemble_sampling_set: missing block for subset " + u.to_string());
    }
    const Box sub = box.restrict_to(u);
    std::vector<Point> extended;
    extended.reserve(it->second.size());
    for (const Point& x_tilde : it->second) {
      if (u.cardinality() > 0 && !sub.contains(x_tilde)) {
        throw input_error("assemble_sampling_set: block point outside [a_u,b_u] for " +
                          u.to_string());
      }
      Point p = anchored_extend(x_tilde, u, anchor);
      if (!seen.insert(p).second) set.has_cross_block_duplicates = true;
      extended.push_back(std::move(p));
    }
    if (u.cardinality() == 0) {
      // The empty block is the anchor itself; its fill distance is zero by
      // convention (the sub-domain is a single point).
      if (extended.empty()) extended.push_back(anchor.c);
      set.block_fill.push_back(0.0);
    } else if (u.cardinality() <= 3) {
      set.block_fill.push_back(fill_distance(it->second, sub, fill_resolution));
    } else {
      set.block_fill.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    set.blocks.push_back(std::move(extended));
  }
  return set;
}

}  // namespace anchored
