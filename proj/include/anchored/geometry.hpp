#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "anchored/index_sets.hpp"

namespace anchored {

using Point = std::vector<double>;

/// Axis-aligned box [a,b] = [a_1,b_1] x ... x [a_d,b_d] with a_j < b_j.
struct Box {
  Point lower;
  Point upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(std::span<const double> x, double tol = 1e-12) const;

  /// Sub-box [a_u, b_u] spanned by the coordinates in u.
  Box restrict_to(const SubsetMask& u) const;

  static Box cube(int d, double lo, double hi);
};

void validate_box(const Box& box);

/// The fixed anchor point c in [a,b].
struct Anchor {
  Point c;
};

void validate_anchor(const Anchor& anchor, const Box& box);

/// Embeds the low-dimensional coordinates x_tilde (over the indices of u, in
/// increasing index order) into R^d, filling the remaining coordinates from
/// the anchor: the vector (x;c)_u.
Point anchored_extend(std::span<const double> x_tilde, const SubsetMask& u,
                      const Anchor& anchor);

/// Restricts a full point to the coordinates in u (increasing index order).
Point restrict_point(std::span<const double> x, const SubsetMask& u);

/// Approximate fill distance sup_x min_j |x - x_j| over the box, probed on a
/// tensor grid with `resolution` points per axis. Supported for dim <= 3.
double fill_distance(const std::vector<Point>& points, const Box& box,
                     int resolution = 1024);

struct SeparationResult {
  double radius = 0.0;      // (1/2) min_{j != k} |x_j - x_k|
  bool has_duplicates = false;
};

/// Half the minimal pairwise distance; duplicates give radius 0 and a flag.
SeparationResult separation_radius(const std::vector<Point>& points);

/// Tensor grid with m points per axis including the box corners.
std::vector<Point> uniform_grid(const Box& box_u, int m);

/// Clenshaw-Curtis level j: Y_1 = {0}; for j > 1, the n_j = 2^(j-1)+1
/// Chebyshev extrema -cos(pi (i-1)/(n_j-1)), canonicalized so that values
/// within 1e-14 of 0 or +-1 are snapped and nestedness Y_j subset Y_{j+1}
/// is exact.
std::vector<double> clenshaw_curtis_level(int j);

/// Number of points at level j: n_1 = 1, n_j = 2^(j-1)+1.
long long clenshaw_curtis_count(int j);

struct SparseGridSpec {
  SubsetMask u;
  int q = 1;  // total level, q >= #u
  long long max_points = 50'000'000;
};

/// Sparse grid over [-1,1]^{#u}: the union over multi-indices i in N^n with
/// |i| = q of the tensor products Y_{i_1} x ... x Y_{i_n}, deduplicated.
/// For u = {} the anchored extension collapses every candidate to the anchor,
/// so the block is the single empty point.
std::vector<Point> sparse_grid(const SparseGridSpec& spec);

/// Per-subset blocks of anchored points in [a,b] together with their
/// low-dimensional fill distances.
struct SamplingSet {
  DownwardClosedFamily family;
  Box box;
  Anchor anchor;
  std::vector<std::vector<Point>> blocks;  // full-dimensional, aligned with family.members
  std::vector<double> block_fill;          // NaN when #u > 3 (unavailable)
  bool has_cross_block_duplicates = false;

  std::size_t total_points() const;
  /// max_u over available block fill distances.
  double fill() const;
  /// Points flattened block by block; parallel vector of block sizes.
  void flatten(std::vector<Point>& points, std::vector<int>& block_sizes) const;
};

/// Assembles a sampling set from low-dimensional per-block point lists
/// (keyed by the family member masks). Duplicate points across blocks are
/// retained, each with its own block membership, and flagged.
SamplingSet assemble_sampling_set(const DownwardClosedFamily& family,
                                  const std::map<std::uint64_t, std::vector<Point>>& per_block,
                                  const Anchor& anchor, const Box& box,
                                  int fill_resolution = 1024);

}  // namespace anchored
