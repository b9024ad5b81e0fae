#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace anchored {

/// A subset u of the coordinate indices {1,...,d}, stored as a d-bit mask.
/// Bit j-1 set means index j is a member. d is capped at 62.
struct SubsetMask {
  std::uint64_t bits = 0;
  int dim = 0;

  int cardinality() const { return std::popcount(bits); }
  bool contains(int index1) const { return (bits >> (index1 - 1)) & 1u; }
  bool empty() const { return bits == 0; }

  /// Member indices (1-based), ascending.
  std::vector<int> indices() const;

  /// Textual form "{1,3}"; the empty set prints as "{}".
  std::string to_string() const;

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
};

inline constexpr int kMaxMaskDim = 62;
/// Operations that enumerate all 2^d subsets are capped separately.
inline constexpr int kMaxEnumerationDim = 24;

/// Canonical order: by cardinality, then by numeric mask value.
bool canonical_less(const SubsetMask& a, const SubsetMask& b);

/// Throws input_error if d is out of range or the mask has bits >= d set.
void validate_mask(const SubsetMask& u);

/// Parses "{1,3}" (1-based, also accepts "{}") into a mask for dimension d.
SubsetMask parse_subset(const std::string& text, int d);

/// Visits every v with v subseteq u exactly once (including the empty set
/// and u itself), in descending numeric order of the submask.
template <typename Visitor>
void for_each_subset(const SubsetMask& u, Visitor&& visit) {
  std::uint64_t v = u.bits;
  while (true) {
    visit(SubsetMask{v, u.dim});
    if (v == 0) break;
    v = (v - 1) & u.bits;
  }
}

/// An explicit downward closed family Lambda: every subset of a member is a
/// member. Members are kept deduplicated in canonical order.
struct DownwardClosedFamily {
  int dim = 0;
  std::vector<SubsetMask> members;

  bool contains(const SubsetMask& u) const;
  int max_order() const;
  std::size_t size() const { return members.size(); }
};

bool is_downward_closed(const std::vector<SubsetMask>& masks, int d);

/// All subsets of {1,...,d} with cardinality <= n.
DownwardClosedFamily order_family(int d, int n);

/// Builds a family from explicit members; sorts, dedupes and validates
/// downward closedness.
DownwardClosedFamily make_family(int d, std::vector<SubsetMask> members);

/// All subsets of {1,...,d} not in the family, canonical order. Requires
/// d <= 24 (full 2^d enumeration).
std::vector<SubsetMask> complement_members(const DownwardClosedFamily& family);

}  // namespace anchored
