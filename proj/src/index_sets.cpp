#include "anchored/index_sets.hpp"

#include <algorithm>
#include <unordered_set>

#include "anchored/errors.hpp"

namespace anchored {

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(cardinality()));
  for (int j = 1; j <= dim; ++j) {
    if (contains(j)) out.push_back(j);
  }
  return out;
}

std::string SubsetMask::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int j : indices()) {
    if (!first) s += ",";
    s += std::to_string(j);
    first = false;
  }
  s += "}";
  return s;
}

bool canonical_less(const SubsetMask& a, const SubsetMask& b) {
  const int ca = a.cardinality();
  const int cb = b.cardinality();
  if (ca != cb) return ca < cb;
  return a.bits < b.bits;
}

void validate_mask(const SubsetMask& u) {
  if (u.dim < 1 || u.dim > kMaxMaskDim) {
    throw input_error("subset dimension " + std::to_string(u.dim) +
                      " outside [1," + std::to_string(kMaxMaskDim) + "]");
  }
  if (u.dim < 64 && (u.bits >> u.dim) != 0) {
    throw input_error("subset mask has bits set beyond dimension " + std::to_string(u.dim));
  }
}

SubsetMask parse_subset(const std::string& text, int d) {
  std::string body = text;
  if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
    body = body.substr(1, body.size() - 2);
  }
  SubsetMask u{0, d};
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find(',', pos);
    if (next == std::string::npos) next = body.size();
    const std::string token = body.substr(pos, next - pos);
    if (!token.empty()) {
      int idx = 0;
      try {
        idx = std::stoi(token);
      } catch (const std::exception&) {
        throw input_error("cannot parse subset element '" + token + "'");
      }
      if (idx < 1 || idx > d) {
        throw input_error("subset element " + std::to_string(idx) +
                          " outside {1,...," + std::to_string(d) + "}");
      }
      u.bits |= (std::uint64_t{1} << (idx - 1));
    }
    pos = next + 1;
  }
  validate_mask(u);
  return u;
}

bool DownwardClosedFamily::contains(const SubsetMask& u) const {
  auto it = std::lower_bound(members.begin(), members.end(), u, canonical_less);
  return it != members.end() && it->bits == u.bits;
}

int DownwardClosedFamily::max_order() const {
  int n = 0;
  for (const auto& u : members) n = std::max(n, u.cardinality());
  return n;
}

bool is_downward_closed(const std::vector<SubsetMask>& masks, int d) {
  std::unordered_set<std::uint64_t> present;
  present.reserve(masks.size() * 2);
  for (const auto& u : masks) {
    SubsetMask v{u.bits, d};
    validate_mask(v);
    present.insert(u.bits);
  }
  for (const auto& u : masks) {
    bool ok = true;
    for_each_subset(SubsetMask{u.bits, d}, [&](const SubsetMask& v) {
      if (!present.count(v.bits)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

DownwardClosedFamily order_family(int d, int n) {
  if (d < 1 || d > kMaxMaskDim) {
    throw input_error("order_family: dimension " + std::to_string(d) + " out of range");
  }
  if (n < 0 || n > d) {
    throw input_error("order_family: order " + std::to_string(n) +
                      " outside [0," + std::to_string(d) + "]");
  }
  DownwardClosedFamily family;
  family.dim = d;
  // Enumerate cardinality classes k = 0..n; within a class, masks are
  // generated in increasing numeric order via Gosper's hack.
  family.members.push_back(SubsetMask{0, d});
  for (int k = 1; k <= n; ++k) {
    std::uint64_t v = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << d;
    while (v < limit) {
      family.members.push_back(SubsetMask{v, d});
      const std::uint64_t c = v & (~v + 1);
      const std::uint64_t r = v + c;
      v = (((r ^ v) >> 2) / c) | r;
      if (c == 0) break;
    }
  }
  return family;
}

DownwardClosedFamily make_family(int d, std::vector<SubsetMask> members) {
  for (auto& u : members) {
    u.dim = d;
    validate_mask(u);
  }
  std::sort(members.begin(), members.end(), canonical_less);
  members.erase(std::unique(members.begin(), members.end(),
                            [](const SubsetMask& a, const SubsetMask& b) {
                              return a.bits == b.bits;
                            }),
                members.end());
  if (!is_downward_closed(members, d)) {
    throw input_error("family is not downward closed");
  }
  DownwardClosedFamily family;
  family.dim = d;
  family.members = std::move(members);
  return family;
}

std::vector<SubsetMask> complement_members(const DownwardClosedFamily& family) {
  const int d = family.dim;
  if (d > kMaxEnumerationDim) {
    throw capability_error("complement enumeration needs 2^d subsets; d=" +
                           std::to_string(d) + " exceeds cap " +
                           std::to_string(kMaxEnumerationDim));
  }
  std::unordered_set<std::uint64_t> present;
  present.reserve(family.members.size() * 2);
  for (const auto& u : family.members) present.insert(u.bits);

  std::vector<SubsetMask> out;
  const std::uint64_t limit = std::uint64_t{1} << d;
  for (std::uint64_t bits = 0; bits < limit; ++bits) {
    if (!present.count(bits)) out.push_back(SubsetMask{bits, d});
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace anchored
