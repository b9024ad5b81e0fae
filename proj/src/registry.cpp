#include "anchored/registry.hpp"

#include <cmath>

#include "anchored/errors.hpp"

namespace anchored {

namespace {

std::vector<double> normalizer_lo(const Box& box) { return box.lower; }

std::vector<double> normalizer_scale(const Box& box) {
  std::vector<double> s(box.lower.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = 1.0 / (box.upper[j] - box.lower[j]);
  return s;
}

}  // namespace

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {
      "const", "product", "genz-oscillatory", "genz-corner-peak", "additive-sin"};
  return names;
}

BlackBoxFunction make_registry_function(const std::string& name, int d, const Box& box) {
  if (box.dim() != d) throw input_error("registry: box dimension mismatch");
  if (name == "const") {
    return BlackBoxFunction(d, [](std::span<const double>) { return 1.0; });
  }
  if (name == "product") {
    return BlackBoxFunction(d, [](std::span<const double> x) {
      double p = 1.0;
      for (double v : x) p *= v;
      return p;
    });
  }
  if (name == "additive-sin") {
    return BlackBoxFunction(d, [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += std::sin(v);
      return s;
    });
  }
  if (name == "genz-oscillatory") {
    const auto lo = normalizer_lo(box);
    const auto scale = normalizer_scale(box);
    return BlackBoxFunction(d, [lo, scale](std::span<const double> x) {
      double arg = M_PI;  // phase 2*pi*w with w = 1/2
      for (std::size_t j = 0; j < x.size(); ++j) {
        arg += (x[j] - lo[j]) * scale[j] / static_cast<double>(j + 1);
      }
      return std::cos(arg);
    });
  }
  if (name == "genz-corner-peak") {
    const auto lo = normalizer_lo(box);
    const auto scale = normalizer_scale(box);
    return BlackBoxFunction(d, [d, lo, scale](std::span<const double> x) {
      double s = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        s += (x[j] - lo[j]) * scale[j] / static_cast<double>((j + 1) * (j + 1));
      }
      return std::pow(s, -(d + 1));
    });
  }
  throw input_error("unknown registry function '" + name + "'");
}

}  // namespace anchored
