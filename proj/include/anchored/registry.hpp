#pragma once

#include <string>
#include <vector>

#include "anchored/decomposition.hpp"
#include "anchored/geometry.hpp"

namespace anchored {

/// Built-in test functions: const, product, genz-oscillatory,
/// genz-corner-peak, additive-sin. The Genz families act on coordinates
/// normalized to [0,1] per axis; coefficients decay like 1/j.
BlackBoxFunction make_registry_function(const std::string& name, int d, const Box& box);

const std::vector<std::string>& registry_names();

}  // namespace anchored
