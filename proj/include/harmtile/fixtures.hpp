#pragma once
#include <string>

#include "harmtile/complex.hpp"

namespace harmtile {

// Named fixtures: FIX-QUAD, FIX-ANN, FIX-ANN-INNER, FIX-ANN-BOTH, FIX-CYL,
// FIX-PANTS1, FIX-PANTS2, and "random:<seed>:<quad|annulus|pants>".
RawComplex genFixture(const std::string& name);

}  // namespace harmtile
