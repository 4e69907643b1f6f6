#pragma once

// Numerical ranges of quadratic operators: classical, c- and essential ranges
// of dense complex matrices, with closed-form predictors for model operators.

#include "cnumrange.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "numrange.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "quadratic.hpp"
#include "random.hpp"

namespace qnr {
inline constexpr const char* kVersion = "0.1.0";
}
