#pragma once

#include <cstdint>
#include <random>

#include "ultrafix/linalg.hpp"

namespace ultrafix {

using Rng = std::mt19937_64;

/// n/d with |n| <= max_num and 1 <= d <= max_den.
Rational random_rational(Rng& rng, std::int64_t max_num, std::int64_t max_den);

/// A point of the ball built from exact rationals. p-adic samples have
/// valuations spread over the three top layers of the ball so the boundary
/// sphere is hit often; real and rational samples are strictly interior.
Vector sample_in_ball(const Ball& ball, Rng& rng);

/// A nonzero exact scalar of moderate size (p-adic valuation in [-1, 2]).
/// Used for quotient parameters t.
Scalar random_nonzero_scalar(const FieldDescriptor& field, Rng& rng);

}  // namespace ultrafix
