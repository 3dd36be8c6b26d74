#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ultrafix/calculus.hpp"
#include "ultrafix/kernels.hpp"

namespace ultrafix {

/// A deliberately broken f^[1]: the t != 0 branch is off by one in every
/// coordinate. Exists so the identity checker can be shown to catch it.
Vector quotient_plus_one(const MapSpec& f, const QuotientPoint& q);

struct IdentityWitness {
    std::size_t sample = 0;
    std::map<std::string, Vector> vectors;
    std::map<std::string, Scalar> scalars;
    Vector lhs;
    Vector rhs;
    std::string error;   ///< set when evaluation threw instead of disagreeing
};

struct IdentityResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::optional<IdentityWitness> witness;   ///< first failing sample

    bool passed() const noexcept { return failures == 0; }
};

struct IdentityReport {
    std::vector<IdentityResult> identities;
    bool passed() const;
};

/// Evaluates the chain rule, the difference identity
///   f^[1](x,y1,t) - f^[1](x,y2,t) = f^[1](x+t y2, y1-y2, t),
/// the rescaling identity t f^[1](x,y,ts) = f^[1](x,ty,s), and the second
/// rescaling identity
///   t^3 f^[2]((x,y,ts),(x1,y1,ts1),ts2) = f^[2]((x,t^2 y,s/t),(t x1,t^3 y1,s1),s2)
/// at `samples` seeded random points with exact rational coordinates. These
/// are polynomial identities, so points are drawn from all of K^m (the domain
/// restriction is ignored). The chain rule uses a seeded random outer map of
/// degree <= 2. Over Q and Q_p a pass means zero residual at tracked precision.
IdentityReport check_identities(const MapSpec& f, const FieldDescriptor& field, std::size_t samples,
                                std::uint64_t seed, Execution exec = Execution::parallel,
                                const QuotientFn& quotient = diff_quotient);

}  // namespace ultrafix
