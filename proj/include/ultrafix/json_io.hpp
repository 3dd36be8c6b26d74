#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ultrafix/contraction.hpp"
#include "ultrafix/identities.hpp"
#include "ultrafix/implicit.hpp"
#include "ultrafix/inverse.hpp"

namespace ultrafix::json_io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// A malformed request: missing or mistyped fields, inconsistent dimensions.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Encoding. p-adic scalars are {"val": k, "digits": [...]} with k = min(v, 0)
// and digits running from p^k up to the absolute precision; exact zero is
// {"val": "inf", "digits": []}. Rational scalars and exact magnitudes are
// "num/den" strings, real scalars and real magnitudes JSON numbers.
json to_json(const FieldDescriptor& f);
json to_json(const Scalar& s);
json to_json(const Magnitude& m);
json to_json(const Vector& v);
json to_json(const Operator& a);
json to_json(const Ball& b);
json to_json(const MapSpec& f);
json to_json(const InversionCertificate& c);
json to_json(const DistortionReport& r);
json to_json(const FixedPointReport& r);
json to_json(const ParamWindow& w);
json to_json(const ImplicitSolution& s);
json to_json(const IdentityReport& r);

// Decoding; every failure is a SchemaError. Scalars may also be given as
// "num/den" strings or integers in any field, and as numbers for real fields.
FieldDescriptor field_from_json(const json& j);
Rational rational_from_json(const json& j);
Scalar scalar_from_json(const FieldDescriptor& f, const json& j);
Magnitude magnitude_from_json(const FieldDescriptor& f, const json& j);
Vector vector_from_json(const FieldDescriptor& f, const json& j);
Operator operator_from_json(const FieldDescriptor& f, const json& j);
Ball ball_from_json(const FieldDescriptor& f, const json& j);
MapSpec map_from_json(const json& j);

}  // namespace ultrafix::json_io
