#pragma once

#include <string>

#include "ultrafix/json_io.hpp"

namespace ultrafix::cli {

using json_io::json;

enum ExitCode { kOk = 0, kSolverError = 1, kSchemaError = 2 };

struct Response {
    json body;
    int exit_code = kOk;
};

/// Runs one request:
///
///   {"schema_version": 1, "command": "invert" | "implicit" | "fixpoint" | "certify" | "check",
///    "field": {...}, "map": {...}, "geometry": {...},
///    "seed": 0, "samples": 1000, "tolerance": "1e-12"}
///
/// Solver errors give exit code 1 and {"status": "error", "error": {kind, message, details}};
/// malformed requests give exit code 2. The body is deterministic for a given request.
Response run(const json& request);

/// The canonical text form of a response: two-space indented, sorted keys, trailing newline.
std::string render(const json& body);

}  // namespace ultrafix::cli
