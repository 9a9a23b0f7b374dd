// SPDX-License-Identifier: Apache-2.0
//
// Number formatting, scenario hashing and JSON encodings of states,
// matrices and α values.

#pragma once

#include "wvqp/alpha.hpp"
#include "wvqp/hilbert.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace wvqp::cli {

inline constexpr std::string_view kToolName = "wvqp";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// "0x" followed by 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

/// "# wvqp 0.1.0 | scenario 0x… | alpha re,im"
std::string header_comment(std::uint64_t scenario_hash, const Alpha& alpha);

/// {"tool", "version", "scenario", "alpha": [re, im]}
nlohmann::json meta_object(std::uint64_t scenario_hash, const Alpha& alpha);

/// Accepts a real number, [re, im] or {"re": .., "im": ..}.
Alpha alpha_from_json(const nlohmann::json& j);

/// Parses "RE" or "RE,IM".
Alpha parse_alpha(std::string_view text);

nlohmann::json to_json(const Alpha& alpha);

/// Accepts a nested real array, {"re": [[..]], "im": [[..]]} (im optional)
/// or the flat row-major {"dim": n, "re": [..], "im": [..]}.
Matrix matrix_from_json(const nlohmann::json& j);

/// Accepts a real array or {"dim": n, "re": [..], "im": [..]} (dim and im
/// optional).
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(Complex z);

}  // namespace wvqp::cli
