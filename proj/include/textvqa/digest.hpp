#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace textvqa {

// FNV-1a 64-bit, hex-encoded. Stable across runs and platforms.
std::string fnv1a_hex(std::string_view data);

// Digest of (stage, payload) over the canonical serialization (nlohmann
// object keys are emitted sorted, so field order in code does not matter).
std::string request_digest(const std::string& stage, const nlohmann::json& payload);

}  // namespace textvqa
