#pragma once

#include <string>
#include <string_view>

namespace byos {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

namespace odkg {

/// Lowercased label with whitespace runs collapsed.
std::string normalize_label(std::string_view label);

/// "c:" followed by the first 16 hex digits of sha256(normalize_label(label)).
std::string concept_id(std::string_view label);

}  // namespace odkg

}  // namespace byos
