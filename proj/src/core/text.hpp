#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace apg {

std::string trim(std::string_view s);
std::string rstrip(std::string_view s);
std::string to_lower(std::string_view s);

/// Splits on runs of whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

/// Splits on '\n'; keeps empty lines, drops a trailing '\r' per line.
std::vector<std::string> split_lines(std::string_view s);

/// Collapses whitespace-only line runs so the text contains no blank line.
/// Outer whitespace is trimmed. Used to keep prompt sections free of the
/// section separator.
std::string normalize_section(std::string_view s);

/// FNV-1a over the raw bytes. Stable across platforms.
std::uint64_t fnv1a64(std::string_view s);

/// Lowercase hex (16 digits) of fnv1a64; key format for mock scripts.
std::string fnv1a64_hex(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace apg
