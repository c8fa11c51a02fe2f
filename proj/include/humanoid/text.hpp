#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace humanoid::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Lowercased alphanumeric word tokens; apostrophes inside words are kept.
std::vector<std::string> words(std::string_view s);

/// Lowercased first alphabetic token, or empty.
std::string first_word(std::string_view s);

/// Keyword matching against tokenized text. A keyword may be several words
/// (matched as a contiguous run) and its last word may end in '*' for a
/// prefix match: "frustrat*" matches "frustrated".
bool contains_keyword(const std::vector<std::string>& tokens, std::string_view keyword);
bool contains_any(const std::vector<std::string>& tokens, const std::vector<std::string>& keywords);

bool icontains(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view s, char delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace humanoid::text
