#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace umlk {

/// Minimum name similarity for two elements to be considered the same.
inline constexpr double kMatchThreshold = 0.75;

/// Trims, collapses internal whitespace runs to one space and case-folds.
/// Input is UTF-8; invalid byte sequences are replaced by U+FFFD.
std::string normalize_name(std::string_view raw);

/// Number of code points in a UTF-8 string.
std::size_t code_point_length(std::string_view utf8);

/// Levenshtein distance over code points (unit insert/delete/substitute).
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - lev / max(len) over normalized names. 1 when both normalize to
/// empty, 0 when exactly one does.
double similarity(std::string_view a, std::string_view b);

inline bool is_similar(std::string_view a, std::string_view b) {
  return similarity(a, b) >= kMatchThreshold;
}

}  // namespace umlk
