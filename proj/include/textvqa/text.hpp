#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace textvqa::text {

// ASCII-only lowercase; Unicode segmentation is deliberately not used.
std::string to_lower(std::string_view s);

// Split on runs of ASCII whitespace; no empty items.
std::vector<std::string> split_ws(std::string_view s);

// Collapse every run of whitespace (incl. newlines) to a single space and trim.
std::string collapse_ws(std::string_view s);

// Trim ASCII whitespace from both ends.
std::string trim(std::string_view s);

// Strip leading/trailing non-alphanumeric ASCII characters from one word.
std::string strip_punct(std::string_view word);

// Whole-word occurrence of `word` inside `haystack` (ASCII word boundaries).
bool contains_word(std::string_view haystack, std::string_view word);

std::size_t count_ws_tokens(std::string_view s);

}  // namespace textvqa::text
