#include "textvqa/text.hpp"

#include <cctype>

namespace textvqa::text {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::string collapse_ws(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_punct(std::string_view word) {
    std::size_t b = 0, e = word.size();
    while (b < e && !is_alnum(word[b])) ++b;
    while (e > b && !is_alnum(word[e - 1])) --e;
    return std::string(word.substr(b, e - b));
}

bool contains_word(std::string_view haystack, std::string_view word) {
    if (word.empty()) return false;
    std::size_t pos = 0;
    while ((pos = haystack.find(word, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 || !is_alnum(haystack[pos - 1]);
        std::size_t end = pos + word.size();
        bool right_ok = end == haystack.size() || !is_alnum(haystack[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

std::size_t count_ws_tokens(std::string_view s) { return split_ws(s).size(); }

}  // namespace textvqa::text
