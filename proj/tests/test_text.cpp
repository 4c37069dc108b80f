#include <doctest.h>

#include "textvqa/text.hpp"

using namespace textvqa;

TEST_CASE("split_ws handles runs and edges") {
    CHECK(text::split_ws("  a \t b\nc ") == std::vector<std::string>{"a", "b", "c"});
    CHECK(text::split_ws("").empty());
    CHECK(text::split_ws("   ").empty());
}

TEST_CASE("collapse_ws trims and collapses") {
    CHECK(text::collapse_ws("  a  b\n\nc ") == "a b c");
    CHECK(text::collapse_ws("") == "");
    CHECK(text::collapse_ws("one") == "one");
}

TEST_CASE("strip_punct strips edges only") {
    CHECK(text::strip_punct("deere?") == "deere");
    CHECK(text::strip_punct("'teacher's'") == "teacher's");
    CHECK(text::strip_punct("!!!") == "");
    CHECK(text::strip_punct("12") == "12");
}

TEST_CASE("contains_word requires word boundaries") {
    CHECK(text::contains_word("the answer is wrong because", "wrong"));
    CHECK_FALSE(text::contains_word("copyright notice", "right"));
    CHECK(text::contains_word("right", "right"));
    CHECK(text::contains_word("\"right\"", "right"));
    CHECK_FALSE(text::contains_word("righteous", "right"));
}
