#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "textvqa/prompting.hpp"

using namespace textvqa;
using prompting::TemplateSet;

TEST_CASE("caption prompt, plain variant, is the exact template") {
    auto ts = TemplateSet::builtin();
    CHECK(prompting::render_caption_prompt(ts, CaptionVariant::plain, {}) ==
          "Focusing on the texts present in the image, write a caption that describes the context "
          "of texts in the image.");
}

TEST_CASE("caption prompt with tokens substitutes a bracketed list") {
    auto ts = TemplateSet::builtin();
    auto rendered = prompting::render_caption_prompt(ts, CaptionVariant::with_tokens, {"stop", "here"});
    CHECK(rendered ==
          "Focusing on the OCR tokens [stop, here] present in the image, write a caption that "
          "describes the context of texts in the image.");
    CHECK(rendered.find("<list of tokens>") == std::string::npos);

    auto empty = prompting::render_caption_prompt(ts, CaptionVariant::with_tokens, {});
    CHECK(empty.find("[]") != std::string::npos);
}

TEST_CASE("question prompt embeds the answer verbatim and appends the description") {
    auto ts = TemplateSet::builtin();
    auto p = prompting::render_question_prompt(ts, "a chef on a book cover", "chef");
    CHECK(p.find("Based on the provided image description, your task is to generate an extremely "
                 "brief question about the text present in the image that has the exact answer "
                 "chef") == 0);
    CHECK(p.find("Image Description: a chef on a book cover") != std::string::npos);

    auto apostrophe = prompting::render_question_prompt(ts, "d", "teacher's whisky scotch");
    CHECK(apostrophe.find("the exact answer teacher's whisky scotch") != std::string::npos);

    auto empty_desc = prompting::render_question_prompt(ts, "", "chef");
    CHECK(empty_desc.find("Image Description:") != std::string::npos);
}

TEST_CASE("validation prompt fills all three slots") {
    auto ts = TemplateSet::builtin();
    auto p = prompting::render_validation_prompt(ts, "some description", "what does it say?", "deere");
    CHECK(p.rfind("Evaluation (either 'Right'/'Wrong') in only JSON format:") ==
          p.size() - std::string("Evaluation (either 'Right'/'Wrong') in only JSON format:").size());
    CHECK(p.find("<Image description>") == std::string::npos);
    CHECK(p.find("<synthesized question>") == std::string::npos);
    CHECK(p.find("<synthesized answer>") == std::string::npos);
    CHECK(p.find("Image Description: some description.") != std::string::npos);
    CHECK(p.find("Question: what does it say?.") != std::string::npos);
    CHECK(p.find("Answer: deere.") != std::string::npos);
}

TEST_CASE("newlines in slots are collapsed before substitution") {
    auto ts = TemplateSet::builtin();
    auto p = prompting::render_validation_prompt(ts, "desc", "what\ndoes it say?", "x");
    CHECK(p.find('\n') == std::string::npos);
    CHECK(p.find("what does it say?") != std::string::npos);
}

TEST_CASE("parse_verdict") {
    CHECK(prompting::parse_verdict(R"({"Evaluation": "Right"})").value == Verdict::Right);
    CHECK(prompting::parse_verdict("wrong").value == Verdict::Wrong);
    CHECK(prompting::parse_verdict("The answer is Wrong because it is incomplete").value ==
          Verdict::Wrong);
    CHECK(prompting::parse_verdict("maybe").value == Verdict::Unparseable);
    CHECK(prompting::parse_verdict("Right or Wrong").value == Verdict::Unparseable);
    CHECK(prompting::parse_verdict("").value == Verdict::Unparseable);
    // Word-boundary scan: substrings of larger words do not count.
    CHECK(prompting::parse_verdict("copyright notice").value == Verdict::Unparseable);
    auto v = prompting::parse_verdict("RIGHT");
    CHECK(v.value == Verdict::Right);
    CHECK(v.raw_response == "RIGHT");
}

TEST_CASE("prompt override file replaces a stage template") {
    std::string path = "prompt_overrides_test.json";
    {
        std::ofstream out(path);
        out << R"({"qgen": "Ask about <chosen group of OCR tokens as answer>"})";
    }
    auto ts = TemplateSet::with_overrides(path);
    auto p = prompting::render_question_prompt(ts, "d", "deere");
    CHECK(p.find("Ask about deere") == 0);
    // Untouched stages keep the builtin text.
    CHECK(prompting::render_caption_prompt(ts, CaptionVariant::plain, {}) ==
          prompting::render_caption_prompt(TemplateSet::builtin(), CaptionVariant::plain, {}));
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << R"({"nonsense_stage": "x"})";
    }
    CHECK_THROWS(TemplateSet::with_overrides(path));
    std::remove(path.c_str());
}
