#include "textvqa/prompting.hpp"

#include <fstream>
#include <stdexcept>

#include "textvqa/text.hpp"

namespace textvqa::prompting {

namespace {

const char* kCaptionPlain =
    "Focusing on the texts present in the image, write a caption that describes the context of "
    "texts in the image.";

const char* kCaptionWithTokens =
    "Focusing on the OCR tokens <list of tokens> present in the image, write a caption that "
    "describes the context of texts in the image.";

const char* kQgen =
    "Based on the provided image description, your task is to generate an extremely brief "
    "question about the text present in the image that has the exact answer "
    "<chosen group of OCR tokens as answer>";

const char* kValidate =
    "Based on the provided Image description and a question, your task is to evaluate the "
    "correctness and completeness of the answer with 'Right' or 'Wrong' as output. Any incomplete "
    "answer also qualifies as 'Wrong'. Image Description: <Image description>. Question: "
    "<synthesized question>. Answer: <synthesized answer>. Evaluation (either 'Right'/'Wrong') in "
    "only JSON format:";

std::string replace_all(std::string s, const std::string& marker, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = s.find(marker, pos)) != std::string::npos) {
        s.replace(pos, marker.size(), value);
        pos += value.size();
    }
    return s;
}

}  // namespace

TemplateSet TemplateSet::builtin() {
    TemplateSet ts;
    ts.templates = {{"caption_plain", kCaptionPlain},
                    {"caption_with_tokens", kCaptionWithTokens},
                    {"qgen", kQgen},
                    {"validate", kValidate}};
    return ts;
}

TemplateSet TemplateSet::with_overrides(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read prompt overrides: " + path);
    json j = json::parse(in);
    TemplateSet ts = builtin();
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!ts.templates.count(it.key()))
            throw std::runtime_error("unknown prompt stage in overrides: " + it.key());
        ts.templates[it.key()] = it.value().get<std::string>();
    }
    return ts;
}

std::string render_token_list(const std::vector<std::string>& tokens) {
    std::string out = "[";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ", ";
        out += tokens[i];
    }
    out += "]";
    return out;
}

std::string render_caption_prompt(const TemplateSet& ts, CaptionVariant variant,
                                  const std::vector<std::string>& tokens) {
    if (variant == CaptionVariant::plain) return ts.templates.at("caption_plain");
    return replace_all(ts.templates.at("caption_with_tokens"), "<list of tokens>",
                       render_token_list(tokens));
}

std::string render_question_prompt(const TemplateSet& ts, const std::string& description,
                                   const std::string& answer) {
    std::string prompt = replace_all(ts.templates.at("qgen"),
                                     "<chosen group of OCR tokens as answer>",
                                     text::collapse_ws(answer));
    prompt += "\nImage Description: " + text::collapse_ws(description);
    return prompt;
}

std::string render_validation_prompt(const TemplateSet& ts, const std::string& description,
                                     const std::string& question, const std::string& answer) {
    std::string s = ts.templates.at("validate");
    s = replace_all(s, "<Image description>", text::collapse_ws(description));
    s = replace_all(s, "<synthesized question>", text::collapse_ws(question));
    s = replace_all(s, "<synthesized answer>", text::collapse_ws(answer));
    return s;
}

ValidationVerdict parse_verdict(const std::string& raw) {
    std::string lower = text::to_lower(raw);
    bool has_right = text::contains_word(lower, "right");
    bool has_wrong = text::contains_word(lower, "wrong");
    ValidationVerdict v;
    v.raw_response = raw;
    if (has_right == has_wrong)
        v.value = Verdict::Unparseable;
    else
        v.value = has_right ? Verdict::Right : Verdict::Wrong;
    return v;
}

}  // namespace textvqa::prompting
