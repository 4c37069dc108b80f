#pragma once

#include <map>
#include <string>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::prompting {

// Stage keys: caption_plain, caption_with_tokens, qgen, validate.
// Placeholders (literal markers in the template text):
//   caption_with_tokens: <list of tokens>
//   qgen:                <chosen group of OCR tokens as answer>
//   validate:            <Image description>, <synthesized question>, <synthesized answer>
struct TemplateSet {
    std::map<std::string, std::string> templates;

    static TemplateSet builtin();
    // Merge overrides from a JSON file {stage: template_text}; unknown stage
    // keys are errors.
    static TemplateSet with_overrides(const std::string& path);
};

std::string render_caption_prompt(const TemplateSet& ts, CaptionVariant variant,
                                  const std::vector<std::string>& tokens);

std::string render_question_prompt(const TemplateSet& ts, const std::string& description,
                                   const std::string& answer);

std::string render_validation_prompt(const TemplateSet& ts, const std::string& description,
                                     const std::string& question, const std::string& answer);

struct ValidationVerdict {
    Verdict value = Verdict::Unparseable;
    std::string raw_response;
};

// Lenient: case-insensitive standalone-word scan for "right"/"wrong";
// both present or neither -> Unparseable.
ValidationVerdict parse_verdict(const std::string& raw);

// "[a, b, c]"; empty list renders as "[]".
std::string render_token_list(const std::vector<std::string>& tokens);

}  // namespace textvqa::prompting
