#include "textvqa/types.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "textvqa/text.hpp"

namespace textvqa {

BoundingBox BoundingBox::clamped(double w, double h) const {
    auto clip = [](double v, double lo, double hi) { return std::min(std::max(v, lo), hi); };
    return BoundingBox{clip(x_min, 0, w), clip(y_min, 0, h), clip(x_max, 0, w), clip(y_max, 0, h)};
}

std::string region_label(const RegionRef& r) {
    if (is_whole_image(r)) return "whole_image";
    return std::get<std::string>(r);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Right: return "Right";
        case Verdict::Wrong: return "Wrong";
        default: return "Unparseable";
    }
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "Right") return Verdict::Right;
    if (s == "Wrong") return Verdict::Wrong;
    if (s == "Unparseable") return Verdict::Unparseable;
    throw std::invalid_argument("unknown verdict: " + s);
}

std::string to_string(CaptionVariant v) {
    return v == CaptionVariant::plain ? "plain" : "with_tokens";
}

CaptionVariant caption_variant_from_string(const std::string& s) {
    if (s == "plain") return CaptionVariant::plain;
    if (s == "with_tokens") return CaptionVariant::with_tokens;
    throw std::invalid_argument("unknown caption variant: " + s);
}

PipelineConfig default_config() {
    PipelineConfig c;
    c.identifiers = {
        {"spotter", "glass"},      {"grounder", "kosmos-2"},
        {"captioner", "llava-r"},  {"qgen", "neural-chat-7b"},
        {"validator", "neural-chat-7b"},
    };
    return c;
}

// ---- validation -----------------------------------------------------------

std::vector<std::string> validate(const ImageRecord& r) {
    std::vector<std::string> v;
    if (r.image_id.empty()) v.push_back("image_id non-empty");
    if (r.width_px <= 0) v.push_back("width_px > 0");
    if (r.height_px <= 0) v.push_back("height_px > 0");
    return v;
}

std::vector<std::string> validate(const BoundingBox& b) {
    std::vector<std::string> v;
    if (!(b.x_min < b.x_max)) v.push_back("x_min < x_max");
    if (!(b.y_min < b.y_max)) v.push_back("y_min < y_max");
    if (b.x_min < 0 || b.y_min < 0) v.push_back("coordinates non-negative");
    return v;
}

std::vector<std::string> validate(const OcrToken& t) {
    std::vector<std::string> v = validate(t.bbox);
    if (t.text.empty()) v.push_back("text non-empty");
    if (t.text.find_first_of(" \t\n\r") != std::string::npos)
        v.push_back("text contains no interior whitespace");
    if (t.confidence < 0.0 || t.confidence > 1.0) v.push_back("confidence within [0,1]");
    return v;
}

std::vector<std::string> validate(const ObjectCrop& c) {
    std::vector<std::string> v = validate(c.bbox);
    if (c.crop_id.empty()) v.push_back("crop_id non-empty");
    return v;
}

std::vector<std::string> validate(const CandidateAnswer& a) {
    std::vector<std::string> v;
    if (a.span_end <= a.span_start) v.push_back("word_count > 0");
    if (a.text.empty()) v.push_back("text non-empty");
    if (a.text != text::to_lower(a.text)) v.push_back("text lowercase");
    return v;
}

std::vector<std::string> validate(const QaPair& p) {
    std::vector<std::string> v;
    if (p.image_id.empty()) v.push_back("image_id non-empty");
    if (p.answer.empty()) v.push_back("answer non-empty");
    if (p.answer != text::to_lower(p.answer)) v.push_back("answer lowercase");
    return v;
}

std::vector<std::string> validate(const PipelineConfig& c) {
    std::vector<std::string> v;
    if (!(c.ioa_threshold > 0.0 && c.ioa_threshold <= 1.0)) v.push_back("ioa_threshold in (0,1]");
    if (c.min_question_tokens > c.max_question_tokens) v.push_back("min <= max");
    if (c.max_answer_words && *c.max_answer_words <= 0) v.push_back("max_answer_words > 0");
    if (c.parallelism <= 0) v.push_back("parallelism positive");
    if (c.backend_mode != "fixture" && c.backend_mode != "remote")
        v.push_back("backend_mode one of {fixture, remote}");
    return v;
}

// ---- JSON -----------------------------------------------------------------

void to_json(json& j, const BoundingBox& b) { j = json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

void from_json(const json& j, BoundingBox& b) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("bbox must be [x_min,y_min,x_max,y_max]");
    b = BoundingBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

void to_json(json& j, const ImageRecord& r) {
    j = json{{"image_id", r.image_id},
             {"source_uri", r.source_uri},
             {"width_px", r.width_px},
             {"height_px", r.height_px}};
}

void from_json(const json& j, ImageRecord& r) {
    j.at("image_id").get_to(r.image_id);
    j.at("source_uri").get_to(r.source_uri);
    j.at("width_px").get_to(r.width_px);
    j.at("height_px").get_to(r.height_px);
}

void to_json(json& j, const OcrToken& t) {
    j = json{{"text", t.text}, {"bbox", t.bbox}, {"confidence", t.confidence}};
}

void from_json(const json& j, OcrToken& t) {
    j.at("text").get_to(t.text);
    j.at("bbox").get_to(t.bbox);
    j.at("confidence").get_to(t.confidence);
}

void to_json(json& j, const ObjectCrop& c) {
    j = json{{"crop_id", c.crop_id}, {"bbox", c.bbox}, {"phrase", c.phrase}};
}

void from_json(const json& j, ObjectCrop& c) {
    j.at("crop_id").get_to(c.crop_id);
    j.at("bbox").get_to(c.bbox);
    c.phrase = j.value("phrase", "");
}

void to_json(json& j, const Provenance& p) {
    j = json{{"spotter", p.spotter},       {"grounder", p.grounder},
             {"captioner", p.captioner},   {"qgen", p.qgen},
             {"validator", p.validator},   {"prompt_variant", p.prompt_variant},
             {"pipeline_version", p.pipeline_version}};
}

void from_json(const json& j, Provenance& p) {
    j.at("spotter").get_to(p.spotter);
    j.at("grounder").get_to(p.grounder);
    j.at("captioner").get_to(p.captioner);
    j.at("qgen").get_to(p.qgen);
    j.at("validator").get_to(p.validator);
    j.at("prompt_variant").get_to(p.prompt_variant);
    j.at("pipeline_version").get_to(p.pipeline_version);
}

json to_dataset_record(const QaPair& p) {
    return json{{"image_id", p.image_id},
                {"source_uri", p.source_uri},
                {"question", p.question},
                {"answer", p.answer},
                {"ocr_tokens", p.ocr_tokens},
                {"description", p.description},
                {"verdict", to_string(p.verdict)},
                {"provenance", p.provenance}};
}

QaPair qa_pair_from_dataset_record(const json& j) {
    QaPair p;
    j.at("image_id").get_to(p.image_id);
    j.at("source_uri").get_to(p.source_uri);
    j.at("question").get_to(p.question);
    j.at("answer").get_to(p.answer);
    j.at("ocr_tokens").get_to(p.ocr_tokens);
    j.at("description").get_to(p.description);
    p.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    j.at("provenance").get_to(p.provenance);
    return p;
}

json config_to_json(const PipelineConfig& c) {
    json j{{"ioa_threshold", c.ioa_threshold},
           {"min_question_tokens", c.min_question_tokens},
           {"max_question_tokens", c.max_question_tokens},
           {"caption_prompt_variant", to_string(c.caption_prompt_variant)},
           {"max_answer_words", c.max_answer_words ? json(*c.max_answer_words) : json(nullptr)},
           {"parallelism", c.parallelism},
           {"cache_dir", c.cache_dir},
           {"backend_mode", c.backend_mode},
           {"fixture_dir", c.fixture_dir},
           {"endpoints", c.endpoints},
           {"identifiers", c.identifiers},
           {"stopwords_path", c.stopwords_path ? json(*c.stopwords_path) : json(nullptr)},
           {"prompt_overrides_path",
            c.prompt_overrides_path ? json(*c.prompt_overrides_path) : json(nullptr)},
           {"random_seed", c.random_seed}};
    return j;
}

PipelineConfig config_from_json(const json& j) {
    static const std::set<std::string> known = {
        "ioa_threshold",        "min_question_tokens", "max_question_tokens",
        "caption_prompt_variant", "max_answer_words",  "parallelism",
        "cache_dir",            "backend_mode",        "fixture_dir",
        "endpoints",            "identifiers",         "stopwords_path",
        "prompt_overrides_path", "random_seed"};
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw std::invalid_argument("unknown config key: " + it.key());
    }
    PipelineConfig c = default_config();
    if (j.contains("ioa_threshold")) j.at("ioa_threshold").get_to(c.ioa_threshold);
    if (j.contains("min_question_tokens")) j.at("min_question_tokens").get_to(c.min_question_tokens);
    if (j.contains("max_question_tokens")) j.at("max_question_tokens").get_to(c.max_question_tokens);
    if (j.contains("caption_prompt_variant"))
        c.caption_prompt_variant = caption_variant_from_string(j.at("caption_prompt_variant").get<std::string>());
    if (j.contains("max_answer_words") && !j.at("max_answer_words").is_null())
        c.max_answer_words = j.at("max_answer_words").get<int>();
    if (j.contains("parallelism")) j.at("parallelism").get_to(c.parallelism);
    if (j.contains("cache_dir")) j.at("cache_dir").get_to(c.cache_dir);
    if (j.contains("backend_mode")) j.at("backend_mode").get_to(c.backend_mode);
    if (j.contains("fixture_dir")) j.at("fixture_dir").get_to(c.fixture_dir);
    if (j.contains("endpoints")) {
        for (auto it = j.at("endpoints").begin(); it != j.at("endpoints").end(); ++it)
            c.endpoints[it.key()] = it.value().get<std::string>();
    }
    if (j.contains("identifiers")) {
        for (auto it = j.at("identifiers").begin(); it != j.at("identifiers").end(); ++it)
            c.identifiers[it.key()] = it.value().get<std::string>();
    }
    if (j.contains("stopwords_path") && !j.at("stopwords_path").is_null())
        c.stopwords_path = j.at("stopwords_path").get<std::string>();
    if (j.contains("prompt_overrides_path") && !j.at("prompt_overrides_path").is_null())
        c.prompt_overrides_path = j.at("prompt_overrides_path").get<std::string>();
    if (j.contains("random_seed")) j.at("random_seed").get_to(c.random_seed);
    return c;
}

}  // namespace textvqa
