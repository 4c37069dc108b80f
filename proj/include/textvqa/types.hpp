#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace textvqa {

using json = nlohmann::json;

struct ImageRecord {
    std::string image_id;
    std::string source_uri;
    std::int64_t width_px = 0;
    std::int64_t height_px = 0;

    bool operator==(const ImageRecord&) const = default;
};

struct BoundingBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    // Clamp to [0,w]x[0,h]; idempotent. May produce a degenerate box, which
    // callers reject via validate().
    BoundingBox clamped(double w, double h) const;

    bool operator==(const BoundingBox&) const = default;
};

struct OcrToken {
    std::string text;
    BoundingBox bbox;
    double confidence = 0.0;

    bool operator==(const OcrToken&) const = default;
};

struct ObjectCrop {
    std::string crop_id;
    BoundingBox bbox;
    std::string phrase;  // grounding label, may be empty

    bool operator==(const ObjectCrop&) const = default;
};

// Region of a CropContext: a crop id, or the whole-image fallback.
struct WholeImage {
    bool operator==(const WholeImage&) const = default;
};
using RegionRef = std::variant<WholeImage, std::string>;

inline bool is_whole_image(const RegionRef& r) { return std::holds_alternative<WholeImage>(r); }
std::string region_label(const RegionRef& r);  // "whole_image" or the crop id

struct CropContext {
    RegionRef region;
    std::optional<BoundingBox> bbox;  // absent for the whole-image context
    std::vector<OcrToken> tokens;     // input order preserved
    std::string caption;              // empty until captioned

    bool operator==(const CropContext&) const = default;
};

struct SegmentSpan {
    RegionRef region;
    std::size_t start_word = 0;  // inclusive
    std::size_t end_word = 0;    // exclusive

    bool operator==(const SegmentSpan&) const = default;
};

struct ImageDescription {
    std::string text;
    std::vector<SegmentSpan> segment_spans;

    bool operator==(const ImageDescription&) const = default;
};

struct CandidateAnswer {
    std::string text;  // lowercased, per-word edge punctuation stripped
    std::size_t span_start = 0;  // word indices into the description
    std::size_t span_end = 0;
    std::string raw_text;  // description words over the span, verbatim (lowercased)

    std::size_t word_count() const { return span_end - span_start; }

    bool operator==(const CandidateAnswer&) const = default;
};

enum class Verdict { Right, Wrong, Unparseable };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct Provenance {
    std::string spotter;
    std::string grounder;
    std::string captioner;
    std::string qgen;
    std::string validator;
    std::string prompt_variant;
    std::string pipeline_version;

    bool operator==(const Provenance&) const = default;
};

struct QaPair {
    std::string image_id;
    std::string source_uri;
    std::string question;
    std::string answer;
    Verdict verdict = Verdict::Unparseable;
    std::string description;
    std::vector<OcrToken> ocr_tokens;
    Provenance provenance;

    bool operator==(const QaPair&) const = default;
};

enum class CaptionVariant { plain, with_tokens };

std::string to_string(CaptionVariant v);
CaptionVariant caption_variant_from_string(const std::string& s);

inline constexpr const char* kPipelineVersion = "0.1.0";

struct PipelineConfig {
    double ioa_threshold = 0.5;
    int min_question_tokens = 5;
    int max_question_tokens = 50;
    CaptionVariant caption_prompt_variant = CaptionVariant::with_tokens;
    std::optional<int> max_answer_words;
    int parallelism = 1;
    std::string cache_dir;
    std::string backend_mode = "fixture";  // "fixture" | "remote"
    std::string fixture_dir;
    std::map<std::string, std::string> endpoints;    // stage -> URL
    std::map<std::string, std::string> identifiers;  // role -> backend id
    std::optional<std::string> stopwords_path;
    std::optional<std::string> prompt_overrides_path;
    std::int64_t random_seed = 0;  // reserved for backends that sample

    bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig default_config();

// ---- validation -----------------------------------------------------------
// Violations are values, not faults: each entry names the broken invariant.

std::vector<std::string> validate(const ImageRecord& r);
std::vector<std::string> validate(const BoundingBox& b);
std::vector<std::string> validate(const OcrToken& t);
std::vector<std::string> validate(const ObjectCrop& c);
std::vector<std::string> validate(const CandidateAnswer& a);
std::vector<std::string> validate(const QaPair& p);
std::vector<std::string> validate(const PipelineConfig& c);

// ---- JSON -----------------------------------------------------------------

void to_json(json& j, const BoundingBox& b);
void from_json(const json& j, BoundingBox& b);
void to_json(json& j, const ImageRecord& r);
void from_json(const json& j, ImageRecord& r);
void to_json(json& j, const OcrToken& t);
void from_json(const json& j, OcrToken& t);
void to_json(json& j, const ObjectCrop& c);
void from_json(const json& j, ObjectCrop& c);
void to_json(json& j, const Provenance& p);
void from_json(const json& j, Provenance& p);

// Dataset record schema: one JSON object per output line. Field names are a
// compatibility contract.
json to_dataset_record(const QaPair& p);
QaPair qa_pair_from_dataset_record(const json& j);

json config_to_json(const PipelineConfig& c);
// Strict: unknown keys are errors.
PipelineConfig config_from_json(const json& j);

}  // namespace textvqa
