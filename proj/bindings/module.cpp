// Python bindings for the core operations. Structured results cross the
// boundary as plain dicts/lists (via JSON) so callers need no wrapper types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "textvqa/alignment.hpp"
#include "textvqa/analytics.hpp"
#include "textvqa/answers.hpp"
#include "textvqa/pipeline.hpp"
#include "textvqa/prompting.hpp"

namespace py = pybind11;
using namespace textvqa;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null:
            return py::none();
        case json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case json::value_t::number_integer:
            return py::int_(j.get<std::int64_t>());
        case json::value_t::number_unsigned:
            return py::int_(j.get<std::uint64_t>());
        case json::value_t::number_float:
            return py::float_(j.get<double>());
        case json::value_t::string:
            return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default:
            return py::none();
    }
}

BoundingBox box_from_seq(const std::vector<double>& v) {
    if (v.size() != 4) throw py::value_error("bbox must be [x_min, y_min, x_max, y_max]");
    return BoundingBox{v[0], v[1], v[2], v[3]};
}

}  // namespace

PYBIND11_MODULE(_textvqa_synth, m) {
    m.doc() = "Scene-text VQA dataset synthesis: core operations";
    m.attr("__version__") = kPipelineVersion;

    m.def(
        "extract_ocr_answers",
        [](const std::vector<std::string>& tokens, const std::string& description) {
            auto stops = answers::StopwordList::builtin();
            py::list out;
            for (const auto& c : answers::extract_ocr_answers(tokens, description, stops)) {
                py::dict d;
                d["text"] = c.text;
                d["span_start"] = c.span_start;
                d["span_end"] = c.span_end;
                d["raw_text"] = c.raw_text;
                out.append(d);
            }
            return out;
        },
        py::arg("ocr_tokens"), py::arg("description"),
        "Candidate answers: maximal token-matched word groups of the description.");

    m.def(
        "ioa",
        [](const std::vector<double>& token_box, const std::vector<double>& crop_box) {
            return alignment::ioa(box_from_seq(token_box), box_from_seq(crop_box));
        },
        py::arg("token_box"), py::arg("crop_box"),
        "Intersection area over the token box's own area.");

    m.def(
        "assign_tokens",
        [](const std::vector<std::pair<std::string, std::vector<double>>>& tokens,
           const std::vector<std::pair<std::string, std::vector<double>>>& crops,
           double threshold) {
            std::vector<OcrToken> toks;
            for (const auto& [text, box] : tokens)
                toks.push_back(OcrToken{text, box_from_seq(box), 1.0});
            std::vector<ObjectCrop> crs;
            for (const auto& [crop_id, box] : crops)
                crs.push_back(ObjectCrop{crop_id, box_from_seq(box), ""});
            auto report = alignment::assign_tokens(toks, crs, threshold);
            py::dict out;
            for (const auto& ctx : report.contexts) {
                py::list texts;
                for (const auto& t : ctx.tokens) texts.append(t.text);
                out[py::str(region_label(ctx.region))] = texts;
            }
            return out;
        },
        py::arg("tokens"), py::arg("crops"), py::arg("threshold") = 0.5,
        "Token-to-crop assignment; returns {crop_id or 'whole_image': [token texts]}.");

    m.def(
        "render_caption_prompt",
        [](const std::vector<std::string>& tokens, bool with_tokens) {
            return prompting::render_caption_prompt(
                prompting::TemplateSet::builtin(),
                with_tokens ? CaptionVariant::with_tokens : CaptionVariant::plain, tokens);
        },
        py::arg("ocr_tokens") = std::vector<std::string>{}, py::arg("with_tokens") = false);

    m.def(
        "render_question_prompt",
        [](const std::string& description, const std::string& answer) {
            return prompting::render_question_prompt(prompting::TemplateSet::builtin(),
                                                     description, answer);
        },
        py::arg("description"), py::arg("answer"));

    m.def(
        "render_validation_prompt",
        [](const std::string& description, const std::string& question,
           const std::string& answer) {
            return prompting::render_validation_prompt(prompting::TemplateSet::builtin(),
                                                       description, question, answer);
        },
        py::arg("description"), py::arg("question"), py::arg("answer"));

    m.def(
        "parse_verdict",
        [](const std::string& raw) { return to_string(prompting::parse_verdict(raw).value); },
        py::arg("raw_response"),
        "'Right', 'Wrong', or 'Unparseable' from a validator response.");

    m.def("length_filter", &pipeline::length_filter, py::arg("question"),
          py::arg("min_tokens") = 5, py::arg("max_tokens") = 50);

    m.def("classify_w_type", &analytics::classify_w_type, py::arg("question"));

    m.def("question_contains_ocr", &analytics::question_contains_ocr, py::arg("question"),
          py::arg("ocr_tokens"));

    m.def(
        "tfidf_top_ngrams",
        [](const std::map<std::string, std::vector<std::string>>& questions_by_type, int n,
           int k) {
            py::dict out;
            for (const auto& [type, phrases] : analytics::tfidf_top_ngrams(questions_by_type, n, k)) {
                py::list items;
                for (const auto& p : phrases) items.append(py::make_tuple(p.phrase, p.score));
                out[py::str(type)] = items;
            }
            return out;
        },
        py::arg("questions_by_type"), py::arg("n") = 4, py::arg("k") = 10);

    m.def(
        "compute_stats",
        [](const std::string& dataset_path, int top_k) {
            return json_to_py(analytics::compute_stats(dataset_path, top_k).to_json());
        },
        py::arg("dataset_path"), py::arg("top_k") = 10,
        "Dataset statistics for a JSONL dataset file, as a dict.");
}
