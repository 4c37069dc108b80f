#include "textvqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "textvqa/alignment.hpp"
#include "textvqa/digest.hpp"
#include "textvqa/text.hpp"

namespace fs = std::filesystem;

namespace textvqa::pipeline {

using backends::Backend;
using backends::BackendError;
using backends::BackendRequest;
using backends::ErrorKind;

RunMetrics& RunMetrics::merge(const RunMetrics& o) {
    images_in += o.images_in;
    images_with_text += o.images_with_text;
    images_failed += o.images_failed;
    candidates_generated += o.candidates_generated;
    questions_generated += o.questions_generated;
    dropped_by_length += o.dropped_by_length;
    dropped_by_verdict += o.dropped_by_verdict;
    unparseable_verdicts += o.unparseable_verdicts;
    pairs_emitted += o.pairs_emitted;
    return *this;
}

json RunMetrics::to_json() const {
    return json{{"images_in", images_in},
                {"images_with_text", images_with_text},
                {"images_failed", images_failed},
                {"candidates_generated", candidates_generated},
                {"questions_generated", questions_generated},
                {"dropped_by_length", dropped_by_length},
                {"dropped_by_verdict", dropped_by_verdict},
                {"unparseable_verdicts", unparseable_verdicts},
                {"pairs_emitted", pairs_emitted}};
}

// ---- cache ------------------------------------------------------------------

StageCache::StageCache(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::optional<json> StageCache::lookup(const std::string& stage, const std::string& digest) const {
    fs::path path = fs::path(dir_) / (stage + "_" + digest + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json entry = json::parse(in, nullptr, false);
    if (entry.is_discarded() || !entry.is_object() || !entry.contains("response")) {
        std::cerr << "[cache] discarding corrupt entry " << path.string() << "\n";
        return std::nullopt;
    }
    return entry.at("response");
}

void StageCache::store(const std::string& image_id, const std::string& stage,
                       const std::string& digest, const json& response) const {
    json entry{{"image_id", image_id},
               {"stage", stage},
               {"request_digest", digest},
               {"response", response},
               {"created_at", static_cast<std::int64_t>(std::time(nullptr))}};
    fs::path path = fs::path(dir_) / (stage + "_" + digest + ".json");
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(
        std::hash<std::thread::id>{}(std::this_thread::get_id()) & 0xffff);
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << entry.dump(2) << "\n";
    }
    fs::rename(tmp, path);  // atomic publish
}

CachingBackend::CachingBackend(std::shared_ptr<Backend> inner, std::shared_ptr<StageCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

json CachingBackend::invoke(const BackendRequest& request) {
    if (auto hit = cache_->lookup(request.stage, request.digest)) return *hit;
    json response = inner_->invoke(request);
    // Error documents are not cached; transient failures must stay retryable.
    if (!(response.is_object() && response.contains("error")))
        cache_->store(request.payload.value("image_id", ""), request.stage, request.digest, response);
    return response;
}

// ---- per-image processing -----------------------------------------------------

bool length_filter(const std::string& question, int min_tokens, int max_tokens) {
    auto t = static_cast<int>(text::count_ws_tokens(question));
    return t >= min_tokens && t <= max_tokens;
}

PipelineContext PipelineContext::make(const PipelineConfig& config) {
    PipelineContext ctx;
    ctx.config = config;
    ctx.templates = config.prompt_overrides_path
                        ? prompting::TemplateSet::with_overrides(*config.prompt_overrides_path)
                        : prompting::TemplateSet::builtin();
    ctx.stopwords = config.stopwords_path ? answers::StopwordList::from_file(*config.stopwords_path)
                                          : answers::StopwordList::builtin();
    return ctx;
}

namespace {

ImageResult failed_result(const std::string& reason) {
    ImageResult res;
    res.metrics.images_in = 1;
    res.metrics.images_failed = 1;
    res.failed = true;
    res.failure_reason = reason;
    return res;
}

std::vector<std::string> token_texts(const std::vector<OcrToken>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const OcrToken& t : tokens) out.push_back(t.text);
    return out;
}

}  // namespace

ImageResult process_image(const ImageRecord& record, const PipelineContext& ctx,
                          Backend& backend) {
    const PipelineConfig& cfg = ctx.config;
    ImageResult res;
    res.metrics.images_in = 1;

    std::vector<OcrToken> tokens;
    try {
        tokens = backends::spot_text(backend, record);
    } catch (const BackendError& e) {
        if (e.kind() == ErrorKind::MissingFixture) throw;
        return failed_result(std::string("spot: ") + e.what());
    }
    if (tokens.empty()) return res;  // no text, no pairs; not a failure
    res.metrics.images_with_text = 1;

    std::vector<ObjectCrop> crops;
    try {
        crops = backends::ground_objects(backend, record);
    } catch (const BackendError& e) {
        if (e.kind() == ErrorKind::MissingFixture) throw;
        return failed_result(std::string("ground: ") + e.what());
    }

    auto report = alignment::assign_tokens(tokens, crops, cfg.ioa_threshold);

    for (CropContext& context : report.contexts) {
        auto texts = token_texts(context.tokens);
        CaptionVariant variant = (cfg.caption_prompt_variant == CaptionVariant::with_tokens &&
                                  !texts.empty())
                                     ? CaptionVariant::with_tokens
                                     : CaptionVariant::plain;
        std::string prompt = prompting::render_caption_prompt(ctx.templates, variant, texts);
        try {
            context.caption =
                backends::caption_crop(backend, record, context.region, context.bbox, prompt);
        } catch (const BackendError& e) {
            if (e.kind() == ErrorKind::MissingFixture) throw;
            // Failed crop contributes no caption segment.
        }
    }

    ImageDescription desc = answers::aggregate_captions(report.contexts);
    if (desc.text.empty()) return res;

    auto candidates = answers::extract_ocr_answers(token_texts(tokens), desc.text, ctx.stopwords);
    candidates = answers::cap_answers(std::move(candidates), cfg.max_answer_words);
    res.metrics.candidates_generated = static_cast<std::int64_t>(candidates.size());

    Provenance prov;
    auto id_of = [&](const char* role) {
        auto it = cfg.identifiers.find(role);
        return it == cfg.identifiers.end() ? std::string() : it->second;
    };
    prov.spotter = id_of("spotter");
    prov.grounder = id_of("grounder");
    prov.captioner = id_of("captioner");
    prov.qgen = id_of("qgen");
    prov.validator = id_of("validator");
    prov.prompt_variant = to_string(cfg.caption_prompt_variant);
    prov.pipeline_version = kPipelineVersion;

    for (const CandidateAnswer& cand : candidates) {
        std::string qprompt = prompting::render_question_prompt(ctx.templates, desc.text, cand.text);
        std::string question;
        try {
            question = backends::generate_question(backend, record, qprompt);
        } catch (const BackendError& e) {
            if (e.kind() == ErrorKind::MissingFixture) throw;
            std::cerr << "[pipeline] " << record.image_id << ": candidate '" << cand.text
                      << "' dropped (" << e.what() << ")\n";
            continue;
        }
        res.metrics.questions_generated += 1;

        if (!length_filter(question, cfg.min_question_tokens, cfg.max_question_tokens)) {
            res.metrics.dropped_by_length += 1;
            continue;
        }

        std::string vprompt =
            prompting::render_validation_prompt(ctx.templates, desc.text, question, cand.text);
        std::string raw;
        try {
            raw = backends::validate_qa_raw(backend, record, vprompt);
        } catch (const BackendError& e) {
            if (e.kind() == ErrorKind::MissingFixture) throw;
            // Pair is pending, not emitted; the whole image is retried on
            // resume, so its partial counts are excluded from metrics.
            return failed_result(std::string("validate: ") + e.what());
        }
        Verdict verdict = prompting::parse_verdict(raw).value;
        if (verdict == Verdict::Right) {
            QaPair pair;
            pair.image_id = record.image_id;
            pair.source_uri = record.source_uri;
            pair.question = question;
            pair.answer = cand.text;
            pair.verdict = verdict;
            pair.description = desc.text;
            pair.ocr_tokens = tokens;
            pair.provenance = prov;
            res.pairs.push_back(std::move(pair));
            res.metrics.pairs_emitted += 1;
        } else if (verdict == Verdict::Wrong) {
            res.metrics.dropped_by_verdict += 1;
        } else {
            // Unparseable counts separately but is treated as Wrong for emission.
            res.metrics.unparseable_verdicts += 1;
        }
    }
    return res;
}

// ---- batch run ----------------------------------------------------------------

namespace {

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << content;
    }
    fs::rename(tmp, path);
}

}  // namespace

RunResult run(const curation::Manifest& manifest, const PipelineContext& ctx,
              std::shared_ptr<Backend> backend, const std::string& out_path) {
    // Fail before any backend call if the output is unwritable.
    {
        std::ofstream probe(out_path, std::ios::app);
        if (!probe) throw std::runtime_error("cannot write output file: " + out_path);
    }
    auto cache = std::make_shared<StageCache>(ctx.config.cache_dir);
    auto cached = std::make_shared<CachingBackend>(backend, cache);

    const std::size_t n = manifest.entries.size();
    std::vector<ImageResult> results(n);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::vector<std::string> hard_errors;

    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                results[i] = process_image(manifest.entries[i], ctx, *cached);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                hard_errors.emplace_back(manifest.entries[i].image_id + ": " + e.what());
            }
        }
    };

    std::size_t n_threads = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(ctx.config.parallelism, 1)), std::max<std::size_t>(n, 1));
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (!hard_errors.empty())
        throw std::runtime_error("pipeline hard error: " + hard_errors.front());

    RunMetrics total;
    std::vector<QaPair> pairs;
    for (ImageResult& r : results) {
        total.merge(r.metrics);
        for (QaPair& p : r.pairs) pairs.push_back(std::move(p));
        if (r.failed)
            std::cerr << "[pipeline] image failed: " << r.failure_reason << "\n";
    }

    std::sort(pairs.begin(), pairs.end(), [](const QaPair& a, const QaPair& b) {
        if (a.image_id != b.image_id) return a.image_id < b.image_id;
        if (a.answer != b.answer) return a.answer < b.answer;
        return a.question < b.question;
    });

    std::string body;
    for (const QaPair& p : pairs) body += to_dataset_record(p).dump() + "\n";
    write_file_atomic(out_path, body);
    write_file_atomic(out_path + ".metrics.json", total.to_json().dump(2) + "\n");

    return RunResult{total, out_path};
}

RunResult resume(const curation::Manifest& manifest, const PipelineContext& ctx,
                 std::shared_ptr<Backend> backend, const std::string& out_path) {
    if (!fs::is_directory(ctx.config.cache_dir))
        throw std::runtime_error("resume requires an existing cache directory: " +
                                 ctx.config.cache_dir);
    return run(manifest, ctx, backend, out_path);
}

// ---- fixture checking -----------------------------------------------------------

namespace {

// Probes fixture presence while letting process_image walk as deep as the
// available fixtures allow. Misses surface as per-stage failures, not the
// fixture backend's hard error.
class ProbingBackend : public Backend {
public:
    ProbingBackend(backends::FixtureBackend fixtures, std::vector<FixtureProbe>& probes,
                   std::string image_id)
        : fixtures_(std::move(fixtures)), probes_(probes), image_id_(std::move(image_id)) {}

    json invoke(const BackendRequest& request) override {
        FixtureProbe probe{image_id_, request.stage, request.digest, fixtures_.has(request.digest)};
        probes_.push_back(probe);
        if (!probe.present)
            throw BackendError(ErrorKind::Unreachable,
                               "no fixture for stage " + request.stage + " digest " + request.digest);
        return fixtures_.invoke(request);
    }

private:
    backends::FixtureBackend fixtures_;
    std::vector<FixtureProbe>& probes_;
    std::string image_id_;
};

}  // namespace

std::vector<FixtureProbe> FixtureReport::missing() const {
    std::vector<FixtureProbe> out;
    for (const FixtureProbe& p : probes)
        if (!p.present) out.push_back(p);
    return out;
}

FixtureReport check_fixtures(const curation::Manifest& manifest, const PipelineContext& ctx,
                             const std::string& fixture_dir) {
    if (!fs::is_directory(fixture_dir))
        throw std::runtime_error("unreadable fixture directory: " + fixture_dir);
    FixtureReport report;
    for (const ImageRecord& record : manifest.entries) {
        ProbingBackend probing(backends::FixtureBackend(fixture_dir), report.probes,
                               record.image_id);
        process_image(record, ctx, probing);
    }
    return report;
}

}  // namespace textvqa::pipeline
