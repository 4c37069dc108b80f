#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "textvqa/answers.hpp"
#include "textvqa/backends.hpp"
#include "textvqa/curation.hpp"
#include "textvqa/prompting.hpp"
#include "textvqa/types.hpp"

namespace textvqa::pipeline {

struct RunMetrics {
    std::int64_t images_in = 0;
    std::int64_t images_with_text = 0;
    std::int64_t images_failed = 0;
    std::int64_t candidates_generated = 0;
    std::int64_t questions_generated = 0;
    std::int64_t dropped_by_length = 0;
    std::int64_t dropped_by_verdict = 0;
    std::int64_t unparseable_verdicts = 0;
    std::int64_t pairs_emitted = 0;

    RunMetrics& merge(const RunMetrics& other);
    json to_json() const;
    bool operator==(const RunMetrics&) const = default;
};

// Content-addressed stage cache: one JSON file per (stage, digest) under the
// cache directory. Corrupt entries are discarded and recomputed.
class StageCache {
public:
    explicit StageCache(std::string dir);
    std::optional<json> lookup(const std::string& stage, const std::string& digest) const;
    void store(const std::string& image_id, const std::string& stage, const std::string& digest,
               const json& response) const;
    std::string dir() const { return dir_; }

private:
    std::string dir_;
};

// Backend decorator that serves cache hits and stores successful responses.
class CachingBackend : public backends::Backend {
public:
    CachingBackend(std::shared_ptr<backends::Backend> inner, std::shared_ptr<StageCache> cache);
    json invoke(const backends::BackendRequest& request) override;

private:
    std::shared_ptr<backends::Backend> inner_;
    std::shared_ptr<StageCache> cache_;
};

// True iff the whitespace token count t satisfies min <= t <= max.
bool length_filter(const std::string& question, int min_tokens, int max_tokens);

struct ImageResult {
    std::vector<QaPair> pairs;  // emitted (Right + length-pass) pairs only
    RunMetrics metrics;
    bool failed = false;
    std::string failure_reason;
};

struct PipelineContext {
    PipelineConfig config;
    prompting::TemplateSet templates;
    answers::StopwordList stopwords;

    static PipelineContext make(const PipelineConfig& config);
};

// Runs the eight stages for one image. Backend errors on spot/ground/validate
// mark the image failed; caption failures skip the crop; qgen failures drop
// the candidate.
ImageResult process_image(const ImageRecord& record, const PipelineContext& ctx,
                          backends::Backend& backend);

struct RunResult {
    RunMetrics metrics;
    std::string output_path;
};

// Full batch: worker pool of config.parallelism, deterministic output sorted
// by (image_id, answer, question), metrics written to <out>.metrics.json.
RunResult run(const curation::Manifest& manifest, const PipelineContext& ctx,
              std::shared_ptr<backends::Backend> backend, const std::string& out_path);

// Identical to run(); requires the cache directory to already exist.
RunResult resume(const curation::Manifest& manifest, const PipelineContext& ctx,
                 std::shared_ptr<backends::Backend> backend, const std::string& out_path);

struct FixtureProbe {
    std::string image_id;
    std::string stage;
    std::string digest;
    bool present = false;
};

struct FixtureReport {
    std::vector<FixtureProbe> probes;
    std::vector<FixtureProbe> missing() const;
};

// Walks the stage chain per image against a fixture directory, reporting which
// fixtures the pipeline would need and whether they exist. A missing fixture
// breaks that image's chain (deeper digests are unknowable).
FixtureReport check_fixtures(const curation::Manifest& manifest, const PipelineContext& ctx,
                             const std::string& fixture_dir);

}  // namespace textvqa::pipeline
