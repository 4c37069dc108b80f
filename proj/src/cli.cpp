#include "textvqa/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "textvqa/analytics.hpp"
#include "textvqa/pipeline.hpp"

namespace fs = std::filesystem;

namespace textvqa::cli {

namespace {

struct CommonOpts {
    std::string manifest_path;
    std::string config_path;
    std::string shard;  // "i/N"
    std::optional<double> ioa_threshold;
    std::optional<int> min_q_tokens;
    std::optional<int> max_q_tokens;
    std::optional<int> max_answer_words;
    std::optional<int> parallelism;
    std::string cache_dir;
    std::string fixture_dir;
    std::string stopwords_path;
    std::string prompt_overrides_path;
};

void add_pipeline_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--manifest", opts.manifest_path, "Manifest CSV (image_id,source_uri,width_px,height_px)")
        ->required();
    cmd->add_option("--config", opts.config_path, "Pipeline config JSON");
    cmd->add_option("--shard", opts.shard, "Process shard i/N of the manifest (e.g. 0/4)");
    cmd->add_option("--ioa-threshold", opts.ioa_threshold,
                    "Token-to-crop assignment threshold in (0,1]");
    cmd->add_option("--min-q-tokens", opts.min_q_tokens, "Minimum question length in tokens");
    cmd->add_option("--max-q-tokens", opts.max_q_tokens, "Maximum question length in tokens");
    cmd->add_option("--max-answer-words", opts.max_answer_words, "Drop candidate answers longer than this");
    cmd->add_option("--parallelism", opts.parallelism, "Worker pool size");
    cmd->add_option("--cache", opts.cache_dir, "Stage cache directory");
    cmd->add_option("--fixtures", opts.fixture_dir, "Fixture directory (fixture backend mode)");
    cmd->add_option("--stopwords", opts.stopwords_path, "Stopword list override file");
    cmd->add_option("--prompt-overrides", opts.prompt_overrides_path,
                    "Prompt template overrides JSON");
}

PipelineConfig build_config(const CommonOpts& opts) {
    PipelineConfig config = default_config();
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw CLI::ValidationError("--config", "unreadable config file: " + opts.config_path);
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded())
            throw CLI::ValidationError("--config", "config file is not valid JSON: " + opts.config_path);
        config = config_from_json(j);
    }
    // Endpoint environment overrides sit between the config file and flags.
    for (const char* stage : {"spot", "ground", "caption", "qgen", "validate"}) {
        std::string var = "TEXTVQA_ENDPOINT_" + std::string(stage);
        for (char& c : var) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* value = std::getenv(var.c_str())) config.endpoints[stage] = value;
    }
    if (opts.ioa_threshold) config.ioa_threshold = *opts.ioa_threshold;
    if (opts.min_q_tokens) config.min_question_tokens = *opts.min_q_tokens;
    if (opts.max_q_tokens) config.max_question_tokens = *opts.max_q_tokens;
    if (opts.max_answer_words) config.max_answer_words = *opts.max_answer_words;
    if (opts.parallelism) config.parallelism = *opts.parallelism;
    if (!opts.cache_dir.empty()) config.cache_dir = opts.cache_dir;
    if (!opts.fixture_dir.empty()) config.fixture_dir = opts.fixture_dir;
    if (!opts.stopwords_path.empty()) config.stopwords_path = opts.stopwords_path;
    if (!opts.prompt_overrides_path.empty()) config.prompt_overrides_path = opts.prompt_overrides_path;

    auto violations = validate(config);
    if (!violations.empty())
        throw CLI::ValidationError("config", "invalid configuration: " + violations.front());
    return config;
}

curation::Manifest load_sharded_manifest(const CommonOpts& opts) {
    auto manifest = curation::load_manifest(opts.manifest_path);
    if (!opts.shard.empty()) {
        auto slash = opts.shard.find('/');
        if (slash == std::string::npos)
            throw CLI::ValidationError("--shard", "expected i/N, got " + opts.shard);
        std::size_t index = std::stoul(opts.shard.substr(0, slash));
        std::size_t count = std::stoul(opts.shard.substr(slash + 1));
        manifest = curation::partition(manifest, index, count);
    }
    return manifest;
}

int cmd_run(const CommonOpts& opts, const std::string& out_path, bool is_resume) {
    PipelineConfig config = build_config(opts);
    if (config.cache_dir.empty())
        throw CLI::ValidationError("--cache", "a cache directory is required");
    auto manifest = load_sharded_manifest(opts);
    auto ctx = pipeline::PipelineContext::make(config);
    auto backend = backends::make_backend(config);
    auto result = is_resume ? pipeline::resume(manifest, ctx, backend, out_path)
                            : pipeline::run(manifest, ctx, backend, out_path);
    std::cout << "wrote " << result.metrics.pairs_emitted << " pairs to " << result.output_path
              << " (" << result.metrics.images_in << " images, " << result.metrics.images_failed
              << " failed)\n";
    return result.metrics.images_failed > 0 ? 2 : 0;
}

int cmd_stats(const std::string& dataset_path, const std::string& out_path, int top_k) {
    auto stats = analytics::compute_stats(dataset_path, top_k);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write stats output: " + out_path);
    out << stats.to_json().dump(2) << "\n";
    std::cout << "qa_count=" << stats.qa_count << " unique_images=" << stats.unique_image_count
              << " median_question_length=" << stats.median_question_length << "\n";
    return 0;
}

int cmd_check_fixtures(const CommonOpts& opts) {
    PipelineConfig config = build_config(opts);
    if (config.fixture_dir.empty())
        throw CLI::ValidationError("--fixtures", "a fixture directory is required");
    if (config.cache_dir.empty()) {
        // Probe runs need a throwaway cache.
        config.cache_dir = (fs::temp_directory_path() / "textvqa-check-fixtures-cache").string();
        fs::remove_all(config.cache_dir);
    }
    auto manifest = load_sharded_manifest(opts);
    auto ctx = pipeline::PipelineContext::make(config);
    auto report = pipeline::check_fixtures(manifest, ctx, config.fixture_dir);
    auto missing = report.missing();
    for (const auto& probe : report.probes) {
        std::cout << (probe.present ? "ok      " : "MISSING ") << probe.image_id << " "
                  << probe.stage << " " << probe.digest << "\n";
    }
    std::cout << missing.size() << " missing of " << report.probes.size() << " probed\n";
    return missing.empty() ? 0 : 2;
}

int cmd_inspect(const std::string& dataset_path, const std::string& image_id,
                const std::string& cache_dir) {
    std::ifstream in(dataset_path);
    if (!in) throw std::runtime_error("cannot open dataset: " + dataset_path);
    std::vector<QaPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        QaPair p = qa_pair_from_dataset_record(json::parse(line));
        if (p.image_id == image_id) pairs.push_back(std::move(p));
    }

    if (!pairs.empty()) {
        std::cout << "image " << image_id << " (" << pairs.front().source_uri << ")\n";
        std::cout << "description: " << pairs.front().description << "\n";
        std::cout << "ocr tokens:";
        for (const OcrToken& t : pairs.front().ocr_tokens) std::cout << " " << t.text;
        std::cout << "\n";
        for (const QaPair& p : pairs) {
            std::cout << "  Q: " << p.question << "\n  A: " << p.answer
                      << "  [" << to_string(p.verdict) << "]\n";
            std::cout << "  provenance: spotter=" << p.provenance.spotter
                      << " grounder=" << p.provenance.grounder
                      << " captioner=" << p.provenance.captioner << " qgen=" << p.provenance.qgen
                      << " validator=" << p.provenance.validator
                      << " prompt_variant=" << p.provenance.prompt_variant
                      << " pipeline_version=" << p.provenance.pipeline_version << "\n";
        }
        return 0;
    }

    // No emitted pairs; fall back to the stage cache for spotted tokens.
    if (!cache_dir.empty() && fs::is_directory(cache_dir)) {
        for (const auto& entry : fs::directory_iterator(cache_dir)) {
            if (entry.path().filename().string().rfind("spot_", 0) != 0) continue;
            std::ifstream cin(entry.path());
            json j = json::parse(cin, nullptr, false);
            if (j.is_discarded() || j.value("image_id", "") != image_id) continue;
            std::cout << "image " << image_id << ": no pairs\n";
            std::cout << "ocr tokens:";
            for (const json& jt : j.at("response").value("tokens", json::array()))
                std::cout << " " << jt.value("text", "");
            std::cout << "\n";
            return 0;
        }
    }
    throw std::runtime_error("image_id not found: " + image_id);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Scene-text VQA dataset synthesis pipeline"};
    app.require_subcommand(1);

    CommonOpts run_opts, resume_opts, check_opts;
    std::string run_out, resume_out;
    bool run_resume_flag = false;

    auto* run_cmd = app.add_subcommand("run", "Process a manifest into a QA dataset");
    add_pipeline_flags(run_cmd, run_opts);
    run_cmd->add_option("--out", run_out, "Output dataset file (JSONL)")->required();
    run_cmd->add_flag("--resume", run_resume_flag, "Require and reuse an existing cache");

    auto* resume_cmd = app.add_subcommand("resume", "Resume a run from its stage cache");
    add_pipeline_flags(resume_cmd, resume_opts);
    resume_cmd->add_option("--out", resume_out, "Output dataset file (JSONL)")->required();

    std::string stats_dataset, stats_out = "stats.json";
    int stats_top_k = 10;
    auto* stats_cmd = app.add_subcommand("stats", "Compute dataset statistics");
    stats_cmd->add_option("--dataset", stats_dataset, "Dataset JSONL file")->required();
    stats_cmd->add_option("--out", stats_out, "Stats output file");
    stats_cmd->add_option("--top-k", stats_top_k, "Top phrases per question type")
        ->check(CLI::PositiveNumber);

    auto* check_cmd = app.add_subcommand("check-fixtures", "Verify fixture coverage for a manifest");
    add_pipeline_flags(check_cmd, check_opts);

    std::string inspect_dataset, inspect_image, inspect_cache;
    auto* inspect_cmd = app.add_subcommand("inspect", "Dump everything recorded for one image");
    inspect_cmd->add_option("--dataset", inspect_dataset, "Dataset JSONL file")->required();
    inspect_cmd->add_option("--image-id", inspect_image, "Image to inspect")->required();
    inspect_cmd->add_option("--cache", inspect_cache, "Stage cache (for images without pairs)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return cmd_run(run_opts, run_out, run_resume_flag);
        if (*resume_cmd) return cmd_run(resume_opts, resume_out, true);
        if (*stats_cmd) return cmd_stats(stats_dataset, stats_out, stats_top_k);
        if (*check_cmd) return cmd_check_fixtures(check_opts);
        if (*inspect_cmd) return cmd_inspect(inspect_dataset, inspect_image, inspect_cache);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace textvqa::cli
