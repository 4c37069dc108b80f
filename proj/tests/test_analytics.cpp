#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "textvqa/analytics.hpp"
#include "textvqa/text.hpp"
#include "support/synthetic.hpp"

using namespace textvqa;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("classify_w_type") {
    CHECK(analytics::classify_w_type("What is shown?") == "what");
    CHECK(analytics::classify_w_type("which brand appears") == "which");
    CHECK(analytics::classify_w_type("WHO wrote this?") == "who");
    CHECK(analytics::classify_w_type("How many items?") == "how");
    CHECK(analytics::classify_w_type("When does it open?") == "when");
    CHECK(analytics::classify_w_type("Why is it red?") == "why");
    CHECK(analytics::classify_w_type("Name the city.") == "other");
    CHECK(analytics::classify_w_type("What, exactly?") == "what");
    CHECK(analytics::classify_w_type("") == "other");
    CHECK(analytics::classify_w_type("whatever happened") == "other");
}

TEST_CASE("question_contains_ocr requires whole-word matches") {
    CHECK(analytics::question_contains_ocr("What brand is Deere?", {"deere"}));
    CHECK(analytics::question_contains_ocr("Is it 7930, maybe?", {"7930"}));
    CHECK_FALSE(analytics::question_contains_ocr("What is an appleseed?", {"apple"}));
    CHECK_FALSE(analytics::question_contains_ocr("What is shown?", {"deere"}));
    CHECK_FALSE(analytics::question_contains_ocr("Anything at all?", {}));
    CHECK(analytics::question_contains_ocr("Does EXIT glow?", {"exit", "zz"}));
}

TEST_CASE("tfidf_top_ngrams on a hand-computed two-type corpus") {
    std::map<std::string, std::vector<std::string>> by_type = {
        {"what",
         {"what is the name of the shop", "what is the name of the street",
          "what color is the car"}},
        {"which",
         {"which brand is on the bottle now", "here is the name of the brand", "which way now"}},
    };
    auto top = analytics::tfidf_top_ngrams(by_type, 4, 3);

    // D = 2 documents; df=1 -> idf = ln(3/2)+1, df=2 -> idf = 1.
    const double idf1 = std::log(3.0 / 2.0) + 1.0;

    REQUIRE(top.count("what") == 1);
    REQUIRE(top["what"].size() == 3);
    CHECK(top["what"][0].phrase == "what is the name");
    CHECK(top["what"][0].score == doctest::Approx(2 * idf1).epsilon(1e-12));
    // tf=2, shared with the other document -> idf 1.0; ties break lexicographically.
    CHECK(top["what"][1].phrase == "is the name of");
    CHECK(top["what"][1].score == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(top["what"][2].phrase == "the name of the");
    CHECK(top["what"][2].score == doctest::Approx(2.0).epsilon(1e-12));

    REQUIRE(top["which"].size() == 3);
    // Six grams tie at idf1; lexicographic order decides.
    CHECK(top["which"][0].phrase == "brand is on the");
    CHECK(top["which"][1].phrase == "here is the name");
    CHECK(top["which"][2].phrase == "is on the bottle");
    for (const auto& p : top["which"]) CHECK(p.score == doctest::Approx(idf1).epsilon(1e-12));
}

TEST_CASE("tfidf with a single type reduces to raw term frequency order") {
    std::map<std::string, std::vector<std::string>> by_type = {
        {"what", {"what is on the red sign", "what is on the blue sign", "what is on the red sign"}},
    };
    auto top = analytics::tfidf_top_ngrams(by_type, 4, 10);
    REQUIRE_FALSE(top["what"].empty());
    CHECK(top["what"][0].phrase == "what is on the");
    CHECK(top["what"][0].score == doctest::Approx(3.0));  // idf = ln(2/2)+1 = 1
    // Descending by score throughout.
    for (std::size_t i = 1; i < top["what"].size(); ++i)
        CHECK(top["what"][i - 1].score >= top["what"][i].score);
}

TEST_CASE("n-grams never span question boundaries") {
    std::map<std::string, std::vector<std::string>> by_type = {
        {"what", {"what now", "is the sign red today"}},
    };
    auto top = analytics::tfidf_top_ngrams(by_type, 4, 10);
    // "what now" has fewer than 4 words: contributes nothing; no gram mixes
    // the two questions.
    REQUIRE(top["what"].size() == 2);
    CHECK(top["what"][0].phrase == "is the sign red");
    CHECK(top["what"][1].phrase == "the sign red today");
}

TEST_CASE("compute_stats is exact on a constructed 100-pair dataset") {
    const std::string path = temp_path("textvqa_stats_synth.jsonl");
    auto synth = testsupport::build_synthetic_dataset();
    {
        std::ofstream out(path, std::ios::trunc);
        for (const auto& line : synth.lines) out << line << "\n";
    }

    auto stats = analytics::compute_stats(path, 5);
    CHECK(stats.qa_count == synth.qa_count);
    CHECK(stats.unique_image_count == synth.unique_image_count);
    CHECK(stats.unique_question_count == synth.unique_question_count);
    CHECK(stats.unique_question_fraction == doctest::Approx(0.99));
    CHECK(stats.avg_questions_per_image == doctest::Approx(2.0));
    CHECK(stats.question_length_histogram == synth.question_length_histogram);
    CHECK(stats.answer_length_histogram == synth.answer_length_histogram);
    CHECK(stats.ocr_tokens_per_image_histogram == synth.ocr_tokens_per_image_histogram);
    CHECK(stats.median_question_length == synth.median_question_length);
    CHECK(stats.no_ocr_in_question_count == synth.no_ocr_in_question_count);
    CHECK(stats.no_ocr_in_question_fraction ==
          doctest::Approx(double(synth.no_ocr_in_question_count) / 100.0));
    CHECK(stats.w_type_counts == synth.w_type_counts);
    for (const auto& [type, phrases] : stats.top_phrases)
        CHECK(phrases.size() <= 5);

    // Permutation invariance: shuffling the lines changes nothing.
    const std::string shuffled_path = temp_path("textvqa_stats_shuffled.jsonl");
    std::mt19937 rng(7);
    std::shuffle(synth.lines.begin(), synth.lines.end(), rng);
    {
        std::ofstream out(shuffled_path, std::ios::trunc);
        for (const auto& line : synth.lines) out << line << "\n";
    }
    auto shuffled = analytics::compute_stats(shuffled_path, 5);
    CHECK(shuffled.to_json() == stats.to_json());
}

TEST_CASE("compute_stats reports the line number of a malformed record") {
    const std::string path = temp_path("textvqa_stats_bad.jsonl");
    {
        QaPair pair;
        pair.image_id = "im00";
        pair.source_uri = "file:///x.jpg";
        pair.question = "What is the first word here?";
        pair.answer = "word";
        pair.verdict = Verdict::Right;
        pair.provenance = {"s", "g", "c", "q", "v", "plain", kPipelineVersion};
        std::ofstream out(path, std::ios::trunc);
        out << to_dataset_record(pair).dump() << "\n";
        out << "{not json\n";
    }
    try {
        analytics::compute_stats(path);
        FAIL("expected failure");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("stats to_json names its conventions") {
    analytics::DatasetStats stats;
    json j = stats.to_json();
    CHECK(j.contains("tfidf_variant"));
    CHECK(j.contains("median_convention"));
}
