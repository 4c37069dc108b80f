#pragma once

#include <map>
#include <string>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::analytics {

struct ScoredPhrase {
    std::string phrase;
    double score = 0.0;
    bool operator==(const ScoredPhrase&) const = default;
};

struct DatasetStats {
    std::int64_t qa_count = 0;
    std::int64_t unique_image_count = 0;
    std::int64_t unique_question_count = 0;
    double unique_question_fraction = 0.0;
    double avg_questions_per_image = 0.0;
    std::map<std::int64_t, std::int64_t> question_length_histogram;
    std::map<std::int64_t, std::int64_t> answer_length_histogram;
    std::map<std::int64_t, std::int64_t> ocr_tokens_per_image_histogram;
    std::int64_t median_question_length = 0;  // lower median on even counts
    std::int64_t no_ocr_in_question_count = 0;
    double no_ocr_in_question_fraction = 0.0;
    std::map<std::string, std::int64_t> w_type_counts;  // what/which/who/how/when/why/other
    std::map<std::string, std::vector<ScoredPhrase>> top_phrases;

    json to_json() const;
};

// Lowercased first whitespace token with trailing punctuation stripped, mapped
// to one of the six W types, else "other".
std::string classify_w_type(const std::string& question);

// Whole-word match between any token and any question word, both lowercased
// and edge-punctuation-stripped.
bool question_contains_ocr(const std::string& question, const std::vector<std::string>& ocr_tokens);

// Per type: one document of word n-grams; tf = raw count, idf = ln((1+D)/(1+df)) + 1
// with D = number of type documents. Ranked by tf*idf descending, ties
// lexicographic; top k per type.
std::map<std::string, std::vector<ScoredPhrase>> tfidf_top_ngrams(
    const std::map<std::string, std::vector<std::string>>& questions_by_type, int n, int k);

// Streams a dataset file (one JSON record per line). Malformed records raise
// with the line number.
DatasetStats compute_stats(const std::string& dataset_path, int top_k = 10);

}  // namespace textvqa::analytics
