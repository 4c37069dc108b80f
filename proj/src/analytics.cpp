#include "textvqa/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "textvqa/text.hpp"

namespace textvqa::analytics {

namespace {

const std::vector<std::string> kWTypes = {"what", "which", "who", "how", "when", "why"};

std::vector<std::string> clean_words(const std::string& s) {
    std::vector<std::string> out;
    for (const std::string& w : text::split_ws(text::to_lower(s))) {
        std::string c = text::strip_punct(w);
        if (!c.empty()) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

std::string classify_w_type(const std::string& question) {
    auto words = text::split_ws(question);
    if (words.empty()) return "other";
    std::string first = text::to_lower(words.front());
    while (!first.empty() && !std::isalnum(static_cast<unsigned char>(first.back())))
        first.pop_back();
    for (const std::string& t : kWTypes)
        if (first == t) return t;
    return "other";
}

bool question_contains_ocr(const std::string& question,
                           const std::vector<std::string>& ocr_tokens) {
    auto qwords = clean_words(question);
    std::set<std::string> qset(qwords.begin(), qwords.end());
    for (const std::string& token : ocr_tokens) {
        std::string t = text::strip_punct(text::to_lower(token));
        if (!t.empty() && qset.count(t)) return true;
    }
    return false;
}

std::map<std::string, std::vector<ScoredPhrase>> tfidf_top_ngrams(
    const std::map<std::string, std::vector<std::string>>& questions_by_type, int n, int k) {
    // tf per type-document; n-grams do not span question boundaries.
    std::map<std::string, std::map<std::string, std::int64_t>> tf;
    for (const auto& [type, questions] : questions_by_type) {
        auto& doc = tf[type];
        for (const std::string& q : questions) {
            auto words = clean_words(q);
            if (static_cast<int>(words.size()) < n) continue;
            for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= words.size(); ++i) {
                std::string gram = words[i];
                for (int j = 1; j < n; ++j) gram += " " + words[i + j];
                doc[gram] += 1;
            }
        }
    }

    std::map<std::string, std::int64_t> df;
    for (const auto& [type, doc] : tf)
        for (const auto& [gram, count] : doc) df[gram] += 1;
    const double D = static_cast<double>(tf.size());

    std::map<std::string, std::vector<ScoredPhrase>> out;
    for (const auto& [type, doc] : tf) {
        std::vector<ScoredPhrase> scored;
        for (const auto& [gram, count] : doc) {
            double idf = std::log((1.0 + D) / (1.0 + static_cast<double>(df[gram]))) + 1.0;
            scored.push_back(ScoredPhrase{gram, static_cast<double>(count) * idf});
        }
        std::sort(scored.begin(), scored.end(), [](const ScoredPhrase& a, const ScoredPhrase& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.phrase < b.phrase;
        });
        if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));
        out[type] = std::move(scored);
    }
    return out;
}

DatasetStats compute_stats(const std::string& dataset_path, int top_k) {
    std::ifstream in(dataset_path);
    if (!in) throw std::runtime_error("cannot open dataset: " + dataset_path);

    DatasetStats stats;
    std::set<std::string> images;
    std::set<std::string> unique_questions;
    std::map<std::string, std::int64_t> tokens_per_image;
    std::map<std::string, std::vector<std::string>> questions_by_type;
    std::vector<std::int64_t> question_lengths;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("malformed dataset record at line " + std::to_string(line_no));
        QaPair pair;
        try {
            pair = qa_pair_from_dataset_record(j);
        } catch (const std::exception& e) {
            throw std::runtime_error("malformed dataset record at line " + std::to_string(line_no) +
                                     ": " + e.what());
        }

        stats.qa_count += 1;
        images.insert(pair.image_id);
        unique_questions.insert(pair.question);

        auto q_len = static_cast<std::int64_t>(text::count_ws_tokens(pair.question));
        auto a_len = static_cast<std::int64_t>(text::count_ws_tokens(pair.answer));
        stats.question_length_histogram[q_len] += 1;
        stats.answer_length_histogram[a_len] += 1;
        question_lengths.push_back(q_len);

        tokens_per_image[pair.image_id] = static_cast<std::int64_t>(pair.ocr_tokens.size());

        std::vector<std::string> token_texts;
        for (const OcrToken& t : pair.ocr_tokens) token_texts.push_back(t.text);
        if (!question_contains_ocr(pair.question, token_texts)) stats.no_ocr_in_question_count += 1;

        std::string w = classify_w_type(pair.question);
        stats.w_type_counts[w] += 1;
        questions_by_type[w].push_back(pair.question);
    }

    stats.unique_image_count = static_cast<std::int64_t>(images.size());
    stats.unique_question_count = static_cast<std::int64_t>(unique_questions.size());
    if (stats.qa_count > 0) {
        stats.unique_question_fraction =
            static_cast<double>(stats.unique_question_count) / static_cast<double>(stats.qa_count);
        stats.no_ocr_in_question_fraction =
            static_cast<double>(stats.no_ocr_in_question_count) / static_cast<double>(stats.qa_count);
    }
    if (stats.unique_image_count > 0)
        stats.avg_questions_per_image =
            static_cast<double>(stats.qa_count) / static_cast<double>(stats.unique_image_count);

    for (const auto& [image_id, count] : tokens_per_image)
        stats.ocr_tokens_per_image_histogram[count] += 1;

    if (!question_lengths.empty()) {
        std::sort(question_lengths.begin(), question_lengths.end());
        stats.median_question_length = question_lengths[(question_lengths.size() - 1) / 2];
    }

    stats.top_phrases = tfidf_top_ngrams(questions_by_type, 4, top_k);
    return stats;
}

json DatasetStats::to_json() const {
    auto hist_to_json = [](const std::map<std::int64_t, std::int64_t>& h) {
        json j = json::object();
        for (const auto& [k, v] : h) j[std::to_string(k)] = v;
        return j;
    };
    json phrases = json::object();
    for (const auto& [type, list] : top_phrases) {
        json arr = json::array();
        for (const ScoredPhrase& p : list) arr.push_back(json{{"phrase", p.phrase}, {"score", p.score}});
        phrases[type] = arr;
    }
    return json{{"qa_count", qa_count},
                {"unique_image_count", unique_image_count},
                {"unique_question_count", unique_question_count},
                {"unique_question_fraction", unique_question_fraction},
                {"avg_questions_per_image", avg_questions_per_image},
                {"question_length_histogram", hist_to_json(question_length_histogram)},
                {"answer_length_histogram", hist_to_json(answer_length_histogram)},
                {"ocr_tokens_per_image_histogram", hist_to_json(ocr_tokens_per_image_histogram)},
                {"median_question_length", median_question_length},
                {"no_ocr_in_question_count", no_ocr_in_question_count},
                {"no_ocr_in_question_fraction", no_ocr_in_question_fraction},
                {"w_type_counts", w_type_counts},
                {"top_phrases", phrases},
                {"tfidf_variant", "tf * (ln((1+D)/(1+df)) + 1)"},
                {"median_convention", "lower"}};
}

}  // namespace textvqa::analytics
