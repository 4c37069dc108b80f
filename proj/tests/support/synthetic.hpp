#pragma once

// 100-pair synthetic dataset with construction-side bookkeeping: every
// statistic the analytics module reports is tracked independently while the
// records are generated, so tests can demand exact equality.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::testsupport {

struct SyntheticDataset {
    std::vector<std::string> lines;  // one dataset record per line

    std::int64_t qa_count = 0;
    std::int64_t unique_image_count = 0;
    std::int64_t unique_question_count = 0;
    std::map<std::int64_t, std::int64_t> question_length_histogram;
    std::map<std::int64_t, std::int64_t> answer_length_histogram;
    std::map<std::int64_t, std::int64_t> ocr_tokens_per_image_histogram;
    std::int64_t median_question_length = 0;
    std::int64_t no_ocr_in_question_count = 0;
    std::map<std::string, std::int64_t> w_type_counts;
};

// 50 images x 2 pairs. Question lengths cycle 5..13; W-words cycle through
// six interrogatives plus one "other"; even-indexed pairs embed an OCR token.
// Exactly one question (im00's second) duplicates another.
inline SyntheticDataset build_synthetic_dataset() {
    SyntheticDataset d;
    const char* first_words[] = {"what", "which", "who", "how", "when", "why", "does"};

    std::vector<std::int64_t> q_lengths;
    std::string dup_question, dup_first_word;
    std::int64_t dup_len = 0;
    bool dup_contains = false;

    int j = 0;  // global pair index
    for (int i = 0; i < 50; ++i) {
        std::string image_id = "im" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        int n_tokens = (i % 4) + 1;
        d.ocr_tokens_per_image_histogram[n_tokens] += 1;
        std::vector<OcrToken> tokens;
        for (int t = 0; t < n_tokens; ++t)
            tokens.push_back(OcrToken{"tok" + std::to_string(i) + "x" + std::to_string(t),
                                      BoundingBox{0, 0, 10, 10}, 0.9});

        for (int p = 0; p < 2; ++p, ++j) {
            std::string question, first_word;
            std::int64_t q_len;
            bool contains;
            if (i == 0 && p == 1) {
                question = dup_question;
                first_word = dup_first_word;
                q_len = dup_len;
                contains = dup_contains;
            } else {
                q_len = 5 + (j % 9);
                first_word = first_words[j % 7];
                contains = (j % 2 == 0);
                question = first_word;
                if (contains) question += " " + tokens[0].text;
                while (std::count(question.begin(), question.end(), ' ') + 1 < q_len)
                    question += " filler" + std::to_string(j);
            }
            if (i == 0 && p == 0) {
                dup_question = question;
                dup_first_word = first_word;
                dup_len = q_len;
                dup_contains = contains;
            }
            d.question_length_histogram[q_len] += 1;
            q_lengths.push_back(q_len);
            d.w_type_counts[first_word == "does" ? "other" : first_word] += 1;
            if (!contains) ++d.no_ocr_in_question_count;

            std::int64_t a_len = (j % 3) + 1;
            d.answer_length_histogram[a_len] += 1;
            std::string answer = "ans";
            for (int w = 1; w < a_len; ++w) answer += " ans";

            QaPair pair;
            pair.image_id = image_id;
            pair.source_uri = "file:///synth/" + image_id + ".jpg";
            pair.question = question;
            pair.answer = answer;
            pair.verdict = Verdict::Right;
            pair.description = "a synthetic description";
            pair.ocr_tokens = tokens;
            pair.provenance = {"s", "g", "c", "q", "v", "plain", kPipelineVersion};
            d.lines.push_back(to_dataset_record(pair).dump());
        }
    }

    d.qa_count = 100;
    d.unique_image_count = 50;
    d.unique_question_count = 99;
    std::sort(q_lengths.begin(), q_lengths.end());
    d.median_question_length = q_lengths[(q_lengths.size() - 1) / 2];
    return d;
}

}  // namespace textvqa::testsupport
