#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::answers {

struct StopwordList {
    std::set<std::string> words;  // lowercase, no whitespace
    std::string source_tag;

    static StopwordList builtin();
    // One word per line; '#' comments and blank lines ignored.
    static StopwordList from_file(const std::string& path);

    bool contains(const std::string& word) const { return words.count(word) > 0; }
};

// Concatenate context captions with single spaces: crops in input order, the
// whole-image context last; empty captions contribute nothing.
ImageDescription aggregate_captions(const std::vector<CropContext>& contexts);

// Keep groups that are not substrings of a longer kept group, then drop groups
// whose words are all stopwords. Input is re-sorted by decreasing character
// length (ties lexicographic).
std::vector<std::string> remove_substrings(const std::vector<std::string>& groups,
                                           const StopwordList& stopwords);

// Maximal runs of description words matched by OCR tokens under the
// substring-and-ratio rule (len(token)/len(word) > 0.5), with substring and
// stopword pruning. One candidate per distinct text; earliest span wins.
// Output is ordered by span start.
std::vector<CandidateAnswer> extract_ocr_answers(const std::vector<std::string>& ocr_tokens,
                                                 const std::string& image_desc,
                                                 const StopwordList& stopwords);

// Drops candidates longer than max_words; identity when unset.
std::vector<CandidateAnswer> cap_answers(std::vector<CandidateAnswer> candidates,
                                         std::optional<int> max_words);

}  // namespace textvqa::answers
