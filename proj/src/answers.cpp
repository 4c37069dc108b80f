#include "textvqa/answers.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "textvqa/text.hpp"

namespace textvqa::answers {

namespace {

// Standard English stopword list (the common ~179-word set).
const char* kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "don't", "should", "should've", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn",
    "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn",
    "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn",
    "wouldn't"};

bool all_words_are_stopwords(const std::string& group, const StopwordList& stopwords) {
    auto words = text::split_ws(group);
    if (words.empty()) return false;
    for (const std::string& w : words) {
        if (!stopwords.contains(text::strip_punct(w))) return false;
    }
    return true;
}

// Sort by decreasing character length; equal lengths lexicographic.
bool longer_first(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
}

}  // namespace

StopwordList StopwordList::builtin() {
    StopwordList list;
    for (const char* w : kStopwords) list.words.insert(w);
    list.source_tag = "builtin-en-v1";
    return list;
}

StopwordList StopwordList::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read stopword file: " + path);
    StopwordList list;
    std::string line;
    while (std::getline(in, line)) {
        std::string w = text::trim(line);
        if (w.empty() || w[0] == '#') continue;
        list.words.insert(text::to_lower(w));
    }
    list.source_tag = "file:" + path;
    return list;
}

ImageDescription aggregate_captions(const std::vector<CropContext>& contexts) {
    ImageDescription desc;
    std::size_t word_cursor = 0;
    for (const CropContext& ctx : contexts) {
        std::string caption = text::collapse_ws(ctx.caption);
        if (caption.empty()) continue;
        std::size_t n_words = text::count_ws_tokens(caption);
        if (!desc.text.empty()) desc.text += " ";
        desc.text += caption;
        desc.segment_spans.push_back(SegmentSpan{ctx.region, word_cursor, word_cursor + n_words});
        word_cursor += n_words;
    }
    return desc;
}

std::vector<std::string> remove_substrings(const std::vector<std::string>& groups,
                                           const StopwordList& stopwords) {
    std::vector<std::string> sorted = groups;
    std::sort(sorted.begin(), sorted.end(), longer_first);

    std::vector<std::string> kept;
    for (const std::string& g : sorted) {
        bool contained = false;
        for (const std::string& k : kept) {
            if (k.find(g) != std::string::npos) { contained = true; break; }
        }
        if (!contained) kept.push_back(g);
    }

    std::vector<std::string> out;
    for (const std::string& g : kept) {
        if (!all_words_are_stopwords(g, stopwords)) out.push_back(g);
    }
    return out;
}

std::vector<CandidateAnswer> extract_ocr_answers(const std::vector<std::string>& ocr_tokens,
                                                 const std::string& image_desc,
                                                 const StopwordList& stopwords) {
    const std::string desc_lower = text::to_lower(image_desc);

    // Keep tokens that occur anywhere in the lowered description.
    std::vector<std::string> tokens_lower;
    for (const std::string& t : ocr_tokens) {
        std::string lt = text::to_lower(t);
        if (!lt.empty() && desc_lower.find(lt) != std::string::npos) tokens_lower.push_back(lt);
    }

    const std::vector<std::string> words = text::split_ws(desc_lower);
    std::vector<bool> flagged(words.size(), false);
    for (const std::string& token : tokens_lower) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (words[i].find(token) != std::string::npos &&
                static_cast<double>(token.size()) / static_cast<double>(words[i].size()) > 0.5) {
                flagged[i] = true;
            }
        }
    }

    // Maximal runs of flagged words.
    struct Group {
        std::string raw;
        std::size_t start, end;
    };
    std::vector<Group> groups;
    std::size_t i = 0;
    while (i < words.size()) {
        if (!flagged[i]) { ++i; continue; }
        std::size_t start = i;
        std::string raw;
        while (i < words.size() && flagged[i]) {
            if (!raw.empty()) raw += " ";
            raw += words[i];
            ++i;
        }
        groups.push_back(Group{std::move(raw), start, i});
    }

    // Same pruning order as remove_substrings, retaining spans. Equal texts
    // are ordered by span start so the earliest occurrence survives.
    std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        if (a.raw.size() != b.raw.size()) return a.raw.size() > b.raw.size();
        if (a.raw != b.raw) return a.raw < b.raw;
        return a.start < b.start;
    });

    std::vector<Group> kept;
    for (const Group& g : groups) {
        bool contained = false;
        for (const Group& k : kept) {
            if (k.raw.find(g.raw) != std::string::npos) { contained = true; break; }
        }
        if (!contained) kept.push_back(g);
    }

    std::vector<CandidateAnswer> out;
    for (const Group& g : kept) {
        if (all_words_are_stopwords(g.raw, stopwords)) continue;
        // Emitted text strips leading/trailing punctuation per word; the raw
        // span text is retained for provenance.
        std::string cleaned;
        for (const std::string& w : text::split_ws(g.raw)) {
            std::string sw = text::strip_punct(w);
            if (sw.empty()) continue;
            if (!cleaned.empty()) cleaned += " ";
            cleaned += sw;
        }
        if (cleaned.empty()) continue;
        bool dup = false;
        for (const CandidateAnswer& c : out) {
            if (c.text == cleaned) { dup = true; break; }
        }
        if (dup) continue;
        CandidateAnswer cand;
        cand.text = std::move(cleaned);
        cand.span_start = g.start;
        cand.span_end = g.end;
        cand.raw_text = g.raw;
        out.push_back(std::move(cand));
    }

    std::sort(out.begin(), out.end(), [](const CandidateAnswer& a, const CandidateAnswer& b) {
        return a.span_start < b.span_start;
    });
    return out;
}

std::vector<CandidateAnswer> cap_answers(std::vector<CandidateAnswer> candidates,
                                         std::optional<int> max_words) {
    if (!max_words) return candidates;
    std::vector<CandidateAnswer> out;
    for (CandidateAnswer& c : candidates) {
        if (c.word_count() <= static_cast<std::size_t>(*max_words)) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace textvqa::answers
