#include "hera/metrics.hpp"

#include "hera/util.hpp"

#include <algorithm>
#include <unordered_map>

namespace hera {

namespace {

bool ends_with(const std::string& s, const char* suffix) {
    std::size_t n = std::char_traits<char>::length(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

std::string stem_token(std::string t) {
    if (ends_with(t, "sses")) {
        t.resize(t.size() - 2);
    } else if (ends_with(t, "ies")) {
        t.resize(t.size() - 2);
    } else if (t.size() > 3 && ends_with(t, "s") && !ends_with(t, "ss")) {
        t.resize(t.size() - 1);
    }
    if (t.size() > 5 && ends_with(t, "ing")) {
        t.resize(t.size() - 3);
    } else if (t.size() > 4 && ends_with(t, "ed")) {
        t.resize(t.size() - 2);
    } else if (t.size() > 4 && ends_with(t, "ly")) {
        t.resize(t.size() - 2);
    }
    return t;
}

RougeScore from_counts(double overlap, double cand_count, double ref_count) {
    RougeScore s;
    if (cand_count > 0) s.precision = overlap / cand_count;
    if (ref_count > 0) s.recall = overlap / ref_count;
    if (s.precision + s.recall > 0) {
        s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
    return s;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n) {
    std::vector<std::string> grams;
    if (static_cast<int>(tokens.size()) < n) return grams;
    grams.reserve(tokens.size() - static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (int j = 1; j < n; ++j) {
            g += '\x1f';
            g += tokens[i + static_cast<std::size_t>(j)];
        }
        grams.push_back(std::move(g));
    }
    return grams;
}

}  // namespace

std::vector<std::string> rouge_tokenize(std::string_view text, bool stem) {
    std::vector<std::string> tokens = word_tokens(text);
    if (stem) {
        for (std::string& t : tokens) t = stem_token(std::move(t));
    }
    return tokens;
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n, bool stem) {
    auto cand = ngrams(rouge_tokenize(candidate, stem), n);
    auto ref = ngrams(rouge_tokenize(reference, stem), n);

    std::unordered_map<std::string, int> ref_counts;
    for (const std::string& g : ref) ++ref_counts[g];
    double overlap = 0;
    for (const std::string& g : cand) {
        auto it = ref_counts.find(g);
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return from_counts(overlap, static_cast<double>(cand.size()),
                       static_cast<double>(ref.size()));
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference, bool stem) {
    auto cand = rouge_tokenize(candidate, stem);
    auto ref = rouge_tokenize(reference, stem);
    if (cand.empty() || ref.empty()) return {};

    // Two-row LCS.
    std::vector<int> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
    for (std::size_t i = 1; i <= cand.size(); ++i) {
        for (std::size_t j = 1; j <= ref.size(); ++j) {
            cur[j] = (cand[i - 1] == ref[j - 1]) ? prev[j - 1] + 1
                                                 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    double lcs = prev[ref.size()];
    return from_counts(lcs, static_cast<double>(cand.size()),
                       static_cast<double>(ref.size()));
}

}  // namespace hera
