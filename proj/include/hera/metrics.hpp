#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hera {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Case-folds, splits on non-alphanumeric runs, drops empties. The optional
// stemmer is a light suffix stripper (sses/ies/s, ing, ed, ly), off by
// default.
std::vector<std::string> rouge_tokenize(std::string_view text, bool stem = false);

// Clipped n-gram overlap, n in {1,2}. Zero counts yield zero scores.
RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n,
                   bool stem = false);

// Whole-summary LCS over token sequences.
RougeScore rouge_l(std::string_view candidate, std::string_view reference,
                   bool stem = false);

}  // namespace hera
