#pragma once

#include "hera/backend.hpp"
#include "hera/packaging.hpp"

#include <string>
#include <vector>

namespace hera {

enum class ReorderStrategy { DocumentOrder, ChainOrder, LlmOrder };

const char* strategy_name(ReorderStrategy s);
std::optional<ReorderStrategy> strategy_from_name(const std::string& name);

/// Permutation over bag positions: permutation[out_pos] = in_pos.
struct Ordering {
    std::vector<int> permutation;
    std::string strategy_name;
    bool fallback_used = false;
};

// Ascending paragraph index.
Ordering document_order(const std::vector<int>& member_indices);

// Greedy coherence chain over the members' summary sentences: start at the
// smallest paragraph index, then repeatedly append the unvisited sentence
// with maximal Jaccard word-set similarity (stopwords removed) to the
// current tail; ties by ascending paragraph index.
Ordering chain_order(const std::vector<int>& member_indices,
                     const std::vector<std::string>& sentences);

// OrderSentences prompt over the numbered sentences; parse_ranking gives
// the permutation, falling back to document order when nothing parses.
Ordering llm_order(const std::vector<int>& member_indices,
                   const std::vector<std::string>& sentences, BackendSession& session,
                   const TemplateSet& templates, const PromptParams& params);

// Applies the strategy to the bag's members via their summary sentences.
// Member multiset is preserved; phase becomes Reordered. `all_summaries` is
// indexed by paragraph index. Returns the applied ordering through `applied`
// when non-null.
SegmentBag reorder_bag(const SegmentBag& bag, const std::vector<LocalSummary>& all_summaries,
                       ReorderStrategy strategy, BackendSession* session,
                       const TemplateSet& templates, const PromptParams& params,
                       Ordering* applied = nullptr);

}  // namespace hera
