#pragma once

#include "hera/backend.hpp"
#include "hera/corpus.hpp"

#include <string>
#include <vector>

namespace hera {

/// One-sentence summary of a paragraph, used as its retrieval/ordering key.
struct LocalSummary {
    int paragraph_index = 0;
    std::string sentence;
};

/// A salient happening extracted from the local summaries; drives one
/// retrieval round.
struct Event {
    int event_index = 0;
    std::string description;
};

enum class BagPhase { Ranked, Reordered };

/// The ordered set of top-k paragraph indices retrieved for one event.
struct SegmentBag {
    Event event;
    std::vector<int> members;
    BagPhase phase = BagPhase::Ranked;
};

struct PromptParams {
    int max_output_tokens = 512;
    double temperature = 0.0;
};

// One LocalSummary backend call per paragraph, cache-mediated; results are
// assembled in paragraph order regardless of completion order.
std::vector<LocalSummary> summarize_all(const std::vector<Paragraph>& paragraphs,
                                        BackendSession& session, const TemplateSet& templates,
                                        const PromptParams& params, int concurrency);

// ExtractEvents over all summary sentences; when they exceed chunk_size,
// per-chunk extraction followed by one merge pass over the chunk winners.
// Descriptions are deduplicated case-folded. At most n_events returned.
std::vector<Event> extract_events(const std::vector<LocalSummary>& summaries,
                                  BackendSession& session, const TemplateSet& templates,
                                  const PromptParams& params, int n_events, int chunk_size);

// Full ranking of paragraph indices for one event. Up to chunk_size
// candidates rank in a single call; beyond that a tournament: rank each
// chunk, send every chunk's top k to a final round, and append the losers
// by (within-chunk rank, then document order). Always a permutation of all
// paragraph indices. Parse fallbacks are recorded on the session.
std::vector<int> rank_for_event(const Event& event, const std::vector<LocalSummary>& summaries,
                                BackendSession& session, const TemplateSet& templates,
                                const PromptParams& params, int chunk_size, int k);

// Top min(k, n) entries of the ranking, phase Ranked.
SegmentBag build_bag(const Event& event, const std::vector<int>& ranking, int k);

}  // namespace hera
