#pragma once

#include "hera/backend.hpp"
#include "hera/corpus.hpp"
#include "hera/packaging.hpp"

#include <string>
#include <vector>

namespace hera {

struct EventSummary {
    Event event;
    std::string text;
    std::vector<int> source_members;  // reordered order, as fed to the model
};

struct FinalSummary {
    std::string text;
    std::vector<int> event_order;  // event indices in aggregation order
    std::string trace_ref;
};

// BagSummary over the full paragraph texts (not the one-sentence keys) in
// reordered order; one backend call.
EventSummary summarize_bag(const SegmentBag& bag, const std::vector<Paragraph>& paragraphs,
                           BackendSession& session, const TemplateSet& templates,
                           const PromptParams& params);

// Event summaries arranged by ascending minimum source paragraph index
// (narrative position; ties by event index), then one Aggregate call. A
// single summary is returned verbatim with zero aggregation calls.
FinalSummary aggregate(const std::vector<EventSummary>& event_summaries,
                       BackendSession& session, const TemplateSet& templates,
                       const PromptParams& params);

}  // namespace hera
