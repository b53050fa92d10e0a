#include "hera/generation.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <algorithm>
#include <numeric>

namespace hera {

EventSummary summarize_bag(const SegmentBag& bag, const std::vector<Paragraph>& paragraphs,
                           BackendSession& session, const TemplateSet& templates,
                           const PromptParams& params) {
    if (bag.phase != BagPhase::Reordered) throw Error("summarize_bag: bag is not reordered");
    if (bag.members.empty()) throw Error("summarize_bag: empty bag");

    std::vector<std::string> payload;
    payload.reserve(bag.members.size());
    for (int idx : bag.members) {
        payload.push_back(paragraphs.at(static_cast<std::size_t>(idx)).text);
    }
    PromptRequest req;
    req.template_id = TemplateId::BagSummary;
    req.rendered_prompt = render(templates, TemplateId::BagSummary, payload);
    req.max_output_tokens = params.max_output_tokens;
    req.temperature = params.temperature;
    CompletionResult r;
    try {
        r = session.complete(req);
    } catch (const Error& e) {
        throw Error("bag summary for event " + std::to_string(bag.event.event_index) + ": " +
                    e.what());
    }

    EventSummary out;
    out.event = bag.event;
    out.text = trim(r.text);
    out.source_members = bag.members;
    return out;
}

FinalSummary aggregate(const std::vector<EventSummary>& event_summaries,
                       BackendSession& session, const TemplateSet& templates,
                       const PromptParams& params) {
    if (event_summaries.empty()) throw Error("aggregate: no event summaries");

    std::vector<std::size_t> order(event_summaries.size());
    std::iota(order.begin(), order.end(), 0);
    auto min_source = [&](std::size_t i) {
        const auto& m = event_summaries[i].source_members;
        return *std::min_element(m.begin(), m.end());
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        int ma = min_source(a), mb = min_source(b);
        if (ma != mb) return ma < mb;
        return event_summaries[a].event.event_index < event_summaries[b].event.event_index;
    });

    FinalSummary out;
    for (std::size_t i : order) out.event_order.push_back(event_summaries[i].event.event_index);

    if (event_summaries.size() == 1) {
        out.text = event_summaries[0].text;
        return out;
    }

    std::vector<std::string> payload;
    payload.reserve(order.size());
    for (std::size_t i : order) payload.push_back(event_summaries[i].text);
    PromptRequest req;
    req.template_id = TemplateId::Aggregate;
    req.rendered_prompt = render(templates, TemplateId::Aggregate, payload);
    req.max_output_tokens = params.max_output_tokens;
    req.temperature = params.temperature;
    CompletionResult r = session.complete(req);
    out.text = trim(r.text);
    return out;
}

}  // namespace hera
