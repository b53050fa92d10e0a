#include "hera/packaging.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <algorithm>
#include <set>

namespace hera {

std::vector<LocalSummary> summarize_all(const std::vector<Paragraph>& paragraphs,
                                        BackendSession& session, const TemplateSet& templates,
                                        const PromptParams& params, int concurrency) {
    if (paragraphs.empty()) throw Error("summarize_all: no paragraphs");
    std::vector<LocalSummary> out(paragraphs.size());
    parallel_for(paragraphs.size(), concurrency, [&](std::size_t i) {
        PromptRequest req;
        req.template_id = TemplateId::LocalSummary;
        req.rendered_prompt = render(templates, TemplateId::LocalSummary, {paragraphs[i].text});
        req.max_output_tokens = params.max_output_tokens;
        req.temperature = params.temperature;
        CompletionResult r;
        try {
            r = session.complete(req);
        } catch (const Error& e) {
            throw Error("local summary of paragraph " + std::to_string(paragraphs[i].index) +
                        ": " + e.what());
        }
        out[i].paragraph_index = paragraphs[i].index;
        out[i].sentence = parse_sentence(r.text);
    });
    return out;
}

namespace {

std::vector<std::string> extract_once(const std::vector<std::string>& sentences,
                                      BackendSession& session, const TemplateSet& templates,
                                      const PromptParams& params, int n_events) {
    PromptRequest req;
    req.template_id = TemplateId::ExtractEvents;
    req.rendered_prompt = render(templates, TemplateId::ExtractEvents, sentences);
    req.max_output_tokens = params.max_output_tokens;
    req.temperature = params.temperature;
    // One retry on an empty parse before giving up.
    for (int attempt = 0;; ++attempt) {
        CompletionResult r = session.complete(req);
        try {
            return parse_events(r.text, n_events);
        } catch (const NoEventsParsed&) {
            if (attempt >= 1) throw;
        }
    }
}

}  // namespace

std::vector<Event> extract_events(const std::vector<LocalSummary>& summaries,
                                  BackendSession& session, const TemplateSet& templates,
                                  const PromptParams& params, int n_events, int chunk_size) {
    if (summaries.empty()) throw Error("extract_events: no summaries");
    std::vector<std::string> sentences;
    sentences.reserve(summaries.size());
    for (const auto& s : summaries) sentences.push_back(s.sentence);

    std::vector<std::string> raw;
    if (static_cast<int>(sentences.size()) <= chunk_size) {
        raw = extract_once(sentences, session, templates, params, n_events);
    } else {
        std::vector<std::string> winners;
        for (std::size_t begin = 0; begin < sentences.size();
             begin += static_cast<std::size_t>(chunk_size)) {
            std::size_t end = std::min(sentences.size(), begin + static_cast<std::size_t>(chunk_size));
            std::vector<std::string> chunk(sentences.begin() + static_cast<std::ptrdiff_t>(begin),
                                           sentences.begin() + static_cast<std::ptrdiff_t>(end));
            auto part = extract_once(chunk, session, templates, params, n_events);
            winners.insert(winners.end(), part.begin(), part.end());
        }
        raw = extract_once(winners, session, templates, params, n_events);
    }

    std::vector<Event> events;
    std::set<std::string> seen;
    for (const std::string& desc : raw) {
        if (!seen.insert(lower(desc)).second) continue;
        events.push_back({static_cast<int>(events.size()), desc});
    }
    if (events.empty()) throw NoEventsParsed();
    return events;
}

namespace {

// Single RankParagraphs round over `candidates` (positions into summaries).
// Returns the candidate positions in ranked order.
std::vector<std::size_t> rank_round(const Event& event,
                                    const std::vector<LocalSummary>& summaries,
                                    const std::vector<std::size_t>& candidates,
                                    BackendSession& session, const TemplateSet& templates,
                                    const PromptParams& params) {
    std::vector<std::string> payload;
    payload.reserve(candidates.size());
    for (std::size_t c : candidates) payload.push_back(summaries[c].sentence);

    PromptRequest req;
    req.template_id = TemplateId::RankParagraphs;
    req.rendered_prompt =
        render(templates, TemplateId::RankParagraphs, payload, event.description);
    req.max_output_tokens = params.max_output_tokens;
    req.temperature = params.temperature;
    CompletionResult r = session.complete(req);
    ParsedRanking ranking = parse_ranking(r.text, static_cast<int>(candidates.size()));
    if (ranking.fallback) session.note_fallback();

    std::vector<std::size_t> out;
    out.reserve(candidates.size());
    for (int number : ranking.order) {
        out.push_back(candidates[static_cast<std::size_t>(number - 1)]);
    }
    return out;
}

}  // namespace

std::vector<int> rank_for_event(const Event& event, const std::vector<LocalSummary>& summaries,
                                BackendSession& session, const TemplateSet& templates,
                                const PromptParams& params, int chunk_size, int k) {
    const std::size_t n = summaries.size();
    if (n == 0) throw Error("rank_for_event: no summaries");
    if (n == 1) return {summaries[0].paragraph_index};

    auto to_indices = [&](const std::vector<std::size_t>& positions) {
        std::vector<int> out;
        out.reserve(positions.size());
        for (std::size_t p : positions) out.push_back(summaries[p].paragraph_index);
        return out;
    };

    if (static_cast<int>(n) <= chunk_size) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return to_indices(rank_round(event, summaries, all, session, templates, params));
    }

    // Tournament: rank within each chunk, final round over chunk winners,
    // losers appended by (within-chunk rank, document order).
    std::vector<std::size_t> finalists;
    struct Loser {
        std::size_t chunk_rank;
        std::size_t position;
    };
    std::vector<Loser> losers;
    for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(chunk_size)) {
        std::size_t end = std::min(n, begin + static_cast<std::size_t>(chunk_size));
        std::vector<std::size_t> chunk;
        for (std::size_t i = begin; i < end; ++i) chunk.push_back(i);
        std::vector<std::size_t> ranked = rank_round(event, summaries, chunk, session,
                                                     templates, params);
        for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
            if (pos < static_cast<std::size_t>(k)) {
                finalists.push_back(ranked[pos]);
            } else {
                losers.push_back({pos, ranked[pos]});
            }
        }
    }
    // Deterministic finalist presentation order: document order.
    std::sort(finalists.begin(), finalists.end());
    std::vector<std::size_t> head =
        rank_round(event, summaries, finalists, session, templates, params);

    std::stable_sort(losers.begin(), losers.end(), [](const Loser& a, const Loser& b) {
        if (a.chunk_rank != b.chunk_rank) return a.chunk_rank < b.chunk_rank;
        return a.position < b.position;
    });
    for (const Loser& l : losers) head.push_back(l.position);
    return to_indices(head);
}

SegmentBag build_bag(const Event& event, const std::vector<int>& ranking, int k) {
    if (k < 1) throw Error("build_bag: k must be >= 1");
    SegmentBag bag;
    bag.event = event;
    bag.phase = BagPhase::Ranked;
    std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(k), ranking.size());
    bag.members.assign(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(count));
    return bag;
}

}  // namespace hera
