#include "hera/reordering.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace hera {

const char* strategy_name(ReorderStrategy s) {
    switch (s) {
        case ReorderStrategy::DocumentOrder: return "document_order";
        case ReorderStrategy::ChainOrder: return "chain_order";
        case ReorderStrategy::LlmOrder: return "llm_order";
    }
    return "unknown";
}

std::optional<ReorderStrategy> strategy_from_name(const std::string& name) {
    if (name == "document_order") return ReorderStrategy::DocumentOrder;
    if (name == "chain_order") return ReorderStrategy::ChainOrder;
    if (name == "llm_order") return ReorderStrategy::LlmOrder;
    return std::nullopt;
}

Ordering document_order(const std::vector<int>& member_indices) {
    Ordering o;
    o.strategy_name = "document_order";
    o.permutation.resize(member_indices.size());
    std::iota(o.permutation.begin(), o.permutation.end(), 0);
    std::sort(o.permutation.begin(), o.permutation.end(), [&](int a, int b) {
        return member_indices[static_cast<std::size_t>(a)] <
               member_indices[static_cast<std::size_t>(b)];
    });
    return o;
}

namespace {

// Fixed stopword list for the similarity measure.
const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",   "an",  "and", "are", "as",  "at",  "be", "but", "by",  "for",
        "from", "in", "is",  "it",  "its", "of",  "on", "or",  "that", "the",
        "this", "to", "was", "were", "with",
    };
    return words;
}

std::set<std::string> content_words(const std::string& sentence) {
    std::set<std::string> out;
    for (const std::string& t : word_tokens(sentence)) {
        if (!stopwords().count(t)) out.insert(t);
    }
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const std::string& w : a) inter += b.count(w);
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

Ordering chain_order(const std::vector<int>& member_indices,
                     const std::vector<std::string>& sentences) {
    const std::size_t m = member_indices.size();
    if (m != sentences.size()) throw Error("chain_order: member/sentence size mismatch");
    Ordering o;
    o.strategy_name = "chain_order";
    if (m == 0) return o;

    std::vector<std::set<std::string>> words(m);
    for (std::size_t i = 0; i < m; ++i) words[i] = content_words(sentences[i]);

    auto doc_less = [&](std::size_t a, std::size_t b) {
        return member_indices[a] < member_indices[b];
    };

    std::vector<bool> used(m, false);
    std::size_t start = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (doc_less(i, start)) start = i;
    }
    o.permutation.push_back(static_cast<int>(start));
    used[start] = true;
    std::size_t tail = start;
    for (std::size_t step = 1; step < m; ++step) {
        std::size_t best = m;
        double best_sim = -1.0;
        for (std::size_t cand = 0; cand < m; ++cand) {
            if (used[cand]) continue;
            double sim = jaccard(words[tail], words[cand]);
            if (sim > best_sim || (sim == best_sim && (best == m || doc_less(cand, best)))) {
                best_sim = sim;
                best = cand;
            }
        }
        o.permutation.push_back(static_cast<int>(best));
        used[best] = true;
        tail = best;
    }
    return o;
}

Ordering llm_order(const std::vector<int>& member_indices,
                   const std::vector<std::string>& sentences, BackendSession& session,
                   const TemplateSet& templates, const PromptParams& params) {
    if (member_indices.size() != sentences.size()) {
        throw Error("llm_order: member/sentence size mismatch");
    }
    PromptRequest req;
    req.template_id = TemplateId::OrderSentences;
    req.rendered_prompt = render(templates, TemplateId::OrderSentences, sentences);
    req.max_output_tokens = params.max_output_tokens;
    req.temperature = params.temperature;
    CompletionResult r = session.complete(req);
    ParsedRanking parsed = parse_ranking(r.text, static_cast<int>(sentences.size()));
    if (parsed.fallback) {
        session.note_fallback();
        Ordering o = document_order(member_indices);
        o.strategy_name = "llm_order";
        o.fallback_used = true;
        return o;
    }
    Ordering o;
    o.strategy_name = "llm_order";
    o.permutation.reserve(parsed.order.size());
    for (int number : parsed.order) o.permutation.push_back(number - 1);
    return o;
}

SegmentBag reorder_bag(const SegmentBag& bag, const std::vector<LocalSummary>& all_summaries,
                       ReorderStrategy strategy, BackendSession* session,
                       const TemplateSet& templates, const PromptParams& params,
                       Ordering* applied) {
    if (bag.phase != BagPhase::Ranked) throw Error("reorder_bag: bag is not in Ranked phase");
    std::vector<std::string> sentences;
    sentences.reserve(bag.members.size());
    for (int idx : bag.members) {
        sentences.push_back(all_summaries.at(static_cast<std::size_t>(idx)).sentence);
    }

    Ordering ordering;
    switch (strategy) {
        case ReorderStrategy::DocumentOrder:
            ordering = document_order(bag.members);
            break;
        case ReorderStrategy::ChainOrder:
            ordering = chain_order(bag.members, sentences);
            break;
        case ReorderStrategy::LlmOrder:
            if (!session) throw Error("llm_order requires a backend session");
            ordering = llm_order(bag.members, sentences, *session, templates, params);
            break;
    }

    SegmentBag out;
    out.event = bag.event;
    out.phase = BagPhase::Reordered;
    out.members.reserve(bag.members.size());
    for (int pos : ordering.permutation) {
        out.members.push_back(bag.members[static_cast<std::size_t>(pos)]);
    }
    if (applied) *applied = std::move(ordering);
    return out;
}

}  // namespace hera
