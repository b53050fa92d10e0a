#include "hera/backend.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

namespace hera {

ParsedPrompt parse_prompt(const std::string& rendered_prompt) {
    ParsedPrompt out;
    std::istringstream lines(rendered_prompt);
    std::string line;
    bool first = true;
    int next_item = 1;
    while (std::getline(lines, line)) {
        if (first) {
            out.instruction = line;
            first = false;
            continue;
        }
        if (out.items.empty() && out.event.empty() && line.rfind("Event: ", 0) == 0) {
            out.event = line.substr(7);
            continue;
        }
        // An item starts at a line "<next>. ..."; later lines belong to the
        // current item (paragraph texts may span lines).
        std::string marker = std::to_string(next_item) + ". ";
        if (line.rfind(marker, 0) == 0) {
            out.items.push_back(line.substr(marker.size()));
            ++next_item;
        } else if (!out.items.empty()) {
            out.items.back() += "\n" + line;
        }
    }
    return out;
}

namespace {

std::size_t overlap_with(const std::set<std::string>& event_tokens, const std::string& text) {
    std::size_t n = 0;
    std::set<std::string> seen;
    for (const std::string& t : word_tokens(text)) {
        if (event_tokens.count(t) && seen.insert(t).second) ++n;
    }
    return n;
}

}  // namespace

CompletionResult ScriptedBackend::complete(const PromptRequest& request) {
    ParsedPrompt p = parse_prompt(request.rendered_prompt);
    std::string text;
    switch (request.template_id) {
        case TemplateId::LocalSummary:
            if (!p.items.empty()) text = parse_sentence(p.items[0]);
            break;
        case TemplateId::RankParagraphs: {
            auto event_words = word_tokens(p.event);
            std::set<std::string> event_tokens(event_words.begin(), event_words.end());
            std::vector<std::size_t> order(p.items.size());
            std::vector<std::size_t> score(p.items.size());
            for (std::size_t i = 0; i < p.items.size(); ++i) {
                order[i] = i;
                score[i] = overlap_with(event_tokens, p.items[i]);
            }
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (score[a] != score[b]) return score[a] > score[b];
                return a < b;
            });
            for (std::size_t pos = 0; pos < order.size(); ++pos) {
                if (pos) text += "\n";
                text += std::to_string(pos + 1) + ". " + std::to_string(order[pos] + 1);
            }
            break;
        }
        case TemplateId::ExtractEvents:
            for (std::size_t i = 0; i < p.items.size(); ++i) {
                if (i) text += "\n";
                text += std::to_string(i + 1) + ". " + p.items[i];
            }
            break;
        case TemplateId::OrderSentences:
            for (std::size_t i = 0; i < p.items.size(); ++i) {
                if (i) text += ", ";
                text += std::to_string(i + 1);
            }
            break;
        case TemplateId::BagSummary:
            for (std::size_t i = 0; i < p.items.size(); ++i) {
                if (i) text += " ";
                text += parse_sentence(p.items[i]);
            }
            break;
        case TemplateId::Aggregate:
            for (std::size_t i = 0; i < p.items.size(); ++i) {
                if (i) text += " Furthermore, ";
                text += p.items[i];
            }
            break;
    }
    CompletionResult result;
    result.text = std::move(text);
    result.backend_name = name();
    return result;
}

std::uint64_t cache_key(const std::string& backend_name, const PromptRequest& request) {
    char params[64];
    std::snprintf(params, sizeof(params), "%d|%.6g", request.max_output_tokens,
                  request.temperature);
    std::uint64_t h = fnv1a(backend_name);
    h = fnv1a(std::string(1, '\x1f') + template_name(request.template_id), h);
    h = fnv1a(std::string(1, '\x1f'), h);
    h = fnv1a(request.rendered_prompt, h);
    h = fnv1a(std::string(1, '\x1f') + params, h);
    return h;
}

BackendSession::BackendSession(Backend& backend, ResponseCache& cache, long max_backend_calls)
    : backend_(backend), cache_(cache), max_calls_(max_backend_calls) {}

CompletionResult BackendSession::complete(const PromptRequest& request) {
    using clock = std::chrono::steady_clock;
    const std::uint64_t key = cache_key(backend_.name(), request);
    const std::uint64_t prompt_hash = fnv1a(request.rendered_prompt);

    auto t0 = clock::now();
    if (auto hit = cache_.get(key)) {
        CompletionResult result;
        result.text = std::move(*hit);
        result.backend_name = backend_.name();
        result.from_cache = true;
        result.latency_ms =
            std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        std::lock_guard<std::mutex> lock(mu_);
        ++hits_;
        records_.push_back({request.template_id, prompt_hash, true, result.latency_ms, 0, 0});
        return result;
    }

    {
        std::lock_guard<std::mutex> lock(mu_);
        if (max_calls_ > 0 && misses_ >= max_calls_) throw BudgetExceeded(max_calls_);
        ++misses_;
    }
    CompletionResult result = backend_.complete(request);
    result.latency_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    cache_.put(key, result.text);
    {
        std::lock_guard<std::mutex> lock(mu_);
        prompt_tokens_ += result.prompt_tokens;
        output_tokens_ += result.output_tokens;
        records_.push_back({request.template_id, prompt_hash, false, result.latency_ms,
                            result.prompt_tokens, result.output_tokens});
    }
    return result;
}

void BackendSession::note_fallback() {
    std::lock_guard<std::mutex> lock(mu_);
    ++fallbacks_;
}

long BackendSession::backend_calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return misses_;
}

long BackendSession::cache_hits() const {
    std::lock_guard<std::mutex> lock(mu_);
    return hits_;
}

long BackendSession::prompt_tokens() const {
    std::lock_guard<std::mutex> lock(mu_);
    return prompt_tokens_;
}

long BackendSession::output_tokens() const {
    std::lock_guard<std::mutex> lock(mu_);
    return output_tokens_;
}

int BackendSession::parse_fallbacks() const {
    std::lock_guard<std::mutex> lock(mu_);
    return fallbacks_;
}

std::vector<CallRecord> BackendSession::records() const {
    std::lock_guard<std::mutex> lock(mu_);
    return records_;
}

}  // namespace hera
