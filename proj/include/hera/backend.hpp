#pragma once

#include "hera/cache.hpp"
#include "hera/prompting.hpp"

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace hera {

struct PromptRequest {
    TemplateId template_id = TemplateId::LocalSummary;
    std::string rendered_prompt;
    int max_output_tokens = 512;
    double temperature = 0.0;
};

struct CompletionResult {
    std::string text;
    std::string backend_name;
    bool from_cache = false;
    double latency_ms = 0.0;
    long prompt_tokens = 0;   // 0 when the backend does not report usage
    long output_tokens = 0;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResult complete(const PromptRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// Deterministic rule-based backend; a pure function of the rendered prompt.
///
/// Rules per template:
///   LocalSummary   -> first sentence of item 1
///   RankParagraphs -> items sorted by descending word overlap with the
///                     event line, ties by ascending item number, emitted as
///                     a numbered list
///   ExtractEvents  -> every item echoed verbatim as a numbered list
///   OrderSentences -> identity order "1, 2, ..., m"
///   BagSummary     -> first sentence of each item, joined by a space
///   Aggregate      -> items joined with " Furthermore, "
class ScriptedBackend final : public Backend {
public:
    CompletionResult complete(const PromptRequest& request) override;
    std::string name() const override { return "scripted"; }
};

// Parses a rendered prompt back into its parts. Exposed for the scripted
// backend and HTTP stub tests.
struct ParsedPrompt {
    std::string instruction;
    std::string event;  // empty when absent
    std::vector<std::string> items;
};
ParsedPrompt parse_prompt(const std::string& rendered_prompt);

// Stable cache key over everything that can change a completion.
std::uint64_t cache_key(const std::string& backend_name, const PromptRequest& request);

struct CallRecord {
    TemplateId template_id;
    std::uint64_t prompt_hash;
    bool from_cache;
    double latency_ms;
    long prompt_tokens;
    long output_tokens;
};

/// Cache-mediated, call-counting front door to a backend. Safe for
/// concurrent use; one session per pipeline run.
class BackendSession {
public:
    BackendSession(Backend& backend, ResponseCache& cache, long max_backend_calls = 0);

    // Cache hit -> stored text, from_cache=true, zero backend calls.
    // Miss -> delegates and stores. Throws BudgetExceeded when a miss would
    // pass the call budget.
    CompletionResult complete(const PromptRequest& request);

    void note_fallback();

    long backend_calls() const;  // == cache misses
    long cache_hits() const;
    long prompt_tokens() const;
    long output_tokens() const;
    int parse_fallbacks() const;
    std::vector<CallRecord> records() const;

private:
    Backend& backend_;
    ResponseCache& cache_;
    const long max_calls_;
    mutable std::mutex mu_;
    long misses_ = 0;
    long hits_ = 0;
    long prompt_tokens_ = 0;
    long output_tokens_ = 0;
    int fallbacks_ = 0;
    std::vector<CallRecord> records_;
};

}  // namespace hera
