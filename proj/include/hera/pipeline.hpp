#pragma once

#include "hera/backend.hpp"
#include "hera/corpus.hpp"
#include "hera/generation.hpp"
#include "hera/http_backend.hpp"
#include "hera/packaging.hpp"
#include "hera/reordering.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hera {

struct PipelineConfig {
    int bag_size = 5;       // k
    int n_events = 3;
    int chunk_size = 20;    // summary sentences per ranking/extraction prompt
    int min_words = 5;      // segmentation merge threshold
    bool packaging_enabled = true;
    bool reorder_enabled = true;
    ReorderStrategy reorder_strategy = ReorderStrategy::ChainOrder;
    std::string backend = "scripted";  // "scripted" | "http"
    double temperature = 0.0;
    int max_output_tokens = 512;
    std::string cache_dir;  // empty = in-memory, per-process
    int concurrency = 4;    // max in-flight backend calls
    long max_backend_calls = 0;  // 0 = unlimited
    int max_summary_words = 0;   // 0 = no truncation
    std::string template_overrides;  // path, optional
    HttpBackendConfig http;

    void validate() const;  // throws Error on out-of-range values

    // Flat dotted-key object, e.g. {"k": 5, "reorder.strategy": "chain_order"}.
    static PipelineConfig from_json_file(const std::string& path);
    void apply_json(const std::string& json_text);
    std::string to_json() const;
};

struct StageTimings {
    double segment_ms = 0;
    double local_summaries_ms = 0;
    double events_ms = 0;
    double retrieval_ms = 0;
    double generation_ms = 0;
    double total_ms = 0;
};

struct BagTrace {
    int event_index = 0;
    std::string event_text;
    std::vector<int> ranked;
    std::vector<int> reordered;
    std::string strategy;
    bool fallback_used = false;
};

struct PipelineTrace {
    StageTimings timings;
    long backend_calls = 0;  // == cache misses
    long cache_hits = 0;
    long prompt_tokens = 0;
    long output_tokens = 0;
    int parse_fallbacks = 0;
    std::vector<std::string> events;
    std::vector<BagTrace> bags;
    std::vector<CallRecord> calls;
    std::string final_text;

    // Structural digest: final text, events, bags, and the sorted call
    // multiset. Excludes timings and cache flags, so it is stable across
    // concurrency levels and warm/cold cache.
    std::string digest() const;
    std::string to_json() const;
};

struct PipelineResult {
    FinalSummary summary;
    PipelineTrace trace;
};

// Owns the backend + cache chain for one configuration.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);
    // Caller-provided backend/cache (tests, sweeps sharing a cache).
    Pipeline(PipelineConfig config, Backend& backend, ResponseCache& cache);

    const PipelineConfig& config() const { return config_; }

    // segment -> summarize_all -> extract_events -> per-event (rank ->
    // build_bag -> reorder -> summarize_bag) -> aggregate. With packaging
    // disabled: a single whole-document summarization call.
    PipelineResult run(const DocumentRecord& document);

private:
    PipelineConfig config_;
    TemplateSet templates_;
    std::unique_ptr<Backend> owned_backend_;
    std::unique_ptr<ResponseCache> owned_cache_;
    Backend* backend_ = nullptr;
    ResponseCache* cache_ = nullptr;
};

struct BatchItem {
    std::string id;
    bool ok = false;
    FinalSummary summary;  // valid when ok
    PipelineTrace trace;   // valid when ok
    std::string error;     // set when !ok
};

// Per-document failures are isolated; output order = input order.
std::vector<BatchItem> run_batch(const std::vector<DocumentRecord>& records, Pipeline& pipeline);

}  // namespace hera
