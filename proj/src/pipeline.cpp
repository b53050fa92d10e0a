#include "hera/pipeline.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>

namespace hera {

using nlohmann::json;

void PipelineConfig::validate() const {
    if (bag_size < 1) throw Error("config: k must be >= 1");
    if (n_events < 1) throw Error("config: n_events must be >= 1");
    if (chunk_size < 2) throw Error("config: chunk_size must be >= 2");
    if (min_words < 1) throw Error("config: min_words must be >= 1");
    if (concurrency < 1) throw Error("config: concurrency must be >= 1");
    if (max_output_tokens < 1) throw Error("config: max_output_tokens must be >= 1");
    if (temperature < 0.0 || temperature > 2.0) throw Error("config: temperature outside [0,2]");
    if (backend != "scripted" && backend != "http") {
        throw Error("config: unknown backend '" + backend + "'");
    }
}

void PipelineConfig::apply_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (!j.is_object()) throw Error("config: expected a JSON object");
    for (auto& [key, value] : j.items()) {
        if (key == "k" || key == "bag_size") bag_size = value.get<int>();
        else if (key == "n_events") n_events = value.get<int>();
        else if (key == "chunk_size") chunk_size = value.get<int>();
        else if (key == "min_words") min_words = value.get<int>();
        else if (key == "packaging") packaging_enabled = value.get<bool>();
        else if (key == "reorder.enabled") reorder_enabled = value.get<bool>();
        else if (key == "reorder.strategy") {
            auto s = strategy_from_name(value.get<std::string>());
            if (!s) throw Error("config: unknown reorder.strategy '" +
                                value.get<std::string>() + "'");
            reorder_strategy = *s;
        }
        else if (key == "backend") backend = value.get<std::string>();
        else if (key == "temperature") temperature = value.get<double>();
        else if (key == "max_output_tokens") max_output_tokens = value.get<int>();
        else if (key == "cache_dir") cache_dir = value.get<std::string>();
        else if (key == "concurrency") concurrency = value.get<int>();
        else if (key == "max_backend_calls") max_backend_calls = value.get<long>();
        else if (key == "max_summary_words") max_summary_words = value.get<int>();
        else if (key == "template_overrides") template_overrides = value.get<std::string>();
        else if (key == "http.base_url") http.base_url = value.get<std::string>();
        else if (key == "http.path") http.path = value.get<std::string>();
        else if (key == "http.model") http.model = value.get<std::string>();
        else if (key == "http.max_attempts") http.max_attempts = value.get<int>();
        else if (key == "http.backoff_ms") http.backoff_ms = value.get<int>();
        else throw Error("config: unknown key '" + key + "'");
    }
    validate();
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    PipelineConfig cfg;
    cfg.apply_json(read_file(path));
    return cfg;
}

std::string PipelineConfig::to_json() const {
    json j = {
        {"k", bag_size},
        {"n_events", n_events},
        {"chunk_size", chunk_size},
        {"min_words", min_words},
        {"packaging", packaging_enabled},
        {"reorder.enabled", reorder_enabled},
        {"reorder.strategy", strategy_name(reorder_strategy)},
        {"backend", backend},
        {"temperature", temperature},
        {"max_output_tokens", max_output_tokens},
        {"cache_dir", cache_dir},
        {"concurrency", concurrency},
        {"max_backend_calls", max_backend_calls},
        {"max_summary_words", max_summary_words},
    };
    if (backend == "http") {
        j["http.base_url"] = http.base_url;
        j["http.path"] = http.path;
        j["http.model"] = http.model;
    }
    return j.dump();
}

namespace {

json bag_to_json(const BagTrace& b) {
    return {
        {"event_index", b.event_index}, {"event", b.event_text},
        {"ranked", b.ranked},           {"reordered", b.reordered},
        {"strategy", b.strategy},       {"fallback_used", b.fallback_used},
    };
}

}  // namespace

std::string PipelineTrace::digest() const {
    std::ostringstream ss;
    ss << final_text << '\x1e';
    for (const auto& e : events) ss << e << '\x1f';
    ss << '\x1e';
    for (const auto& b : bags) ss << bag_to_json(b).dump() << '\x1f';
    ss << '\x1e' << parse_fallbacks << '\x1e';
    // Sorted multiset of (template, prompt hash): stable under completion
    // order and cache state.
    std::vector<std::pair<int, std::uint64_t>> keys;
    keys.reserve(calls.size());
    for (const auto& c : calls) {
        keys.emplace_back(static_cast<int>(c.template_id), c.prompt_hash);
    }
    std::sort(keys.begin(), keys.end());
    for (const auto& [t, h] : keys) ss << t << ':' << to_hex(h) << '\x1f';
    return to_hex(fnv1a(ss.str()));
}

std::string PipelineTrace::to_json() const {
    json calls_json = json::array();
    for (const auto& c : calls) {
        calls_json.push_back({{"template", template_name(c.template_id)},
                              {"prompt_hash", to_hex(c.prompt_hash)},
                              {"from_cache", c.from_cache},
                              {"latency_ms", c.latency_ms}});
    }
    json bags_json = json::array();
    for (const auto& b : bags) bags_json.push_back(bag_to_json(b));
    json j = {
        {"timings",
         {{"segment_ms", timings.segment_ms},
          {"local_summaries_ms", timings.local_summaries_ms},
          {"events_ms", timings.events_ms},
          {"retrieval_ms", timings.retrieval_ms},
          {"generation_ms", timings.generation_ms},
          {"total_ms", timings.total_ms}}},
        {"backend_calls", backend_calls},
        {"cache_hits", cache_hits},
        {"prompt_tokens", prompt_tokens},
        {"output_tokens", output_tokens},
        {"parse_fallbacks", parse_fallbacks},
        {"events", events},
        {"bags", bags_json},
        {"calls", calls_json},
        {"digest", digest()},
    };
    return j.dump();
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    config_.validate();
    if (!config_.template_overrides.empty()) {
        templates_.load_overrides(config_.template_overrides);
    }
    if (config_.backend == "http") {
        owned_backend_ = std::make_unique<HttpBackend>(config_.http);
    } else {
        owned_backend_ = std::make_unique<ScriptedBackend>();
    }
    backend_ = owned_backend_.get();
    if (config_.cache_dir.empty()) {
        owned_cache_ = std::make_unique<MemoryCache>();
    } else {
        owned_cache_ = std::make_unique<DiskCache>(config_.cache_dir);
    }
    cache_ = owned_cache_.get();
}

Pipeline::Pipeline(PipelineConfig config, Backend& backend, ResponseCache& cache)
    : config_(std::move(config)), backend_(&backend), cache_(&cache) {
    config_.validate();
    if (!config_.template_overrides.empty()) {
        templates_.load_overrides(config_.template_overrides);
    }
}

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

std::string truncate_words(const std::string& text, int max_words) {
    if (max_words <= 0) return text;
    int words = 0;
    bool in_word = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        bool alnum = std::isalnum(static_cast<unsigned char>(text[i])) != 0;
        if (alnum && !in_word) {
            ++words;
            if (words > max_words) return trim(text.substr(0, i));
        }
        in_word = alnum;
    }
    return text;
}

}  // namespace

PipelineResult Pipeline::run(const DocumentRecord& document) {
    auto t_start = clock::now();
    BackendSession session(*backend_, *cache_, config_.max_backend_calls);
    PromptParams params{config_.max_output_tokens, config_.temperature};

    PipelineResult result;
    PipelineTrace& trace = result.trace;

    auto t0 = clock::now();
    std::vector<Paragraph> paragraphs = segment(document.article, config_.min_words);
    trace.timings.segment_ms = ms_since(t0);

    if (!config_.packaging_enabled) {
        // Baseline: one whole-document summarization call.
        t0 = clock::now();
        PromptRequest req;
        req.template_id = TemplateId::BagSummary;
        req.rendered_prompt = render(templates_, TemplateId::BagSummary, {document.article});
        req.max_output_tokens = config_.max_output_tokens;
        req.temperature = config_.temperature;
        CompletionResult r = session.complete(req);
        trace.timings.generation_ms = ms_since(t0);
        result.summary.text = truncate_words(trim(r.text), config_.max_summary_words);
        result.summary.trace_ref = document.id;
    } else {
        t0 = clock::now();
        std::vector<LocalSummary> summaries =
            summarize_all(paragraphs, session, templates_, params, config_.concurrency);
        trace.timings.local_summaries_ms = ms_since(t0);

        t0 = clock::now();
        std::vector<Event> events = extract_events(summaries, session, templates_, params,
                                                   config_.n_events, config_.chunk_size);
        trace.timings.events_ms = ms_since(t0);
        for (const Event& e : events) trace.events.push_back(e.description);

        t0 = clock::now();
        std::vector<SegmentBag> bags(events.size());
        trace.bags.resize(events.size());
        BackendSession* llm = &session;
        parallel_for(events.size(), config_.concurrency, [&](std::size_t i) {
            std::vector<int> ranking =
                rank_for_event(events[i], summaries, session, templates_, params,
                               config_.chunk_size, config_.bag_size);
            SegmentBag ranked = build_bag(events[i], ranking, config_.bag_size);
            BagTrace& bt = trace.bags[i];
            bt.event_index = events[i].event_index;
            bt.event_text = events[i].description;
            bt.ranked = ranked.members;
            if (config_.reorder_enabled) {
                Ordering applied;
                bags[i] = reorder_bag(ranked, summaries, config_.reorder_strategy, llm,
                                      templates_, params, &applied);
                bt.strategy = applied.strategy_name;
                bt.fallback_used = applied.fallback_used;
            } else {
                // Ablation "w packaging": keep the ranked order.
                bags[i] = ranked;
                bags[i].phase = BagPhase::Reordered;
                bt.strategy = "none";
            }
            bt.reordered = bags[i].members;
        });
        trace.timings.retrieval_ms = ms_since(t0);

        t0 = clock::now();
        std::vector<EventSummary> event_summaries(bags.size());
        parallel_for(bags.size(), config_.concurrency, [&](std::size_t i) {
            event_summaries[i] = summarize_bag(bags[i], paragraphs, session, templates_, params);
        });
        FinalSummary final = aggregate(event_summaries, session, templates_, params);
        trace.timings.generation_ms = ms_since(t0);

        final.text = truncate_words(final.text, config_.max_summary_words);
        final.trace_ref = document.id;
        result.summary = std::move(final);
    }

    trace.backend_calls = session.backend_calls();
    trace.cache_hits = session.cache_hits();
    trace.prompt_tokens = session.prompt_tokens();
    trace.output_tokens = session.output_tokens();
    trace.parse_fallbacks = session.parse_fallbacks();
    trace.calls = session.records();
    trace.final_text = result.summary.text;
    trace.timings.total_ms = ms_since(t_start);
    return result;
}

std::vector<BatchItem> run_batch(const std::vector<DocumentRecord>& records, Pipeline& pipeline) {
    if (records.empty()) throw DatasetEmpty("(batch)");
    std::vector<BatchItem> out(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        out[i].id = records[i].id;
        try {
            PipelineResult r = pipeline.run(records[i]);
            out[i].ok = true;
            out[i].summary = std::move(r.summary);
            out[i].trace = std::move(r.trace);
        } catch (const std::exception& e) {
            out[i].ok = false;
            out[i].error = e.what();
        }
    }
    return out;
}

}  // namespace hera
