#include "hera/commands.hpp"
#include "hera/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonFlags {
    std::string config_path;
    std::string dataset;
    std::optional<std::size_t> limit;
    std::optional<int> k;
    std::optional<int> n_events;
    std::optional<std::string> reorder;
    bool no_packaging = false;
    std::optional<std::string> backend;
    std::optional<std::string> cache_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Pipeline config file (JSON)");
    cmd->add_option("--dataset", flags.dataset, "Dataset path (JSONL, or plain text)")
        ->required();
    cmd->add_option("--limit", flags.limit, "Max documents to read");
    cmd->add_option("--k", flags.k, "Bag size (top-k paragraphs per event)");
    cmd->add_option("--n-events", flags.n_events, "Events to extract per document");
    cmd->add_option("--reorder", flags.reorder,
                    "Reordering strategy: document_order | chain_order | llm_order");
    cmd->add_flag("--no-packaging", flags.no_packaging,
                  "Baseline mode: one whole-document summarization call");
    cmd->add_option("--backend", flags.backend, "Backend: scripted | http");
    cmd->add_option("--cache-dir", flags.cache_dir, "Response cache directory");
}

hera::PipelineConfig build_config(const CommonFlags& flags) {
    hera::PipelineConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = hera::PipelineConfig::from_json_file(flags.config_path);
    }
    if (flags.k) cfg.bag_size = *flags.k;
    if (flags.n_events) cfg.n_events = *flags.n_events;
    if (flags.reorder) {
        auto s = hera::strategy_from_name(*flags.reorder);
        if (!s) throw hera::Error("unknown reorder strategy '" + *flags.reorder + "'");
        cfg.reorder_strategy = *s;
    }
    if (flags.no_packaging) cfg.packaging_enabled = false;
    if (flags.backend) cfg.backend = *flags.backend;
    if (flags.cache_dir) cfg.cache_dir = *flags.cache_dir;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HERA long-document summarization pipeline"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string out_path;
    std::string predictions_path;
    std::string external_scores;
    std::vector<int> k_values = {3, 4, 5, 6, 7, 8};
    std::string cache_dir;
    bool cache_clear = false;

    auto* summarize = app.add_subcommand("summarize", "Summarize documents");
    add_common(summarize, flags);
    summarize->add_option("--out", out_path, "Output records file (JSONL)")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against references");
    evaluate->add_option("--predictions", predictions_path, "Predictions file (JSONL)")
        ->required();
    evaluate->add_option("--dataset", flags.dataset, "Dataset with references (JSONL)")
        ->required();
    evaluate->add_option("--external-scores", external_scores,
                         "Side file of externally computed scores (JSONL)");
    evaluate->add_option("--out", out_path, "Report file (JSON)");

    auto* sweep = app.add_subcommand("sweep", "Run the bag-size sweep");
    add_common(sweep, flags);
    sweep->add_option("--k-values", k_values, "Bag sizes to sweep");

    auto* bench = app.add_subcommand("bench", "Time HERA vs baseline on the same documents");
    add_common(bench, flags);

    auto* cache = app.add_subcommand("cache", "Inspect the response cache");
    cache->add_option("--cache-dir", cache_dir, "Response cache directory")->required();
    cache->add_flag("--clear", cache_clear, "Remove all cached entries");

    CLI11_PARSE(app, argc, argv);

    try {
        if (summarize->parsed()) {
            hera::SummarizeOptions opts{flags.dataset, out_path, flags.limit};
            int failures = cmd_summarize(opts, build_config(flags), std::cout);
            return failures == 0 ? 0 : 1;
        }
        if (evaluate->parsed()) {
            hera::EvaluateOptions opts{predictions_path, flags.dataset, external_scores,
                                       out_path};
            hera::Report report = cmd_evaluate(opts, std::cout);
            std::cout << report.to_table();
            return 0;
        }
        if (sweep->parsed()) {
            cmd_sweep(flags.dataset, build_config(flags), k_values, flags.limit, std::cout);
            return 0;
        }
        if (bench->parsed()) {
            cmd_bench(flags.dataset, build_config(flags), flags.limit, std::cout);
            return 0;
        }
        if (cache->parsed()) {
            if (cache_clear) {
                hera::cmd_cache_clear(cache_dir);
                std::cout << "cache cleared\n";
            } else {
                hera::CacheStats stats = hera::cmd_cache_stats(cache_dir);
                std::cout << stats.entries << " entries, " << stats.bytes << " bytes\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
        return 2;
    }
    return 0;
}
