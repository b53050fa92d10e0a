// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Self-contained oracles; no doctest.

#include "hera/commands.hpp"
#include "hera/metrics.hpp"
#include "hera/pipeline.hpp"
#include "hera/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

using namespace hera;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << "criterion " << number << " [" << name << "]: " << (ok ? "PASS" : "FAIL");
    if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// Independent ROUGE oracle. Deliberately separate from the library path:
// its own tokenizer, map-of-vector n-gram counting, full-table LCS.

std::vector<std::string> oracle_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if ((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9')) {
            cur += ch;
        } else if (ch >= 'A' && ch <= 'Z') {
            cur += static_cast<char>(ch - 'A' + 'a');
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double oracle_f1(double overlap, double cand, double ref) {
    double p = cand > 0 ? overlap / cand : 0.0;
    double r = ref > 0 ? overlap / ref : 0.0;
    return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
}

double oracle_rouge_n(const std::string& c, const std::string& r, int n) {
    auto ct = oracle_tokens(c), rt = oracle_tokens(r);
    std::map<std::vector<std::string>, int> ref_grams;
    for (int i = 0; i + n <= static_cast<int>(rt.size()); ++i) {
        ++ref_grams[std::vector<std::string>(rt.begin() + i, rt.begin() + i + n)];
    }
    double overlap = 0;
    double cand_count = 0;
    for (int i = 0; i + n <= static_cast<int>(ct.size()); ++i) {
        ++cand_count;
        std::vector<std::string> g(ct.begin() + i, ct.begin() + i + n);
        auto it = ref_grams.find(g);
        if (it != ref_grams.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    double ref_count = rt.size() >= static_cast<std::size_t>(n)
                           ? static_cast<double>(rt.size()) - n + 1
                           : 0.0;
    return oracle_f1(overlap, cand_count, ref_count);
}

double oracle_rouge_l(const std::string& c, const std::string& r) {
    auto ct = oracle_tokens(c), rt = oracle_tokens(r);
    std::vector<std::vector<int>> dp(ct.size() + 1, std::vector<int>(rt.size() + 1, 0));
    for (std::size_t i = 1; i <= ct.size(); ++i) {
        for (std::size_t j = 1; j <= rt.size(); ++j) {
            dp[i][j] = ct[i - 1] == rt[j - 1] ? dp[i - 1][j - 1] + 1
                                              : std::max(dp[i - 1][j], dp[i][j - 1]);
        }
    }
    double lcs = ct.empty() || rt.empty() ? 0.0 : dp[ct.size()][rt.size()];
    return oracle_f1(lcs, static_cast<double>(ct.size()), static_cast<double>(rt.size()));
}

std::string random_text(std::mt19937& rng, int max_words) {
    static const char* vocab[] = {"alpha", "beta",  "gamma", "delta", "omega", "cat",
                                  "dog",   "house", "tree",  "2",     "0",     "win",
                                  "game",  "city",  "score", "final"};
    std::uniform_int_distribution<int> len(0, max_words);
    std::uniform_int_distribution<int> pick(0, 15);
    std::string s;
    int l = len(rng);
    for (int i = 0; i < l; ++i) {
        if (i) s += " ";
        s += vocab[pick(rng)];
    }
    return s;
}

void criterion_rouge_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    auto check = [&](double got, double want, const std::string& what) {
        if (std::abs(got - want) > 1e-6) {
            ok = false;
            if (detail.empty()) {
                detail = what + ": got " + std::to_string(got) + ", want " +
                         std::to_string(want);
            }
        }
    };

    // Derived fixtures.
    const std::string cand = "the cat sat on the mat", ref = "the cat was on the mat";
    check(rouge_n(cand, ref, 1).f1, 5.0 / 6.0, "unigram fixture");
    check(rouge_n(cand, ref, 2).f1, 3.0 / 5.0, "bigram fixture");
    check(rouge_l(cand, ref).f1, 5.0 / 6.0, "lcs fixture");

    std::mt19937 rng(20240601);
    for (int i = 0; i < 200 && ok; ++i) {
        std::string a = random_text(rng, 30), b = random_text(rng, 30);
        check(rouge_n(a, b, 1).f1, oracle_rouge_n(a, b, 1), "random R-1 pair " + std::to_string(i));
        check(rouge_n(a, b, 2).f1, oracle_rouge_n(a, b, 2), "random R-2 pair " + std::to_string(i));
        check(rouge_l(a, b).f1, oracle_rouge_l(a, b), "random R-L pair " + std::to_string(i));
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 10.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + "s";
    }
    report(1, "rouge oracle equivalence", ok, detail);
}

// ---------------------------------------------------------------------------

std::string random_raw_document(std::mt19937& rng) {
    static const char* words[] = {"alpha", "beta", "gamma", "delta", "omega",
                                  "kappa", "sigma", "tau",   "phi",  "zeta"};
    std::uniform_int_distribution<int> n_blocks(1, 10);
    std::uniform_int_distribution<int> n_words(1, 15);
    std::uniform_int_distribution<int> word(0, 9);
    std::uniform_int_distribution<int> sep(0, 4);
    std::string doc;
    int blocks = n_blocks(rng);
    for (int b = 0; b < blocks; ++b) {
        int w = n_words(rng);
        for (int i = 0; i < w; ++i) {
            doc += words[word(rng)];
            doc += " ";
        }
        switch (sep(rng)) {
            case 0: doc += "\n"; break;
            case 1: doc += "\n\n"; break;
            case 2: doc += "\r\n\r\n"; break;
            case 3: doc += "\n\n\n\n"; break;
            default: doc += "  \n\n"; break;
        }
    }
    return doc;
}

void criterion_segmentation() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    std::mt19937 rng(77);
    for (int i = 0; i < 1000 && ok; ++i) {
        std::string article = normalize(random_raw_document(rng));
        if (article.empty()) continue;
        std::vector<Paragraph> ps;
        try {
            ps = segment(article, 1 + i % 6);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("segment threw: ") + e.what();
            break;
        }
        std::string joined;
        for (std::size_t p = 0; p < ps.size(); ++p) {
            if (p) joined += "\n\n";
            joined += ps[p].text;
        }
        if (joined != article) {
            ok = false;
            detail = "reconstruction mismatch at doc " + std::to_string(i);
        }
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + "s";
    }
    report(2, "segmentation reconstruction", ok, detail);
}

// ---------------------------------------------------------------------------

bool is_identity_permutation(std::vector<int> xs, int base) {
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] != static_cast<int>(i) + base) return false;
    }
    return true;
}

std::vector<LocalSummary> indexed_summaries(const std::vector<std::string>& sentences) {
    std::vector<LocalSummary> out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        out.push_back({static_cast<int>(i), sentences[i]});
    }
    return out;
}

void criterion_permutations() {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(301);

    // parse_ranking fuzz.
    const std::string charset = "0123456789 ,.)(:-\nabc";
    std::uniform_int_distribution<int> len(0, 80);
    std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
    std::uniform_int_distribution<int> n_dist(1, 12);
    for (int i = 0; i < 5000 && ok; ++i) {
        int n = n_dist(rng);
        std::string s;
        int l = len(rng);
        for (int j = 0; j < l; ++j) s += charset[pick(rng)];
        auto r = parse_ranking(s, n);
        if (static_cast<int>(r.order.size()) != n || !is_identity_permutation(r.order, 1)) {
            ok = false;
            detail = "parse_ranking violation on n=" + std::to_string(n);
        }
    }

    // rank_for_event, n <= 8 exhaustive against the bijection validator.
    static const char* words[] = {"red", "blue", "green", "big", "small", "old"};
    std::uniform_int_distribution<int> w(0, 5);
    TemplateSet templates;
    for (int n = 1; n <= 8 && ok; ++n) {
        for (int trial = 0; trial < 30 && ok; ++trial) {
            ScriptedBackend backend;
            MemoryCache cache;
            BackendSession session(backend, cache);
            std::vector<std::string> sentences;
            for (int i = 0; i < n; ++i) {
                sentences.push_back(std::string(words[w(rng)]) + " " + words[w(rng)]);
            }
            auto summaries = indexed_summaries(sentences);
            Event event{0, words[w(rng)]};
            for (int chunk : {2, 4, 20}) {
                auto ranking = rank_for_event(event, summaries, session, templates,
                                              PromptParams{}, chunk, 3);
                if (static_cast<int>(ranking.size()) != n ||
                    !is_identity_permutation(ranking, 0)) {
                    ok = false;
                    detail = "rank_for_event violation n=" + std::to_string(n) +
                             " chunk=" + std::to_string(chunk);
                }
            }
        }
    }

    // reorder_bag multiset preservation over random bags.
    std::vector<LocalSummary> summaries;
    for (int i = 0; i < 24; ++i) {
        summaries.push_back({i, "key" + std::to_string(i % 5) + " tail."});
    }
    ScriptedBackend backend;
    MemoryCache cache;
    BackendSession session(backend, cache);
    for (int trial = 0; trial < 300 && ok; ++trial) {
        std::vector<int> pool(24);
        for (int i = 0; i < 24; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::uniform_int_distribution<int> m_dist(1, 8);
        SegmentBag bag;
        bag.event = {0, "key2"};
        bag.members.assign(pool.begin(), pool.begin() + m_dist(rng));
        for (auto strategy : {ReorderStrategy::DocumentOrder, ReorderStrategy::ChainOrder,
                              ReorderStrategy::LlmOrder}) {
            auto out = reorder_bag(bag, summaries, strategy, &session, templates,
                                   PromptParams{});
            auto a = bag.members, b = out.members;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) {
                ok = false;
                detail = std::string("reorder_bag multiset violation, strategy ") +
                         strategy_name(strategy);
            }
        }
    }
    report(3, "permutation suite", ok, detail);
}

// ---------------------------------------------------------------------------

void criterion_chunk_merge() {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(555);
    static const char* words[] = {"sun", "moon", "star", "rock", "tree", "wind", "rain"};
    std::uniform_int_distribution<int> w(0, 6);
    TemplateSet templates;
    for (int n = 1; n <= 30 && ok; ++n) {
        std::vector<std::string> sentences;
        for (int i = 0; i < n; ++i) {
            sentences.push_back(std::string(words[w(rng)]) + " " + words[w(rng)] + " " +
                                words[w(rng)]);
        }
        auto summaries = indexed_summaries(sentences);
        Event event{0, std::string(words[w(rng)]) + " " + words[w(rng)]};
        for (int chunk_size : {5, 10}) {
            for (int k = 1; k <= 5 && ok; ++k) {
                ScriptedBackend backend;
                MemoryCache cache;
                BackendSession chunked_session(backend, cache);
                auto chunked = rank_for_event(event, summaries, chunked_session, templates,
                                              PromptParams{}, chunk_size, k);
                MemoryCache cache2;
                BackendSession flat_session(backend, cache2);
                auto flat = rank_for_event(event, summaries, flat_session, templates,
                                           PromptParams{}, 64, k);
                std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                        chunked.size());
                if (!std::equal(chunked.begin(), chunked.begin() + static_cast<std::ptrdiff_t>(top),
                                flat.begin())) {
                    ok = false;
                    detail = "top-k mismatch n=" + std::to_string(n) +
                             " chunk=" + std::to_string(chunk_size) + " k=" + std::to_string(k);
                }
            }
        }
    }
    report(4, "chunk-merge consistency", ok, detail);
}

// ---------------------------------------------------------------------------

DocumentRecord golden_document() {
    DocumentRecord doc;
    doc.id = "golden";
    doc.article = normalize(
        "Alpha beta gamma delta epsilon. Additional alpha context sentence follows here.\n\n"
        "Beta gamma delta omega kappa. Further omega kappa detail sentence here.\n\n"
        "Alpha beta gamma epsilon zephyr. Zephyr winds blow across alpha.\n\n"
        "Rivers flow toward the open sea. Streams join rivers far downstream.\n\n"
        "Mountains rise above wide green plains. Snow caps the tall mountains.\n\n"
        "Forests shelter many small animals. Trees grow tall in old forests.");
    return doc;
}

PipelineConfig golden_config() {
    PipelineConfig cfg;
    cfg.bag_size = 2;
    cfg.n_events = 2;
    return cfg;
}

std::string fixture(const std::string& name) {
    return read_file(std::string(HERA_FIXTURE_DIR) + "/" + name);
}

void criterion_golden() {
    bool ok = true;
    std::string detail;
    std::string expect_text = fixture("golden_summary.txt");
    std::string expect_digest = fixture("golden_digest.txt");
    for (int concurrency : {1, 8, 1, 8}) {
        PipelineConfig cfg = golden_config();
        cfg.concurrency = concurrency;
        Pipeline pipeline(cfg);
        auto result = pipeline.run(golden_document());
        if (result.summary.text != expect_text) {
            ok = false;
            detail = "summary mismatch at concurrency " + std::to_string(concurrency);
        }
        if (result.trace.digest() != expect_digest) {
            ok = false;
            detail = "digest mismatch at concurrency " + std::to_string(concurrency);
        }
    }
    report(5, "deterministic golden end-to-end", ok, detail);
}

void criterion_call_accounting() {
    bool ok = true;
    std::string detail;
    ScriptedBackend backend;
    MemoryCache cache;
    Pipeline pipeline(golden_config(), backend, cache);
    auto cold = pipeline.run(golden_document());
    const long expected = 6 + 1 + 2 + 2 + 1;  // P + 1 + E + E + 1
    if (cold.trace.backend_calls != expected) {
        ok = false;
        detail = "cold calls " + std::to_string(cold.trace.backend_calls) + ", expected " +
                 std::to_string(expected);
    }
    auto warm = pipeline.run(golden_document());
    if (warm.trace.backend_calls != 0) {
        ok = false;
        detail = "warm replay issued " + std::to_string(warm.trace.backend_calls) + " calls";
    }
    if (warm.summary.text != cold.summary.text || warm.trace.digest() != cold.trace.digest()) {
        ok = false;
        detail = "warm replay output differs";
    }
    report(6, "call accounting", ok, detail);
}

void criterion_ablation() {
    bool ok = true;
    std::string detail;
    auto run_mode = [&](bool packaging, bool reorder) {
        PipelineConfig cfg = golden_config();
        cfg.packaging_enabled = packaging;
        cfg.reorder_enabled = reorder;
        Pipeline pipeline(cfg);
        return pipeline.run(golden_document());
    };
    auto multiset = [](const PipelineTrace& trace) {
        std::vector<std::pair<int, std::uint64_t>> keys;
        for (const auto& c : trace.calls) {
            keys.emplace_back(static_cast<int>(c.template_id), c.prompt_hash);
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    auto baseline = run_mode(false, false);
    auto packaging_only = run_mode(true, false);
    auto both = run_mode(true, true);
    auto a = multiset(baseline.trace), b = multiset(packaging_only.trace),
         c = multiset(both.trace);
    if (a == b || a == c || b == c) {
        ok = false;
        detail = "call graphs are not pairwise distinct";
    }
    if (baseline.trace.backend_calls != 1) {
        ok = false;
        detail = "baseline issued " + std::to_string(baseline.trace.backend_calls) + " calls";
    }
    report(7, "ablation coherence", ok, detail);
}

// ---------------------------------------------------------------------------

fs::path make_corpus(int docs) {
    fs::path path = fs::temp_directory_path() / "hera_acceptance_corpus.jsonl";
    std::ofstream out(path, std::ios::trunc);
    for (int d = 0; d < docs; ++d) {
        nlohmann::json j = {
            {"id", "doc" + std::to_string(d)},
            {"article",
             "Opening topic " + std::to_string(d) + " statement sentence. Supporting opening detail here.\n\n"
             "Middle topic " + std::to_string(d) + " statement sentence. Supporting middle detail here.\n\n"
             "Closing topic " + std::to_string(d) + " statement sentence. Supporting closing detail here.\n\n"
             "Extra topic " + std::to_string(d) + " statement sentence. Supporting extra detail here."},
            {"abstract", "Opening topic " + std::to_string(d) + " statement sentence."},
        };
        out << j.dump() << "\n";
    }
    return path;
}

void criterion_sweep() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    fs::path corpus = make_corpus(10);
    PipelineConfig cfg;
    cfg.n_events = 2;
    std::ostringstream log;
    try {
        SweepResult sweep =
            cmd_sweep(corpus.string(), cfg, {3, 4, 5, 6, 7, 8}, std::nullopt, log);
        if (sweep.rows.size() != 6) {
            ok = false;
            detail = std::to_string(sweep.rows.size()) + " rows, expected 6";
        }
        // 10 documents x 4 paragraphs, issued once across the whole sweep.
        if (ok && sweep.local_summary_misses != 40) {
            ok = false;
            detail = "local summary misses " + std::to_string(sweep.local_summary_misses) +
                     ", expected 40";
        }
        if (ok) {
            std::ostringstream log2;
            SweepResult again =
                cmd_sweep(corpus.string(), cfg, {3, 4, 5, 6, 7, 8}, std::nullopt, log2);
            for (std::size_t i = 0; i < 6; ++i) {
                if (std::abs(again.rows[i].mean_rl - sweep.rows[i].mean_rl) > 1e-12) {
                    ok = false;
                    detail = "non-deterministic row k=" + std::to_string(sweep.rows[i].k);
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 30.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + "s";
    }
    report(8, "sweep harness", ok, detail);
}

void criterion_bench() {
    bool ok = true;
    std::string detail;
    fs::path corpus = make_corpus(10);
    PipelineConfig cfg;
    cfg.n_events = 2;
    std::ostringstream log;
    try {
        BenchResult bench = cmd_bench(corpus.string(), cfg, std::nullopt, log);
        if (bench.baseline_calls != 10) {
            ok = false;
            detail = "baseline calls " + std::to_string(bench.baseline_calls);
        }
        if (bench.hera_ms <= 0 || bench.baseline_ms <= 0 || bench.time_ratio <= 0) {
            ok = false;
            detail = "missing timings";
        }
        std::string table = log.str();
        if (table.find("ratio") == std::string::npos) {
            ok = false;
            detail = "ratio missing from output";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "bench harness", ok, detail);
}

}  // namespace

int main() {
    criterion_rouge_oracle();
    criterion_segmentation();
    criterion_permutations();
    criterion_chunk_merge();
    criterion_golden();
    criterion_call_accounting();
    criterion_ablation();
    criterion_sweep();
    criterion_bench();
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criterion(s) failed")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
