#include "hera/backend.hpp"
#include "hera/reordering.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace hera;

namespace {

std::vector<LocalSummary> summaries_by_index(const std::vector<std::string>& sentences) {
    std::vector<LocalSummary> out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        out.push_back({static_cast<int>(i), sentences[i]});
    }
    return out;
}

bool is_bijection(const std::vector<int>& perm) {
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != static_cast<int>(i)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("document_order sorts by paragraph index") {
    auto o = document_order({7, 2, 5});
    CHECK(o.permutation == std::vector<int>{1, 2, 0});
    CHECK(!o.fallback_used);
}

TEST_CASE("chain_order hand-computed Jaccard chain") {
    // 0 -> 1 overlap {a}/3 beats 0 -> 2 overlap 0; then 2 is forced.
    auto o = chain_order({0, 1, 2}, {"a b", "a c", "c d"});
    CHECK(o.permutation == std::vector<int>{0, 1, 2});
}

TEST_CASE("chain_order all-identical falls to ascending index") {
    auto o = chain_order({3, 1, 2}, {"same words", "same words", "same words"});
    // start at index 1 (paragraph 1), then ties resolve by ascending paragraph index
    CHECK(o.permutation == std::vector<int>{1, 2, 0});
}

TEST_CASE("chain_order with two members is forced") {
    auto o = chain_order({9, 4}, {"x", "y"});
    CHECK(o.permutation == std::vector<int>{1, 0});
}

TEST_CASE("chain_order determinism and bijection, exhaustive small m") {
    std::mt19937 rng(3);
    static const char* words[] = {"ab", "cd", "ef", "gh", "ij"};
    std::uniform_int_distribution<int> w(0, 4);
    for (int m = 1; m <= 6; ++m) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> members;
            std::vector<std::string> sentences;
            for (int i = 0; i < m; ++i) {
                members.push_back(i * 3 + trial % 2);
                sentences.push_back(std::string(words[w(rng)]) + " " + words[w(rng)]);
            }
            auto a = chain_order(members, sentences);
            auto b = chain_order(members, sentences);
            REQUIRE(a.permutation == b.permutation);
            REQUIRE(is_bijection(a.permutation));
        }
    }
}

TEST_CASE("reorder_bag preserves members and sets phase") {
    TemplateSet templates;
    SegmentBag bag;
    bag.event = {0, "e"};
    bag.members = {7, 2, 5};
    bag.phase = BagPhase::Ranked;
    std::vector<LocalSummary> summaries;
    for (int i = 0; i < 10; ++i) summaries.push_back({i, "sentence " + std::to_string(i)});

    auto out = reorder_bag(bag, summaries, ReorderStrategy::DocumentOrder, nullptr, templates,
                           PromptParams{});
    CHECK(out.members == std::vector<int>{2, 5, 7});
    CHECK(out.phase == BagPhase::Reordered);
}

TEST_CASE("reorder_bag singleton is identity") {
    TemplateSet templates;
    SegmentBag bag;
    bag.event = {0, "e"};
    bag.members = {4};
    std::vector<LocalSummary> summaries;
    for (int i = 0; i < 6; ++i) summaries.push_back({i, "s"});
    for (auto strategy : {ReorderStrategy::DocumentOrder, ReorderStrategy::ChainOrder}) {
        auto out = reorder_bag(bag, summaries, strategy, nullptr, templates, PromptParams{});
        CHECK(out.members == std::vector<int>{4});
    }
}

TEST_CASE("scripted llm strategy preserves input order") {
    ScriptedBackend backend;
    MemoryCache cache;
    BackendSession session(backend, cache);
    TemplateSet templates;
    SegmentBag bag;
    bag.event = {0, "e"};
    bag.members = {4, 0, 2};
    std::vector<LocalSummary> summaries;
    for (int i = 0; i < 6; ++i) summaries.push_back({i, "sentence " + std::to_string(i) + "."});
    Ordering applied;
    auto out = reorder_bag(bag, summaries, ReorderStrategy::LlmOrder, &session, templates,
                           PromptParams{}, &applied);
    CHECK(out.members == std::vector<int>{4, 0, 2});
    CHECK(!applied.fallback_used);
}

TEST_CASE("llm_order garbage response falls back to document order") {
    auto o_fallback = parse_ranking("garbage with no digits", 3);
    CHECK(o_fallback.fallback);
    Ordering o = document_order({4, 0, 2});
    CHECK(o.permutation == std::vector<int>{1, 2, 0});
}

TEST_CASE("reorder_bag multiset property over random bags and all strategies") {
    ScriptedBackend backend;
    MemoryCache cache;
    BackendSession session(backend, cache);
    TemplateSet templates;
    std::mt19937 rng(17);
    std::vector<LocalSummary> summaries;
    for (int i = 0; i < 20; ++i) {
        summaries.push_back({i, "word" + std::to_string(i % 5) + " tail."});
    }
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> pool(20);
        for (int i = 0; i < 20; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::uniform_int_distribution<int> m_dist(1, 6);
        std::vector<int> members(pool.begin(), pool.begin() + m_dist(rng));
        SegmentBag bag;
        bag.event = {0, "word2"};
        bag.members = members;
        for (auto strategy : {ReorderStrategy::DocumentOrder, ReorderStrategy::ChainOrder,
                              ReorderStrategy::LlmOrder}) {
            auto out = reorder_bag(bag, summaries, strategy, &session, templates, PromptParams{});
            auto a = members, b = out.members;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            REQUIRE(a == b);
            REQUIRE(out.phase == BagPhase::Reordered);
        }
    }
}
