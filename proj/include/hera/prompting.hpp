#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hera {

enum class TemplateId {
    LocalSummary,
    RankParagraphs,
    ExtractEvents,
    Aggregate,
    OrderSentences,
    BagSummary,
};

const char* template_name(TemplateId id);
std::optional<TemplateId> template_from_name(const std::string& name);

/// Instruction texts per template. The four core instructions are embedded
/// verbatim (including "in one sentences."); an override file can replace
/// any of them without code changes.
class TemplateSet {
public:
    TemplateSet();  // built-in instructions

    const std::string& instruction(TemplateId id) const;
    void set_instruction(TemplateId id, std::string text);

    // Override file: one "TemplateName=instruction text" per line, '#'
    // comments allowed. Unknown template names are an error.
    void load_overrides(const std::string& path);

private:
    std::vector<std::string> instructions_;
};

// Renders a prompt: instruction line, then "Event: ..." when present, then
// payload items numbered "1.", "2.", ... in the given order. Byte-exact
// deterministic. Throws MissingEvent for RankParagraphs without an event.
std::string render(const TemplateSet& templates, TemplateId id,
                   const std::vector<std::string>& payload,
                   const std::optional<std::string>& event = std::nullopt);

struct ParsedRanking {
    std::vector<int> order;   // permutation of 1..n, first-appearance order
    bool fallback = false;    // true when no usable numbers were found
};

// Total: always yields a permutation of 1..n. Out-of-range and repeated
// numbers are dropped (first occurrence wins); missing candidates are
// appended in ascending order. A response with no usable numbers yields the
// identity permutation with the fallback flag set.
ParsedRanking parse_ranking(const std::string& response, int candidate_count);

// Non-empty lines with bullets/numbering stripped, truncated to max_events.
// Throws NoEventsParsed when nothing remains.
std::vector<std::string> parse_events(const std::string& response, int max_events);

// First sentence of the response. Terminators are '.', '!', '?' followed by
// whitespace or end of text, with a fixed abbreviation guard list ("Fig.",
// "et al.", "e.g.", "i.e.", "etc.", "vs.", "Dr.", "Mr.", "Mrs.", "Ms.",
// "No."). Returns the whole trimmed response when no terminator is found.
// Throws EmptyResponse for whitespace-only input.
std::string parse_sentence(const std::string& response);

}  // namespace hera
