#include "hera/prompting.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

namespace hera {

namespace {

constexpr int kTemplateCount = 6;

const std::array<const char*, kTemplateCount> kNames = {
    "LocalSummary", "RankParagraphs", "ExtractEvents",
    "Aggregate",    "OrderSentences", "BagSummary",
};

const std::array<const char*, kTemplateCount> kInstructions = {
    // Core instructions, kept character-for-character.
    "Summarize the following paragraph in one sentences.",
    "Rank the following sentences based on their relevance to the event.",
    "Extract the most important events from the following summary sentences.",
    "Generate connectives to concatenate all summaries to form a fluent text. "
    "DO NOT change the original semantics.",
    // Plumbing templates.
    "Arrange the following sentences in a coherent semantic order. "
    "Output the sentence numbers in the new order.",
    "Summarize the following passages into one paragraph.",
};

}  // namespace

const char* template_name(TemplateId id) {
    return kNames[static_cast<std::size_t>(id)];
}

std::optional<TemplateId> template_from_name(const std::string& name) {
    for (int i = 0; i < kTemplateCount; ++i) {
        if (name == kNames[static_cast<std::size_t>(i)]) return static_cast<TemplateId>(i);
    }
    return std::nullopt;
}

TemplateSet::TemplateSet() {
    instructions_.assign(kInstructions.begin(), kInstructions.end());
}

const std::string& TemplateSet::instruction(TemplateId id) const {
    return instructions_[static_cast<std::size_t>(id)];
}

void TemplateSet::set_instruction(TemplateId id, std::string text) {
    instructions_[static_cast<std::size_t>(id)] = std::move(text);
}

void TemplateSet::load_overrides(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open template overrides: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error("template overrides: missing '=' at line " + std::to_string(line_no));
        }
        std::string name = trim(t.substr(0, eq));
        auto id = template_from_name(name);
        if (!id) throw Error("template overrides: unknown template '" + name + "'");
        set_instruction(*id, trim(t.substr(eq + 1)));
    }
}

std::string render(const TemplateSet& templates, TemplateId id,
                   const std::vector<std::string>& payload,
                   const std::optional<std::string>& event) {
    if (id == TemplateId::RankParagraphs && !event) throw MissingEvent();
    std::string out = templates.instruction(id);
    if (event) {
        out += "\nEvent: ";
        out += *event;
    }
    for (std::size_t i = 0; i < payload.size(); ++i) {
        out += "\n";
        out += std::to_string(i + 1);
        out += ". ";
        out += payload[i];
    }
    return out;
}

ParsedRanking parse_ranking(const std::string& response, int candidate_count) {
    ParsedRanking result;
    const int n = candidate_count;
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);

    // A line of the form "<label>. <value>" (or "<label>) <value>") is a
    // ranked-list row: only the value counts. Any other line contributes
    // every integer it contains, in order.
    static const std::regex labeled(R"(^\(?\d+[\.\):\]]\s*(\d+)\.?$)");

    std::istringstream lines(response);
    std::string line;
    auto take = [&](long v) {
        if (v < 1 || v > n) return;
        if (seen[static_cast<std::size_t>(v)]) return;
        seen[static_cast<std::size_t>(v)] = true;
        result.order.push_back(static_cast<int>(v));
    };
    while (std::getline(lines, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::smatch m;
        if (std::regex_match(t, m, labeled)) {
            take(std::stol(m[1].str()));
            continue;
        }
        for (std::size_t i = 0; i < t.size();) {
            if (std::isdigit(static_cast<unsigned char>(t[i]))) {
                std::size_t j = i;
                while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
                if (j - i <= 9) take(std::stol(t.substr(i, j - i)));
                i = j;
            } else {
                ++i;
            }
        }
    }

    if (result.order.empty()) result.fallback = true;
    for (int v = 1; v <= n; ++v) {
        if (!seen[static_cast<std::size_t>(v)]) result.order.push_back(v);
    }
    return result;
}

std::vector<std::string> parse_events(const std::string& response, int max_events) {
    static const std::regex prefix(R"(^\s*(?:[-*•]|\(?\d+[\.\):\]])?\s*)");
    std::vector<std::string> events;
    std::istringstream lines(response);
    std::string line;
    while (std::getline(lines, line) && static_cast<int>(events.size()) < max_events) {
        std::string t = std::regex_replace(line, prefix, "");
        t = trim(t);
        if (!t.empty()) events.push_back(std::move(t));
    }
    if (events.empty()) throw NoEventsParsed();
    return events;
}

namespace {

// Suffixes that do not end a sentence. Checked case-insensitively at a
// token boundary.
const std::array<const char*, 11> kAbbreviations = {
    "fig.", "et al.", "e.g.", "i.e.", "etc.", "vs.",
    "dr.",  "mr.",    "mrs.", "ms.",  "no.",
};

bool guarded_abbreviation(const std::string& text, std::size_t dot) {
    for (const char* abbr : kAbbreviations) {
        std::size_t len = std::strlen(abbr);
        if (dot + 1 < len) continue;
        std::size_t start = dot + 1 - len;
        bool match = true;
        for (std::size_t i = 0; i < len; ++i) {
            if (std::tolower(static_cast<unsigned char>(text[start + i])) != abbr[i]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        // Token boundary before the abbreviation ("bingo." must not match "no.").
        if (start > 0 && std::isalnum(static_cast<unsigned char>(text[start - 1]))) continue;
        return true;
    }
    return false;
}

}  // namespace

std::string parse_sentence(const std::string& response) {
    std::string text = trim(response);
    if (text.empty()) throw EmptyResponse();
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        bool at_end = (i + 1 == text.size());
        if (!at_end && !std::isspace(static_cast<unsigned char>(text[i + 1]))) continue;
        if (c == '.' && guarded_abbreviation(text, i)) continue;
        return text.substr(0, i + 1);
    }
    return text;
}

}  // namespace hera
