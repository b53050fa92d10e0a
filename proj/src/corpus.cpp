#include "hera/corpus.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace hera {

std::string normalize(std::string_view raw) {
    // Pass 1: unify line endings and strip trailing whitespace per line.
    std::vector<std::string> lines;
    std::string cur;
    auto flush = [&] {
        std::size_t e = cur.size();
        while (e > 0 && (cur[e - 1] == ' ' || cur[e - 1] == '\t')) --e;
        cur.resize(e);
        lines.push_back(std::move(cur));
        cur.clear();
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\r') {
            if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
            flush();
        } else if (c == '\n') {
            flush();
        } else {
            cur += c;
        }
    }
    flush();

    // Pass 2: collapse 3+ consecutive newlines to 2 (i.e. at most one empty
    // line between non-empty lines) and drop empty lines at both edges.
    std::string out;
    int pending_empties = 0;
    bool seen_content = false;
    for (const std::string& line : lines) {
        if (line.empty()) {
            ++pending_empties;
            continue;
        }
        if (seen_content) {
            out += pending_empties > 0 ? "\n\n" : "\n";
        }
        pending_empties = 0;
        seen_content = true;
        out += line;
    }
    return out;
}

namespace {

std::size_t count_words(std::string_view text) {
    return word_tokens(text).size();
}

}  // namespace

std::vector<Paragraph> segment(const std::string& article, int min_words) {
    if (min_words < 1) min_words = 1;
    if (count_words(article) == 0) throw EmptyDocument();

    // Fragment boundaries: blank lines ("\n\n" after normalization).
    struct Fragment {
        std::size_t begin, end;
    };
    std::vector<Fragment> frags;
    std::size_t pos = 0;
    while (pos <= article.size()) {
        std::size_t sep = article.find("\n\n", pos);
        std::size_t end = (sep == std::string::npos) ? article.size() : sep;
        if (end > pos) frags.push_back({pos, end});
        if (sep == std::string::npos) break;
        pos = sep + 2;
    }

    // Merge short fragments forward (the merged text keeps the internal
    // blank line so reconstruction stays exact); a short tail merges back.
    std::vector<Fragment> merged;
    for (const Fragment& f : frags) {
        if (!merged.empty() &&
            count_words(std::string_view(article).substr(merged.back().begin,
                                                        merged.back().end - merged.back().begin)) <
                static_cast<std::size_t>(min_words)) {
            merged.back().end = f.end;
        } else {
            merged.push_back(f);
        }
    }
    if (merged.size() > 1) {
        const Fragment& last = merged.back();
        if (count_words(std::string_view(article).substr(last.begin, last.end - last.begin)) <
            static_cast<std::size_t>(min_words)) {
            merged[merged.size() - 2].end = last.end;
            merged.pop_back();
        }
    }

    std::vector<Paragraph> out;
    out.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        Paragraph p;
        p.index = static_cast<int>(i);
        p.span_begin = merged[i].begin;
        p.span_end = merged[i].end;
        p.text = article.substr(p.span_begin, p.span_end - p.span_begin);
        out.push_back(std::move(p));
    }
    return out;
}

Dataset load_dataset(const std::string& path, std::optional<std::size_t> limit) {
    if (!std::filesystem::exists(path)) throw DatasetNotFound(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetNotFound(path);

    Dataset ds;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (limit && ds.records.size() >= *limit) break;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object() || !j.contains("article") ||
            !j["article"].is_string()) {
            ++ds.skipped;
            continue;
        }
        DocumentRecord rec;
        rec.article = normalize(j["article"].get<std::string>());
        if (rec.article.empty()) {
            ++ds.skipped;
            continue;
        }
        rec.id = (j.contains("id") && j["id"].is_string()) ? j["id"].get<std::string>()
                                                          : std::to_string(line_no);
        if (!seen_ids.insert(rec.id).second) {
            ++ds.skipped;  // duplicate id
            continue;
        }
        if (j.contains("abstract") && j["abstract"].is_string()) {
            rec.reference = j["abstract"].get<std::string>();
        }
        ds.records.push_back(std::move(rec));
    }
    if (ds.records.empty()) throw DatasetEmpty(path);
    return ds;
}

}  // namespace hera
