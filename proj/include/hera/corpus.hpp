#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hera {

/// One source article plus an optional reference summary.
struct DocumentRecord {
    std::string id;
    std::string article;                 // normalized on load
    std::optional<std::string> reference;
};

/// A text segment of a document. char_span indexes into the normalized
/// article text; joining all paragraph texts with a blank line reconstructs
/// the article exactly.
struct Paragraph {
    int index = 0;
    std::string text;
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
};

// Unifies line endings to '\n', strips trailing whitespace per line,
// collapses runs of 3+ newlines to exactly 2, and trims document edges.
// Idempotent.
std::string normalize(std::string_view raw);

// Splits a normalized article on blank lines; fragments shorter than
// min_words word tokens are merged into the following fragment (preceding,
// if last). Throws EmptyDocument when the article has no word tokens.
std::vector<Paragraph> segment(const std::string& article, int min_words);

struct Dataset {
    std::vector<DocumentRecord> records;
    std::size_t skipped = 0;  // malformed lines
};

// Reads a JSONL dataset: required key "article", optional "id" (default =
// line number) and "abstract" (mapped to reference). Malformed lines are
// counted, not fatal. Throws DatasetNotFound / DatasetEmpty.
Dataset load_dataset(const std::string& path, std::optional<std::size_t> limit = std::nullopt);

}  // namespace hera
