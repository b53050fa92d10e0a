#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hera {

// FNV-1a, used for cache keys and trace digests. Stable across platforms.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

std::string trim(std::string_view s);
std::string lower(std::string_view s);

// Case-folded alphanumeric word tokens ("2-0 win" -> {"2","0","win"}).
std::vector<std::string> word_tokens(std::string_view text);

// Runs fn(0..n-1) on up to max_in_flight worker threads. Rethrows the first
// exception after all workers have stopped. fn must write results keyed by
// index so completion order cannot affect the outcome.
void parallel_for(std::size_t n, int max_in_flight, const std::function<void(std::size_t)>& fn);

// Write-temp-then-rename; readers never observe a truncated file.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

}  // namespace hera
