#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace hera {

/// Response cache keyed by a stable 64-bit hash. Concurrency-safe;
/// concurrent writers to the same key race benignly (one entry wins).
class ResponseCache {
public:
    virtual ~ResponseCache() = default;
    virtual std::optional<std::string> get(std::uint64_t key) = 0;
    virtual void put(std::uint64_t key, const std::string& text) = 0;
    virtual std::size_t entry_count() = 0;
};

class MemoryCache final : public ResponseCache {
public:
    std::optional<std::string> get(std::uint64_t key) override;
    void put(std::uint64_t key, const std::string& text) override;
    std::size_t entry_count() override;

private:
    std::mutex mu_;
    std::unordered_map<std::uint64_t, std::string> entries_;
};

/// One file per key under `dir`, filename = 16-hex key. Entry layout:
/// u64-le text length, text bytes, u64-le FNV-1a checksum of the text.
/// Corrupt entries read as a miss and get overwritten. Writes go through a
/// temp file and rename.
class DiskCache final : public ResponseCache {
public:
    explicit DiskCache(std::string dir);

    std::optional<std::string> get(std::uint64_t key) override;
    void put(std::uint64_t key, const std::string& text) override;
    std::size_t entry_count() override;

    std::uintmax_t total_bytes();
    void clear();
    const std::string& dir() const { return dir_; }

private:
    std::string path_for(std::uint64_t key) const;
    std::string dir_;
};

}  // namespace hera
