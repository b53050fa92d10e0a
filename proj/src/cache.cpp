#include "hera/cache.hpp"

#include "hera/errors.hpp"
#include "hera/util.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace hera {

std::optional<std::string> MemoryCache::get(std::uint64_t key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void MemoryCache::put(std::uint64_t key, const std::string& text) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_[key] = text;
}

std::size_t MemoryCache::entry_count() {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

DiskCache::DiskCache(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string DiskCache::path_for(std::uint64_t key) const {
    return (fs::path(dir_) / to_hex(key)).string();
}

namespace {

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    }
    return v;
}

}  // namespace

std::optional<std::string> DiskCache::get(std::uint64_t key) {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() < 16) return std::nullopt;  // corrupt: treated as miss
    std::uint64_t len = get_u64(raw.data());
    if (raw.size() != 16 + len) return std::nullopt;
    std::string text = raw.substr(8, len);
    std::uint64_t checksum = get_u64(raw.data() + 8 + len);
    if (checksum != fnv1a(text)) return std::nullopt;
    return text;
}

void DiskCache::put(std::uint64_t key, const std::string& text) {
    std::string blob;
    blob.reserve(text.size() + 16);
    put_u64(blob, text.size());
    blob += text;
    put_u64(blob, fnv1a(text));
    write_file_atomic(path_for(key), blob);
}

std::size_t DiskCache::entry_count() {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.is_regular_file()) ++n;
    }
    return n;
}

std::uintmax_t DiskCache::total_bytes() {
    std::uintmax_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.is_regular_file()) n += e.file_size();
    }
    return n;
}

void DiskCache::clear() {
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.is_regular_file()) fs::remove(e.path());
    }
}

}  // namespace hera
