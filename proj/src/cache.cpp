#include "pretlab/cache.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace pretlab::cache {

namespace {

constexpr std::uint32_t kMagic = 0x504c4243;  // "PLBC"
constexpr std::uint32_t kVersion = 1;

std::optional<std::filesystem::path> path_for(const std::string& key) {
    const char* dir = std::getenv("PRETLAB_CACHE_DIR");
    if (!dir || !*dir) return std::nullopt;
    return std::filesystem::path(dir) / (key + ".v1.bin");
}

}  // namespace

std::optional<std::vector<double>> load(const std::string& key, std::size_t expected_len) {
    auto p = path_for(key);
    if (!p) return std::nullopt;
    std::ifstream in(*p, std::ios::binary);
    if (!in) return std::nullopt;
    std::uint32_t magic = 0, version = 0;
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!in || magic != kMagic || version != kVersion || len != expected_len) return std::nullopt;
    std::vector<double> v(len);
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(len * sizeof(double)));
    if (!in) return std::nullopt;
    return v;
}

void store(const std::string& key, const std::vector<double>& values) {
    auto p = path_for(key);
    if (!p) return;
    std::error_code ec;
    std::filesystem::create_directories(p->parent_path(), ec);
    // write then rename, so a concurrent reader never sees half a file
    auto tmp = *p;
    tmp += ".tmp" + std::to_string(std::rand());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        std::uint64_t len = values.size();
        out.write(reinterpret_cast<const char*>(&kMagic), sizeof kMagic);
        out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
        out.write(reinterpret_cast<const char*>(&len), sizeof len);
        out.write(reinterpret_cast<const char*>(values.data()),
                  std::streamsize(len * sizeof(double)));
        if (!out) return;
    }
    std::filesystem::rename(tmp, *p, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace pretlab::cache
