#pragma once

#include <optional>
#include <string>
#include <vector>

// On-disk cache for expensive tables, enabled by PRETLAB_CACHE_DIR.
// Files carry a format version and length; anything unexpected is a miss.
namespace pretlab::cache {

std::optional<std::vector<double>> load(const std::string& key, std::size_t expected_len);
void store(const std::string& key, const std::vector<double>& values);

}  // namespace pretlab::cache
