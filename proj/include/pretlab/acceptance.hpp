#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pretlab::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct Options {
    std::uint64_t seed = kDefaultSeed;
};

struct Outcome {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
    std::vector<std::pair<std::string, double>> metrics;
};

inline constexpr int kCriteria = 12;

Outcome run_criterion(int id, const Options& opt = {});
std::vector<Outcome> run_all(const Options& opt = {});

/// "[PASS] 3 lemma-fourier-clauses (0.41 s) ..." style line
std::string format_line(const Outcome& o);

}  // namespace pretlab::acceptance
