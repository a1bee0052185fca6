#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pretlab/multiplicative.hpp"

namespace pretlab::pretentious {

struct DistanceReport {
    std::string f_label, g_label;
    std::int64_t x = 0;
    std::optional<std::int64_t> y;  // range version: primes in (y, x]
    double d2 = 0.0;                // D(f,g;x)^2
    double distance() const;
    // minimizer queries
    std::optional<double> T;
    std::optional<double> t_star;
    std::optional<double> M;
    std::optional<double> grid_spacing;
    std::optional<std::int64_t> grid_points;
};

DistanceReport distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g,
                        std::int64_t x);
double distance_range(const MultiplicativeFunction& f, const MultiplicativeFunction& g,
                      std::int64_t y, std::int64_t x);

/// D(f, n^{it}; x)^2 minimized over |t| <= T
DistanceReport min_twist(const MultiplicativeFunction& f, std::int64_t x, double T,
                         double resolution);

double halasz_rhs(const MultiplicativeFunction& f, std::int64_t x, double T);
double ht_rhs(const MultiplicativeFunction& f, std::int64_t x);

struct LogMeanReport {
    std::int64_t x;
    double M;           // M(f;x,1)
    double t_halasz;    // minimizer of D(f,n^{it};x)^2 on [-1,1]
    double t_logsum;    // minimizer of sum (2 - Re((1+f(p))p^{-it}))/p on [-1,1]
    double d2_one;      // D(f,1;x)^2
    double bound_small_t;             // (1+M)e^{-M} log x + log log x
    std::optional<double> bound_large_t;  // needs t_logsum != 0
    double bound_lambda;              // (log x)(1+D^2)e^{-lambda D^2} + log log x
    bool large_t_branch;              // |t_logsum| >= 1/log x
    double applicable() const;        // the branch bound picked by t_logsum
};
LogMeanReport logmean_rhs(const MultiplicativeFunction& f, std::int64_t x);

struct GenHalaszReport {
    std::int64_t x;
    double kappa;
    double M;
    double t_peak;
    double peak;           // max |F(s)/s|
    double sigma;          // 1 + 1/log x
    double t_range;        // (log x)^kappa
    double grid_spacing;   // 1/(8 log x)
    std::int64_t grid_points;
    std::int64_t truncation;  // F summed over n <= x
};
GenHalaszReport genhalasz(const MultiplicativeFunction& f, std::int64_t x, double kappa);
double genhalasz_M(const MultiplicativeFunction& f, std::int64_t x, double kappa);

/// Small fixed family used for the bound ratio checks: 1, liouville, mobius,
/// n^{i/2}, the characters mod 3 and mod 5 (order 4), and a real sign pattern.
std::vector<MultiplicativeFunction> test_family();

enum class GammaMode { closed_form, fourier_partial, direct_average };
/// gamma_k = (1/k) sum_{a<k} |cos(pi a/k)|
double gamma_k(int k, GammaMode mode = GammaMode::closed_form, std::int64_t D = 1'000'000);

// 1-D minimizer shared by the twist searches: uniform grid of spacing <= h
// over [-T, T] (an even number of steps, so t = 0 is on the grid) and a
// golden-section pass around the best grid point down to width tol.
struct MinResult {
    double t;
    double value;
    double spacing;
    std::int64_t points;
};
MinResult minimize_symmetric(const std::function<double(double)>& fn, double T, double h,
                             double tol);

}  // namespace pretlab::pretentious
