#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pretlab/analytic.hpp"
#include "pretlab/multiplicative.hpp"

namespace pretlab::extremal {

using pretentious::MultiplicativeFunction;

/// root of  int_0^1 |e(theta) - lambda| dtheta = 2 - lambda  on (0,1); cached
double solve_lambda();
/// int_0^1 |e(theta) - lambda| dtheta - (2 - lambda)
double lambda_residual(double lambda);

struct TauSolution {
    double theta;
    double tau;       // -cos theta
    double residual;  // sin theta - theta cos theta - pi/2
};
TauSolution solve_tau_full();
double solve_tau();

/// 2 lambda / (1 + lambda^2)
double decay_ratio();

/// g(u) = (e(u) - lambda) / |e(u) - lambda|
Complex symbol(double u);

enum class Method { quadrature, series };
const char* method_name(Method m);

/// g_n by adaptive Gauss-Kronrod on [0,1]; |n| <= 64
Complex fourier_quadrature(int n);
/// g_n from the binomial h-series; |n| <= 64 for the public entry point
double fourier_series(int n);
/// h_m, any m (symmetric in m)
double h_coefficient(int m);

/// g_n for all |n| <= n_max (series allows large n_max).
struct FourierTable {
    Method method;
    int n_max;
    std::vector<Complex> coeffs;  // index n + n_max
    Complex at(int n) const;
    double real(int n) const { return at(n).real(); }
};
FourierTable fourier_table(int n_max, Method m);

/// rigorous decay bound for |g_n|, |n| >= 2
double decay_bound(int n);

struct Clause {
    std::string name;
    bool pass;
    double margin;  // smallest slack over the range (negative on failure)
    int worst_n;
    std::string detail;
};
struct FourierChecks {
    int n_max;
    std::vector<Clause> clauses;
    double identity_residual;  // lambda (g_0 - 1) - (g_1 - 2)
    bool identity_pass;
    double dual_method_gap;    // max |quad - series| over |n| <= 20
    bool all_pass() const;
};
FourierChecks lemma_fourier_checks(int n_max = 40);

/// f_t with f_t(p) = g(t log p / 2 pi) and the power recursion; values are
/// validated on all p^m <= X.
MultiplicativeFunction build_ft(double t, std::int64_t X);
/// f_t(p^m) by the recursion, no caching
Complex ft_prime_power(double t, std::int64_t p, int m);

inline constexpr std::int64_t kLogSumCap = 100'000'000;
Complex log_sum_direct(const MultiplicativeFunction& f, std::int64_t X);

inline constexpr int kDefaultK = 1500;

/// prod over 0 < |k| <= K of k^{-g_{l-k}}, with log k = log|k| - i pi sgn(t)
/// for k < 0, so that log k + log(it) is the principal log of ikt.
/// tail_bound receives a certified bound on |log C - log C_K|.
Complex shift_constant(int ell, double t_sign, int K, double* tail_bound = nullptr);

struct MainTermEntry {
    int ell;
    double gamma;     // gamma_0 = g_0 + 1, else g_ell
    Complex C;
    double C_tail_bound;
    Complex term;
};
struct AsymptoticReport {
    double t;
    std::int64_t X;
    int K;
    std::vector<int> argmax_set;
    double mu;
    double gap;
    std::vector<MainTermEntry> entries;
    Complex main_total;
    std::optional<Complex> direct;
    std::optional<Complex> ratio;
    std::optional<double> ratio_modulus;
    double growth_ratio;  // |main| / (|t|^{-1} (|t| log X)^{g_1 - 1})
    std::vector<std::string> warnings;
};
AsymptoticReport main_term(double t, std::int64_t X, int K = kDefaultK, bool with_direct = true);

Complex zeta_shift_product(int ell, double t, int N);

struct ProdEstCheck {
    double t;
    Complex product;
    Complex reference;  // C_l (it)^{g_l - 1}
    Complex ratio;
    double deviation;   // |ratio - 1|
};
ProdEstCheck prodest_check(int ell, double t, int N, int K = kDefaultK);

struct SharpnessReport {
    double t;
    std::int64_t X;
    double y_t;
    double log_sum_modulus;  // |sum_{n<=X} f_t(n)/n|
    double d2_X;             // D(f_t,1;X)^2
    double bound;            // (log X) e^{-lambda D^2}
    double d2_y;             // D(f_t,1;y_t)^2
    double ratio;            // log_sum_modulus / bound
    double growth;           // |t|^{-1} (|t| log X)^{g_1 - 1}
    double ratio_growth;     // log_sum_modulus / growth
    double identity_residual;
    std::vector<std::string> warnings;
};
SharpnessReport sharpness_report(double t, std::int64_t X);

struct ConvInverseReport {
    double t;
    std::int64_t p_max;
    int k_max;
    double max_h_prime;         // max |h(p)|
    double worst_power_ratio;   // max |h(p^k)| / 2^{k-1}, k >= 2
    std::int64_t worst_p;
    int worst_k;
    double min_factor_slack;    // min over 3 <= p of |E_p| - (1 - 2/(p(p-2)))
    double factor_two;          // |E_2(1+it)|
    Complex H;                  // prod_p E_p(1 + i t), ell = 1
    bool pass;
};
ConvInverseReport conv_inverse_check(const MultiplicativeFunction& f, double t,
                                     std::int64_t p_max, int k_max);

}  // namespace pretlab::extremal
