#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace pretlab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// e(x) = exp(2 pi i x), with x reduced mod 1 first so large arguments keep
// their accuracy.
Complex expi2pi(double x);

namespace analytic {

inline constexpr std::int64_t kSieveCap = 1'000'000'000;
inline constexpr std::int64_t kSmoothCap = 10'000'000;

struct PrimeTable {
    std::int64_t limit = 0;
    std::vector<std::uint32_t> primes;
};

/// Odd-only segmented sieve. Throws CapacityError outside [2, cap].
PrimeTable sieve_primes(std::int64_t limit, std::int64_t cap = kSieveCap);

/// Shared read-only table covering at least `limit`; cached per process.
std::shared_ptr<const PrimeTable> primes_upto(std::int64_t limit);

/// Sum over p <= x of w(p)/p, ascending p. No weight means w == 1.
double prime_reciprocal_sum(std::int64_t x,
                            const std::function<double(std::uint32_t)>& weight = {});

/// Riemann zeta by Euler-Maclaurin, absolute error <= precision.
Complex zeta_near_one(Complex s, double precision = 1e-12);

/// Gamma via Lanczos (g=7, 9 terms) with reflection for Re z < 1/2.
Complex complex_gamma(Complex z);

/// Dickman rho on [0,2] only.
double dickman_rho(double u);

/// Number of n <= x with every prime factor <= y (exhaustive).
std::int64_t smooth_count(std::int64_t x, std::int64_t y);

/// Sum of 1/n over y-smooth n <= x with gcd(n, coprime_to) = 1.
double smooth_reciprocal_sum(std::int64_t x, std::int64_t y, std::int64_t coprime_to = 1);

// ---- small integer helpers used across modules ----

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t euler_phi(std::int64_t n);
bool is_prime(std::int64_t n);
bool is_squarefree(std::int64_t n);
int mobius(std::int64_t n);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

struct PrimePower {
    std::int64_t p;
    int e;
    std::int64_t pe;
};
std::vector<PrimePower> factorize(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

/// Largest prime factor for every n <= x (entry 1 is 1).
std::vector<std::uint32_t> largest_prime_factor_table(std::int64_t x);

}  // namespace analytic
}  // namespace pretlab
