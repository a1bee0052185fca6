#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "pretlab/analytic.hpp"
#include "pretlab/errors.hpp"

using namespace pretlab;
using namespace pretlab::analytic;

namespace {

// plain Eratosthenes over the full range, no segmentation, no odd-only trick
std::vector<std::uint32_t> naive_sieve(std::int64_t n) {
    std::vector<char> comp(std::size_t(n + 1), 0);
    std::vector<std::uint32_t> out;
    for (std::int64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(std::uint32_t(i));
        for (std::int64_t j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

// Borwein's alternating-series algorithm for eta(s), then zeta = eta / (1 - 2^{1-s})
Complex borwein_zeta(Complex s, int n = 80) {
    std::vector<long double> d(n + 1);
    long double acc = 0;
    for (int i = 0; i <= n; ++i) {
        long double term = 1;
        // n * (n+i-1)! 4^i / ((n-i)! (2i)!)
        term = n * std::exp(std::lgamma((long double)(n + i)) - std::lgamma((long double)(n - i + 1)) -
                            std::lgamma((long double)(2 * i + 1))) *
               std::pow(4.0L, i);
        acc += term;
        d[i] = acc;
    }
    std::complex<long double> sum = 0;
    std::complex<long double> sl(s.real(), s.imag());
    for (int k = 0; k < n; ++k) {
        long double sign = k % 2 ? -1 : 1;
        sum += sign * (d[n] - d[k]) * std::exp(-sl * std::log((long double)(k + 1)));
    }
    sum /= -d[n];
    sum = -sum;
    auto denom = 1.0L - std::exp((1.0L - sl) * std::log(2.0L));
    auto z = sum / denom;
    return {double(z.real()), double(z.imag())};
}

}  // namespace

TEST_CASE("sieve: small cases and capacity") {
    CHECK(sieve_primes(10).primes == std::vector<std::uint32_t>{2, 3, 5, 7});
    CHECK(sieve_primes(2).primes == std::vector<std::uint32_t>{2});
    CHECK_THROWS_AS(sieve_primes(1), CapacityError);
    CHECK_THROWS_AS(sieve_primes(kSieveCap + 1), CapacityError);
    CHECK(sieve_primes(1'000'000).primes.size() == 78498);
}

TEST_CASE("sieve agrees with an independent sieve") {
    for (std::int64_t x : {10'000, 100'000, 1'000'000}) {
        auto a = sieve_primes(x).primes;
        CHECK(a == naive_sieve(x));
    }
    // segment boundaries: 2^18 odd numbers per segment
    std::int64_t edge = 2 * (1 << 18) + 1;
    for (std::int64_t x = edge - 6; x <= edge + 6; ++x)
        CHECK(sieve_primes(x).primes == naive_sieve(x));
}

TEST_CASE("shared prime table covers requests") {
    auto t = primes_upto(1000);
    CHECK(t->limit >= 1000);
    CHECK(t->primes[167] == 997);
    auto u = primes_upto(200'000);
    CHECK(u->limit >= 200'000);
}

TEST_CASE("prime reciprocal sums") {
    CHECK(prime_reciprocal_sum(10) == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-15));
    CHECK(std::abs(prime_reciprocal_sum(100) - 1.80281720104887093987) < 1e-13);
    double s6 = prime_reciprocal_sum(1'000'000);
    CHECK(std::abs(s6 - 2.88732809956767271235) < 1e-12);
    CHECK(std::abs(s6 - (std::log(std::log(1e6)) + 0.2615)) < 0.01);
    // weighted: w = 2 doubles the sum
    CHECK(prime_reciprocal_sum(100, [](std::uint32_t) { return 2.0; }) ==
          doctest::Approx(2 * 1.80281720104887093987).epsilon(1e-14));
}

TEST_CASE("zeta against frozen high-precision values") {
    struct Case {
        Complex s, z;
    };
    const Case cases[] = {
        {{1, 1}, {0.582158059752003648, -0.926848564330807077}},
        {{2, 0}, {1.64493406684822643647, 0}},
        {{1.1, 0}, {10.5844484649508009510, 0}},
        {{1.01, 0}, {100.577943338496783673, 0}},
        {{0.5, 3}, {0.532736670974232884, -0.0788965134258333827}},
        {{1, 100}, {1.63283350668671186661, -0.0681312038418124901}},
        {{1, -0.5}, {0.578433021099311169, 1.96354949645297878}},
        {{0.75, -20}, {0.584681424296043160, 0.843285529092258712}},
    };
    for (auto& c : cases) {
        CAPTURE(c.s);
        CHECK(std::abs(zeta_near_one(c.s) - c.z) <= 1e-11);
    }
}

TEST_CASE("zeta agrees with an independent Borwein evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(0.6, 2.0), im(-20, 20);
    for (int i = 0; i < 40; ++i) {
        Complex s(re(rng), im(rng));
        if (std::abs(s - 1.0) < 0.05) continue;
        CAPTURE(s);
        CHECK(std::abs(zeta_near_one(s, 1e-12) - borwein_zeta(s)) < 1e-9);
    }
}

TEST_CASE("zeta: errors, conjugation, pole behaviour") {
    CHECK_THROWS_AS(zeta_near_one({1, 0}), PoleError);
    CHECK_THROWS_AS(zeta_near_one({0.4, 1}), DomainError);
    CHECK_THROWS_AS(zeta_near_one({1, 2e4}), DomainError);
    CHECK_THROWS_AS(zeta_near_one({1, 1}, 1e-30), AccuracyError);
    for (Complex s : {Complex(1, 3), Complex(0.7, -12), Complex(1.3, 0.1)})
        CHECK(std::abs(zeta_near_one(s)) == doctest::Approx(std::abs(std::conj(zeta_near_one(std::conj(s))))).epsilon(1e-14));
    double prev = 1e9;
    for (double sigma : {1.1, 1.01, 1.001}) {
        double v = zeta_near_one({sigma, 0}).real() * (sigma - 1);
        double dev = std::abs(v - 1);
        CHECK(dev <= 10 * (sigma - 1));
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("complex gamma") {
    CHECK(std::abs(complex_gamma(1.0) - 1.0) < 1e-14);
    CHECK(std::abs(complex_gamma(0.5) - std::sqrt(kPi)) < 1e-13);
    CHECK(std::abs(complex_gamma(0.7994733710) - 1.16482189892320762) < 1e-12);
    CHECK(std::abs(complex_gamma({0.5, 2}) - Complex(0.0898551767064316358, -0.0604937602928875685)) < 1e-12);
    CHECK(std::abs(complex_gamma(-1.5) - 2.36327180120735470306) < 1e-12);
    CHECK(std::abs(complex_gamma({-2.3, 0.7}) - Complex(-0.0622750720136882404, -0.274869820381396888)) < 1e-12);
    CHECK(std::abs(complex_gamma({1.7, -1.2}) - Complex(0.503433506065913558, -0.209376065991194027)) < 1e-12);
    CHECK_THROWS_AS(complex_gamma(0.0), PoleError);
    CHECK_THROWS_AS(complex_gamma(-3.0), PoleError);
}

TEST_CASE("gamma recurrence on a grid in the strip") {
    double worst = 0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            Complex z(0.2 + 1.8 * i / 9, -2 + 4.0 * j / 9);
            Complex lhs = complex_gamma(z + 1.0), rhs = z * complex_gamma(z);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
    CHECK(worst <= 1e-9);
}

TEST_CASE("gamma matches a numerical integral") {
    // Gamma(z) = int_0^inf t^{z-1} e^{-t} dt, trapezoid in u = log t
    double z = 0.7994733710, s = 0, h = 1e-3;
    for (double u = -60; u <= 5; u += h) s += std::exp(z * u - std::exp(u));
    CHECK(std::abs(s * h - complex_gamma(z).real()) < 1e-9);
}

TEST_CASE("dickman rho on [0,2]") {
    CHECK(dickman_rho(0.5) == 1.0);
    CHECK(dickman_rho(0) == 1.0);
    CHECK(dickman_rho(2) == doctest::Approx(1 - std::log(2.0)).epsilon(1e-15));
    CHECK(dickman_rho(std::sqrt(std::exp(1.0))) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dickman_rho(1.0) == 1.0);
    CHECK(std::abs(dickman_rho(std::nextafter(1.0, 2.0)) - 1.0) < 1e-15);
    CHECK_THROWS_AS(dickman_rho(2.1), DomainError);
    CHECK_THROWS_AS(dickman_rho(-0.1), DomainError);
}

TEST_CASE("smooth numbers") {
    CHECK(smooth_count(10, 3) == 7);
    CHECK(smooth_count(100, 10) == 46);
    CHECK(smooth_reciprocal_sum(10, 3, 1) ==
          doctest::Approx(1 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 6 + 1.0 / 8 + 1.0 / 9).epsilon(1e-15));
    CHECK(std::abs(smooth_reciprocal_sum(100, 10, 15) - 2.28284438775510204) < 1e-14);
    for (std::int64_t x : {1, 2, 17, 1000}) {
        CHECK(smooth_count(x, x) == x);
        CHECK(smooth_count(x, 1) == 1);
    }
    CHECK_THROWS_AS(smooth_count(kSmoothCap + 1, 10), CapacityError);
    // brute-force largest prime factor check
    auto lpf = largest_prime_factor_table(2000);
    for (std::int64_t n = 2; n <= 2000; ++n) {
        auto f = factorize(n);
        CHECK(lpf[n] == f.back().p);
    }
}

TEST_CASE("integer helpers") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(97) == 96);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(1) == 1);
    CHECK(is_squarefree(105));
    CHECK_FALSE(is_squarefree(18));
    CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
    CHECK(is_prime(1'000'000'007));
    CHECK_FALSE(is_prime(561));
    auto naive = naive_sieve(5000);
    std::size_t k = 0;
    for (std::int64_t n = 0; n <= 5000; ++n) {
        bool p = k < naive.size() && naive[k] == n;
        if (p) ++k;
        CHECK(is_prime(n) == p);
    }
}

TEST_CASE("e(x) is conjugation-exact") {
    for (double x : {0.1, 0.37, 12.25, -3.7, 1e6 + 0.3})
        CHECK(expi2pi(-x) == std::conj(expi2pi(x)));
}
