#include <cmath>

#include "doctest.h"
#include "pretlab/errors.hpp"
#include "pretlab/extremal.hpp"
#include "pretlab/pretentious.hpp"

using namespace pretlab;
using namespace pretlab::extremal;

namespace {

// g_n from a 4096-point FFT of the symbol, computed outside this library
struct Frozen {
    int n;
    double g;
};
const Frozen kFft[] = {
    {-3, -0.02510722359}, {-2, -0.04682826979}, {-1, -0.10666483605}, {0, -0.46019555280},
    {1, 0.79947337094},   {2, 0.28480263940},   {3, 0.16599161516},   {4, 0.11028715510},
    {5, 0.07780996442},   {6, 0.05680348543},   {7, 0.04238716287},   {8, 0.03211446797},
    {9, 0.02460427096},
};

}  // namespace

TEST_CASE("constants") {
    CHECK(std::abs(solve_lambda() - 0.822168391594620243) < 1e-12);
    CHECK(std::abs(lambda_residual(solve_lambda())) <= 1e-10);
    CHECK(lambda_residual(0.0) == doctest::Approx(-1.0).epsilon(1e-10));
    auto tau = solve_tau_full();
    CHECK(std::abs(tau.tau - 0.328674162908546217) < 1e-12);
    CHECK(std::abs(tau.theta - 1.90569572930988389) < 1e-12);
    CHECK(std::abs(tau.residual) <= 1e-10);
    CHECK(tau.theta > kPi / 2);
    CHECK(tau.theta < kPi);
    double l = solve_lambda();
    CHECK(decay_ratio() == doctest::Approx(2 * l / (1 + l * l)));
    CHECK(symbol(0.0) == Complex(1.0, 0.0));
    for (double u : {0.1, 0.37, 0.5, 0.93}) {
        CHECK(std::abs(std::abs(symbol(u)) - 1) < 1e-15);
        CHECK(symbol(-u) == std::conj(symbol(u)));
        CHECK(std::abs(symbol(u + 3) - symbol(u)) < 1e-14);
    }
}

TEST_CASE("fourier coefficients match the frozen FFT values by both methods") {
    for (auto& f : kFft) {
        CAPTURE(f.n);
        CHECK(std::abs(fourier_quadrature(f.n) - f.g) < 1e-10);
        CHECK(std::abs(fourier_series(f.n) - f.g) < 1e-10);
    }
    double g1 = fourier_series(1);
    CHECK(std::abs(g1 - 0.7994) < 5e-4);
    CHECK(std::abs(fourier_series(0) - (1 + (g1 - 2) / solve_lambda())) < 1e-6);
    for (int n = -20; n <= 20; ++n) CHECK(std::abs(fourier_quadrature(n) - fourier_series(n)) <= 1e-8);
    CHECK_THROWS_AS(fourier_quadrature(65), DomainError);
    CHECK_THROWS_AS(fourier_series(-65), DomainError);
    CHECK_THROWS_AS(fourier_table(65, Method::quadrature), DomainError);
}

TEST_CASE("h coefficients") {
    for (int m = 0; m <= 60; ++m) CHECK(h_coefficient(m) == h_coefficient(-m));
    for (int n = 1; n <= 30; ++n) CHECK(h_coefficient(n + 1) < h_coefficient(n - 1));
    // the series stays finite and decays far out
    CHECK(h_coefficient(3000) > 0);
    CHECK(h_coefficient(3000) < 1e-20);
}

TEST_CASE("fourier table properties") {
    auto big = fourier_table(2000, Method::series);
    double sum = 0, sq = 0;
    for (int n = -2000; n <= 2000; ++n) {
        sum += big.real(n);
        sq += big.real(n) * big.real(n);
    }
    CHECK(std::abs(sum - 1) <= 1e-6);
    double sq40 = 0;
    for (int n = -40; n <= 40; ++n) sq40 += big.real(n) * big.real(n);
    CHECK(std::abs(sq40 - 1) <= 1e-6);
    CHECK(std::abs(sq - 1) <= 1e-10);
    for (int j = 0; j < 64; ++j) {
        double u = (j + 0.5) / 64;
        Complex s = 0;
        for (int n = -2000; n <= 2000; ++n) s += big.real(n) * expi2pi(n * u);
        CHECK(std::abs(s - symbol(u)) <= 1e-6);
    }
    for (int n = -2000; n <= 2000; ++n) CHECK(std::abs(big.at(n)) <= 1.0);
    // a slice of a cached wider table equals a fresh narrow one
    auto narrow = fourier_table(12, Method::series);
    for (int n = -12; n <= 12; ++n) CHECK(std::abs(narrow.at(n) - big.at(n)) < 1e-15);
    CHECK_THROWS_AS(big.at(2001), DomainError);
}

TEST_CASE("explicit decay bound") {
    for (int n = 2; n <= 64; ++n) {
        CHECK(std::abs(fourier_series(n)) <= decay_bound(n));
        CHECK(std::abs(fourier_series(-n)) <= decay_bound(-n));
        CHECK(std::abs(fourier_series(n)) <= std::pow(0.99, n));
    }
    CHECK_THROWS_AS(decay_bound(1), DomainError);
}

TEST_CASE("lemma clauses") {
    auto r = lemma_fourier_checks(40);
    CHECK(r.all_pass());
    REQUIRE(r.clauses.size() == 5);
    for (auto& c : r.clauses) CHECK(c.pass);
    CHECK(std::abs(r.identity_residual) <= 1e-8);
    CHECK(r.dual_method_gap <= 1e-8);
    double g1 = fourier_series(1), g2 = fourier_series(2);
    CHECK(g1 - g2 > 0.25);
    CHECK(std::abs(g1 - g2 - 0.5146) < 1e-3);
    CHECK(fourier_series(0) < g1 - 1);
    CHECK(std::abs(fourier_series(0) + 0.460) < 1e-3);
    CHECK(std::abs(g1 - 1 + 0.2005) < 1e-3);
}

TEST_CASE("building f_t") {
    auto f = build_ft(0.2, 1'000'000);
    CHECK(std::abs(f.at(2, 1) - symbol(0.2 * std::log(2.0) / kTwoPi)) < 1e-15);
    auto tiny = build_ft(1e-6, 1000);
    CHECK(std::abs(tiny.at(2, 1) - 1.0) < 1e-5);
    // recursion instance m = 2
    for (std::int64_t p : {2, 3, 31, 997}) {
        double lp = std::log(double(p));
        Complex a = symbol(0.2 * lp / kTwoPi), b = symbol(0.2 * 2 * lp / kTwoPi);
        CHECK(std::abs(f.at(p, 2) - 0.5 * (a * a + b)) < 1e-15);
    }
    // every prime power up to 1e6 stays in the disc
    auto primes = analytic::primes_upto(1000);
    for (auto p : primes->primes) {
        if (p > 1000) break;
        std::int64_t pk = p;
        for (int m = 1; pk <= 1'000'000; ++m, pk *= p) CHECK(std::abs(f.at(p, m)) <= 1 + 1e-12);
    }
    // f_{-t} is the conjugate of f_t, bit for bit
    auto g = build_ft(-0.2, 100'000);
    for (std::int64_t p : {2, 3, 5, 7, 101, 307})
        for (int m = 1; m <= 5; ++m) CHECK(g.at(p, m) == std::conj(f.at(p, m)));
    CHECK(ft_prime_power(0.2, 5, 3) == f.at(5, 3));
    CHECK_THROWS_AS(build_ft(0.0, 100), DomainError);
    CHECK_THROWS_AS(build_ft(1.5, 100), DomainError);
}

TEST_CASE("direct log sums") {
    auto one = pretentious::constant_one();
    CHECK(std::abs(log_sum_direct(one, 100) - 5.18737751763962026081) < 1e-13);
    CHECK(log_sum_direct(one, 1) == Complex(1.0));
    auto tw = pretentious::twist(0.3);
    Complex oracle = 0;
    for (std::int64_t n = 1; n <= 100'000; ++n) oracle += std::polar(1.0 / double(n), 0.3 * std::log(double(n)));
    CHECK(std::abs(log_sum_direct(tw, 100'000) - oracle) < 1e-9);
    CHECK_THROWS_AS(log_sum_direct(one, kLogSumCap + 1), CapacityError);
}

TEST_CASE("shift constants") {
    double tail = 0;
    Complex c = shift_constant(1, 1.0, kDefaultK, &tail);
    CHECK(tail < 1e-8);
    double tail2 = 0;
    Complex c2 = shift_constant(1, 1.0, 3000, &tail2);
    CHECK(std::abs(std::log(c) - std::log(c2)) <= tail);
    CHECK(shift_constant(1, -1.0, kDefaultK) == std::conj(shift_constant(1, 1.0, kDefaultK)));
    CHECK_THROWS_AS(shift_constant(1, 1.0, 10), DomainError);
}

TEST_CASE("main term") {
    auto r = main_term(0.2, 1'000'000, kDefaultK, false);
    REQUIRE(r.argmax_set.size() == 1);
    CHECK(r.argmax_set[0] == 1);
    CHECK(r.gap >= 1.0 / 25);
    CHECK(r.entries[0].C_tail_bound < 1e-8);
    CHECK(r.growth_ratio >= 1.0 / 3);
    CHECK(r.growth_ratio <= 3);
    CHECK_FALSE(r.direct.has_value());
    // the desk-scale window [3/log log X, 0.3] is empty, so it always warns
    CHECK_FALSE(r.warnings.empty());
    auto small = main_term(0.01, 10'000, kDefaultK, false);
    bool regime = false;
    for (auto& w : small.warnings)
        if (w.find("< 10") != std::string::npos) regime = true;
    CHECK(regime);
    // t -> -t conjugates the main term
    auto neg = main_term(-0.2, 1'000'000, kDefaultK, false);
    CHECK(std::abs(neg.main_total - std::conj(r.main_total)) < 1e-12 * std::abs(r.main_total));
    CHECK_THROWS_AS(main_term(0.0, 1000), DomainError);
    CHECK_THROWS_AS(main_term(0.2, 1000, 5), DomainError);
    auto full = main_term(0.2, 100'000);
    REQUIRE(full.ratio.has_value());
    CHECK(*full.ratio_modulus == doctest::Approx(std::abs(*full.ratio)));
}

TEST_CASE("zeta shift products") {
    Complex a = zeta_shift_product(1, 0.1, 200), b = zeta_shift_product(1, -0.1, 200);
    CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
    Complex c = zeta_shift_product(1, 0.1, 400);
    CHECK(std::abs(c / a - 1.0) < 1e-6);
    double prev = 1e9;
    for (double t : {0.1, 0.05, 0.025}) {
        auto p = prodest_check(1, t, 200);
        CHECK(p.deviation <= 10 * t);
        CHECK(p.deviation < prev);
        prev = p.deviation;
    }
    CHECK_THROWS_AS(zeta_shift_product(1, 0.0, 10), DomainError);
}

TEST_CASE("sharpness report") {
    auto r = sharpness_report(0.2, 1'000'000);
    CHECK(r.ratio >= 0.1);
    CHECK(r.ratio <= 10);
    CHECK(r.d2_y <= 2);
    CHECK(std::abs(r.identity_residual) <= 1e-8);
    CHECK(r.y_t == doctest::Approx(std::exp(5.0)));
}

TEST_CASE("convolution inverse") {
    const double t = 0.2;
    auto ft = build_ft(t, 1'000'000);
    auto same = conv_inverse_check(ft, t, 1000, 8);
    CHECK(same.pass);
    CHECK(same.max_h_prime <= 1e-15);
    CHECK(same.worst_power_ratio <= 1e-14);
    CHECK(std::abs(same.H - 1.0) < 1e-12);

    auto cm = pretentious::from_prime_values(
        "cm", [t](std::int64_t p) { return symbol(t * std::log(double(p)) / kTwoPi); });
    auto r = conv_inverse_check(cm, t, 1000, 8);
    CHECK(r.pass);
    CHECK(r.min_factor_slack >= 0);
    // h(p^2) = f_t(p)^2 - f_t(p^2) by hand at p = 3
    Complex fp = ft.at(3, 1);
    Complex h2 = fp * fp - ft.at(3, 2);
    CHECK(std::abs(h2) <= 2);
    CHECK(r.worst_power_ratio <= 1);

    auto wrong = pretentious::constant_one();
    CHECK_THROWS_AS(conv_inverse_check(wrong, t, 100, 3), PreconditionError);
}
