#include <cmath>
#include <random>

#include "doctest.h"
#include "pretlab/charsums.hpp"
#include "pretlab/errors.hpp"

using namespace pretlab;
using namespace pretlab::charsums;
using characters::build_group;
using characters::DirichletCharacter;
using characters::enumerate;

namespace {

DirichletCharacter quad3() { return DirichletCharacter(build_group(3), {1}); }
DirichletCharacter quad4() { return DirichletCharacter(build_group(4), {1}); }

Complex direct_sum(const DirichletCharacter& chi, std::int64_t N) {
    Complex s = 0;
    for (std::int64_t n = 1; n <= N; ++n) s += chi.eval(n);
    return s;
}

}  // namespace

TEST_CASE("partial sums") {
    CHECK(std::abs(partial_sum(quad3(), 2)) < 1e-15);
    CHECK(partial_sum(quad3(), 0) == Complex(0, 0));
    for (auto& chi : enumerate(build_group(5), {{}, 4, {}})) CHECK(std::abs(partial_sum(chi, 5)) < 1e-14);
    for (auto& chi : enumerate(build_group(84)))
        for (std::int64_t N : {1, 7, 83, 84, 85, 1000, 12345})
            CHECK(std::abs(partial_sum(chi, N) - direct_sum(chi, N)) < 1e-9);
    for (std::int64_t q = 2; q <= 500; q += 7)
        for (auto& chi : enumerate(build_group(q)))
            if (!chi.is_principal()) CHECK(std::abs(partial_sum(chi, q)) < 1e-10);
}

TEST_CASE("max partial") {
    auto m3 = max_partial(quad3());
    CHECK(m3.M == doctest::Approx(1.0));
    CHECK(m3.argmax == 1);
    for (std::int64_t q : {5, 13, 64, 97, 210}) {
        for (auto& chi : enumerate(build_group(q))) {
            double best = 0;
            std::int64_t arg = 0;
            Complex s = 0;
            for (std::int64_t N = 1; N <= q; ++N) {
                s += chi.eval(N);
                if (std::abs(s) > best + 1e-12) {
                    best = std::abs(s);
                    arg = N;
                }
            }
            auto m = max_partial(chi);
            CHECK(m.M == doctest::Approx(best).epsilon(1e-12));
            CHECK(m.argmax == arg);
            CHECK(m.M >= 1.0 - 1e-12);
            CHECK(max_partial(characters::conj(chi)).M == m.M);
        }
    }
    // Polya-Vinogradov with constant 1 at this scale
    for (std::int64_t q = 3; q <= 200; ++q)
        for (auto& chi : enumerate(build_group(q), {{}, {}, true}))
            CHECK(max_partial(chi).M <= std::sqrt(double(q)) * std::log(double(q)));
}

TEST_CASE("harmonic sums and L-values") {
    CHECK(std::abs(harmonic_partial(characters::principal(1), 10) - 2.9289682539682539683) < 1e-14);
    double l3 = kPi / (3 * std::sqrt(3.0)), l4 = kPi / 4;
    CHECK(std::abs(harmonic_partial(quad3(), 1'000'000) - l3) < 2e-6);
    CHECK(std::abs(harmonic_partial(quad4(), 1'000'000) - l4) < 2e-6);
    // coprime_to filter against a direct loop
    auto chi = enumerate(build_group(7))[3];
    Complex d = 0;
    for (std::int64_t n = 1; n <= 5000; ++n)
        if (std::gcd(n, std::int64_t(10)) == 1) d += chi.eval(n) * std::pow(double(n), -1.0) * std::polar(1.0, -0.3 * std::log(double(n)));
    CHECK(std::abs(harmonic_partial(chi, 5000, 0.3, 10) - d) < 1e-12);

    auto tr = L_truncated(quad3(), 0, 1000);
    CHECK(tr.M == 1.0);
    CHECK(tr.error_bound == doctest::Approx(0.002));
    CHECK(std::abs(tr.value - l3) <= tr.error_bound);
    auto t4 = L_truncated(quad4(), 1.0, 100'000);
    CHECK(t4.error_bound == doctest::Approx(3.0 / 100'000));
    CHECK_THROWS_AS(L_truncated(characters::principal(5), 0, 10), PreconditionError);
    for (std::int64_t q = 3; q <= 100; q += 3)
        for (auto& c : enumerate(build_group(q))) {
            if (c.is_principal()) continue;
            for (std::int64_t N : {100, 1000}) {
                auto a = L_truncated(c, 0.5, N), b = L_truncated(c, 0.5, 10 * N);
                CHECK(std::abs(a.value - b.value) <= a.error_bound);
            }
        }
}

TEST_CASE("sum series checkpoints") {
    auto chi = enumerate(build_group(101))[17];
    std::vector<std::int64_t> cps{10, 333, 5000};
    for (auto w : {Weight::flat, Weight::harmonic}) {
        auto s = sum_series(chi, 5000, w, 0.7, cps);
        REQUIRE(s.prefix.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            Complex d = 0;
            for (std::int64_t n = 1; n <= cps[i]; ++n)
                d += chi.eval(n) * (w == Weight::flat ? Complex(1.0)
                                                      : std::polar(1.0 / double(n), -0.7 * std::log(double(n))));
            CHECK(std::abs(s.prefix[i] - d) < 1e-9);
        }
    }
    auto walk = partial_walk(enumerate(build_group(163))[5], 163);
    CHECK(walk.size() == 163);
    CHECK(walk.back() < 1e-10);
}

TEST_CASE("euler product proxy") {
    double l3 = kPi / (3 * std::sqrt(3.0));
    CHECK(std::abs(std::abs(L_euler_proxy(quad3(), 0, 1'000'000)) / l3 - 1) < 0.02);
    double h = 0;
    for (int n = 1; n <= 100'000; ++n) h += 1.0 / n;
    double r = std::abs(L_euler_proxy(characters::principal(1), 0, 100'000)) / h;
    CHECK(r >= 0.5);
    CHECK(r <= 2.0);
}

TEST_CASE("find N_q") {
    auto r = find_Nq(quad3(), characters::principal(1));
    CHECK(r.N == 1);
    CHECK(r.value == doctest::Approx(1.0));
    auto chi = enumerate(build_group(31))[7];
    auto same = find_Nq(chi, chi);
    CHECK(same.N == 31 - 1);
    double h = 0;
    for (int n = 1; n < 31; ++n) h += 1.0 / n;
    CHECK(same.value == doctest::Approx(h).epsilon(1e-12));
    for (auto& c : enumerate(build_group(43))) {
        auto v = find_Nq(c, characters::principal(1));
        CHECK(v.value + 1e-12 >= std::abs(harmonic_partial(c, 43)));
    }
}

TEST_CASE("polya expansion") {
    auto chi = quad3();
    CHECK(std::abs(polya_rhs(chi, 0.0)) < 1e-15);
    CHECK(std::abs(polya_rhs(chi, 1.0 / 3) - partial_sum(chi, 1)) <= 10 * std::log(3.0));
    CHECK_THROWS_AS(polya_rhs(characters::induce(chi, 12), 0.3), PreconditionError);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& c : enumerate(build_group(101), {1, {}, true})) {
        double a = u(rng);
        CHECK(std::abs(std::abs(polya_rhs(c, a)) - std::abs(polya_rhs(c, 1 - a))) < 1e-8);
    }
}

TEST_CASE("arc classification") {
    auto half = classify_arc(0.5, 1'000'000, 0.8);
    CHECK(half.m == 2);
    CHECK(half.b == 1);
    CHECK(half.type == ArcType::major);
    CHECK(half.N_alpha == 1'000'000);
    double golden = (std::sqrt(5.0) - 1) / 2;
    // with Delta = 0.8 every admissible m is below r_q at q = 1e6
    auto g8 = classify_arc(golden, 1'000'000, 0.8);
    CHECK(g8.R_q < g8.r_q);
    CHECK(g8.type == ArcType::major);
    auto g99 = classify_arc(golden, 1'000'000, 0.99);
    CHECK(g99.type == ArcType::minor);
    CHECK(g99.m > g99.r_q);
    auto exact = classify_arc(3.0 / 7, 1'000'000, 0.8);
    CHECK(exact.m == 7);
    CHECK(exact.type == ArcType::major);
    CHECK(exact.N_alpha == 1'000'000);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 10'000; ++i) {
        double a = u(rng);
        auto c = classify_arc(a, 1'000'000, 0.9);
        CHECK(double(c.m) <= c.R_q);
        CHECK(std::abs(a - double(c.b) / double(c.m)) < 1 / (double(c.m) * c.R_q));
        CHECK((c.type == ArcType::major) == (double(c.m) <= c.r_q));
        CHECK(std::gcd(c.b, c.m) == 1);
    }
}

TEST_CASE("M(chi) ratio report") {
    auto rep = mchi_ratio_report(characters::jacobi_character(43), characters::principal(1));
    REQUIRE(rep.tau_interval_ok.has_value());
    CHECK(rep.upper_bound.has_value());
    CHECK(rep.lower_bound.has_value());
    CHECK(rep.max_harmonic >= 1.0);
    CHECK(std::isfinite(rep.ratio));
    CHECK(*rep.lower_bound <= rep.M);
    CHECK(rep.M <= *rep.upper_bound);
    auto xi = DirichletCharacter(build_group(5), {2});
    auto chi = characters::multiply(enumerate(build_group(7))[1], xi);
    auto r2 = mchi_ratio_report(chi, xi);
    REQUIRE(r2.tau.has_value());
    CHECK(*r2.tau >= 1.0);
    CHECK(*r2.tau <= 2.0);
    auto psi = characters::multiply(chi, characters::conj(xi));
    CHECK(*r2.tau == doctest::Approx(std::max(1.0, std::abs(1.0 - psi.eval(2)))));
}

TEST_CASE("quadratic non-residue chain") {
    CHECK(least_nonresidue(3) == 2);
    CHECK(least_nonresidue(43) == 2);  // 43 = 3 mod 8
    CHECK(least_nonresidue(23) == 5);
    auto r = qr_lower_bound(43, 1);
    CHECK(r.n_q == 2);
    CHECK(r.tau == 0.5);
    CHECK(r.c == doctest::Approx(0.41298).epsilon(1e-4));
    CHECK(r.chain_holds);
    CHECK(r.decomposition == doctest::Approx(2 * r.smooth_sum - r.all_sum));
    // q = 71: n_q = 7, so l = 3 and 5 are admissible and their primes are <= y
    for (std::int64_t l : {3, 5}) {
        auto s = qr_lower_bound(71, l);
        CHECK(s.n_q == 7);
        CHECK(s.identity_applicable);
        CHECK(std::abs(s.mobius_form - s.decomposition) < 1e-12);
        CHECK(s.tau == 1.0);  // 71 = 7 mod 8
        CHECK(s.bound_holds);
    }
    CHECK_THROWS_AS(qr_lower_bound(13, 1), PreconditionError);
    CHECK_THROWS_AS(qr_lower_bound(15, 1), PreconditionError);
    CHECK_THROWS_AS(qr_lower_bound(43, 9), PreconditionError);
    CHECK_THROWS_AS(qr_lower_bound(43, 43), PreconditionError);
}
