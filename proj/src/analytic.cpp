#include "pretlab/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "pretlab/errors.hpp"

namespace pretlab {

Complex expi2pi(double x) {
    // nearest-integer reduction keeps e(-x) == conj(e(x)) bit for bit
    double r = x - std::round(x);
    double a = kTwoPi * r;
    return {std::cos(a), std::sin(a)};
}

namespace analytic {

namespace {

std::vector<std::uint32_t> simple_sieve(std::uint32_t n) {
    std::vector<char> comp(n + 1, 0);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = std::uint64_t(i) * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

}  // namespace

PrimeTable sieve_primes(std::int64_t limit, std::int64_t cap) {
    if (limit < 2 || limit > cap)
        throw CapacityError("sieve limit " + std::to_string(limit) + " outside [2, " +
                            std::to_string(cap) + "]");
    PrimeTable t;
    t.limit = limit;
    double est = limit / std::max(1.0, std::log(double(limit)) - 1.1);
    t.primes.reserve(std::size_t(est * 1.05) + 16);
    t.primes.push_back(2);

    auto root = std::uint32_t(std::sqrt(double(limit)));
    while (std::int64_t(root + 1) * (root + 1) <= limit) ++root;
    auto base = simple_sieve(root);

    // segment holds odd numbers lo, lo+2, ...
    const std::int64_t seg_odds = 1 << 18;
    std::vector<char> mark(seg_odds);
    for (std::int64_t lo = 3; lo <= limit; lo += 2 * seg_odds) {
        std::int64_t hi = std::min(limit, lo + 2 * seg_odds - 2);
        std::int64_t count = (hi - lo) / 2 + 1;
        std::fill(mark.begin(), mark.begin() + count, 0);
        for (std::size_t i = 1; i < base.size(); ++i) {
            std::int64_t p = base[i];
            if (p * p > hi) break;
            std::int64_t start = std::max(p * p, (lo + p - 1) / p * p);
            if (start % 2 == 0) start += p;
            for (std::int64_t m = start; m <= hi; m += 2 * p) mark[(m - lo) / 2] = 1;
        }
        for (std::int64_t i = 0; i < count; ++i)
            if (!mark[i]) t.primes.push_back(std::uint32_t(lo + 2 * i));
    }
    return t;
}

std::shared_ptr<const PrimeTable> primes_upto(std::int64_t limit) {
    static std::mutex mu;
    static std::shared_ptr<const PrimeTable> cached;
    std::lock_guard<std::mutex> lock(mu);
    if (cached && cached->limit >= limit) return cached;
    std::int64_t want = std::max<std::int64_t>(limit, 1 << 16);
    if (cached) want = std::max(want, std::min<std::int64_t>(2 * cached->limit, kSieveCap));
    want = std::max(limit, std::min(want, kSieveCap));
    cached = std::make_shared<const PrimeTable>(sieve_primes(want));
    return cached;
}

double prime_reciprocal_sum(std::int64_t x, const std::function<double(std::uint32_t)>& weight) {
    if (x < 2) throw DomainError("prime_reciprocal_sum needs x >= 2");
    auto tab = primes_upto(x);
    long double s = 0;
    for (auto p : tab->primes) {
        if (p > x) break;
        double w = weight ? weight(p) : 1.0;
        s += (long double)w / p;
    }
    return double(s);
}

// ---------------------------------------------------------------- zeta

namespace {

// B_{2k}/(2k)! for k = 1..9
constexpr std::array<double, 9> kBernFact = {
    1.0 / 6 / 2,
    -1.0 / 30 / 24,
    1.0 / 42 / 720,
    -1.0 / 30 / 40320,
    5.0 / 66 / 3628800,
    -691.0 / 2730 / 479001600,
    7.0 / 6 / 87178291200.0,
    -3617.0 / 510 / 20922789888000.0,
    43867.0 / 798 / 6402373705728000.0,
};

constexpr int kEMOrder = 8;

// returns value and an estimate of the remainder
std::pair<Complex, double> zeta_em(Complex s, std::int64_t N) {
    Complex sum = 0;
    // small terms first
    for (std::int64_t n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log(double(n)));
    double lnN = std::log(double(N));
    Complex Ns = std::exp(-s * lnN);  // N^{-s}
    sum += Ns * double(N) / (s - 1.0);
    sum += 0.5 * Ns;
    Complex rising = s;  // s(s+1)...(s+2k-2)
    Complex pw = Ns / double(N);  // N^{-s-1}
    Complex term = 0;
    for (int k = 1; k <= kEMOrder + 1; ++k) {
        term = kBernFact[k - 1] * rising * pw;
        if (k <= kEMOrder) sum += term;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        pw /= double(N) * double(N);
    }
    double sigma = s.real();
    double bound = std::abs(term) * std::abs(s + double(2 * kEMOrder + 1)) /
                   (sigma + 2 * kEMOrder + 1);
    return {sum, bound};
}

}  // namespace

Complex zeta_near_one(Complex s, double precision) {
    if (s == Complex(1.0, 0.0)) throw PoleError("zeta has a pole at s = 1");
    if (!(s.real() >= 0.5) || !(std::abs(s.imag()) <= 1e4))
        throw DomainError("zeta_near_one needs Re s >= 0.5 and |Im s| <= 1e4");
    if (!(precision > 0)) throw DomainError("precision must be positive");
    std::int64_t N = std::max<std::int64_t>(50, std::int64_t(std::ceil(10 * std::abs(s.imag()))));
    const std::int64_t Ncap = 10'000'000;
    for (;;) {
        auto [v, err] = zeta_em(s, N);
        // rounding in the direct part grows like sqrt(N) ulps of the sum
        double round = 4e-16 * std::sqrt(double(N)) * (1.0 + std::log(double(N)));
        if (err + round <= precision) return v;
        if (err <= precision && round > precision)
            throw AccuracyError("requested zeta precision below rounding floor");
        if (N >= Ncap) throw AccuracyError("zeta precision unattainable within truncation cap");
        N = std::min(Ncap, 2 * N);
    }
}

// ---------------------------------------------------------------- gamma

Complex complex_gamma(Complex z) {
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw PoleError("Gamma has a pole at a non-positive integer");
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * complex_gamma(1.0 - z));
    Complex w = z - 1.0;
    Complex a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (w + double(i));
    Complex t = w + 7.5;
    return std::sqrt(kTwoPi) * std::exp((w + 0.5) * std::log(t) - t) * a;
}

// ---------------------------------------------------------------- smooth numbers

double dickman_rho(double u) {
    if (!(u >= 0.0 && u <= 2.0)) throw DomainError("dickman_rho supported on [0,2] only");
    return u <= 1.0 ? 1.0 : 1.0 - std::log(u);
}

std::vector<std::uint32_t> largest_prime_factor_table(std::int64_t x) {
    if (x < 1 || x > kSmoothCap) throw CapacityError("largest-prime-factor table beyond cap");
    std::vector<std::uint32_t> lpf(x + 1, 0);
    if (x >= 1) lpf[1] = 1;
    for (std::int64_t p = 2; p <= x; ++p) {
        if (lpf[p] != 0) continue;
        for (std::int64_t m = p; m <= x; m += p) lpf[m] = std::uint32_t(p);
    }
    return lpf;
}

std::int64_t smooth_count(std::int64_t x, std::int64_t y) {
    if (y < 1 || y > x) throw DomainError("smooth_count needs 1 <= y <= x");
    if (x > kSmoothCap) throw CapacityError("smooth_count beyond exhaustive cap 1e7");
    auto lpf = largest_prime_factor_table(x);
    std::int64_t c = 0;
    for (std::int64_t n = 1; n <= x; ++n)
        if (lpf[n] <= y) ++c;
    return c;
}

double smooth_reciprocal_sum(std::int64_t x, std::int64_t y, std::int64_t coprime_to) {
    if (y < 1 || y > x) throw DomainError("smooth_reciprocal_sum needs 1 <= y <= x");
    if (coprime_to < 1) throw DomainError("coprime_to must be >= 1");
    if (x > kSmoothCap) throw CapacityError("smooth_reciprocal_sum beyond exhaustive cap 1e7");
    auto lpf = largest_prime_factor_table(x);
    long double s = 0;
    for (std::int64_t n = 1; n <= x; ++n)
        if (lpf[n] <= y && gcd(n, coprime_to) == 1) s += 1.0L / n;
    return double(s);
}

// ---------------------------------------------------------------- integers

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return std::uint64_t((unsigned __int128)a * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::vector<PrimePower> factorize(std::int64_t n) {
    std::vector<PrimePower> out;
    if (n < 1) throw DomainError("factorize needs n >= 1");
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        PrimePower pp{p, 0, 1};
        while (n % p == 0) {
            n /= p;
            ++pp.e;
            pp.pe *= p;
        }
        out.push_back(pp);
    }
    if (n > 1) out.push_back({n, 1, n});
    return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> d{1};
    for (auto& pp : factorize(n)) {
        std::size_t k = d.size();
        std::int64_t m = 1;
        for (int i = 1; i <= pp.e; ++i) {
            m *= pp.p;
            for (std::size_t j = 0; j < k; ++j) d.push_back(d[j] * m);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t r = n;
    for (auto& pp : factorize(n)) r = r / pp.p * (pp.p - 1);
    return r;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == std::uint64_t(n - 1)) continue;
        bool comp = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == std::uint64_t(n - 1)) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

bool is_squarefree(std::int64_t n) {
    for (auto& pp : factorize(n))
        if (pp.e > 1) return false;
    return true;
}

int mobius(std::int64_t n) {
    auto f = factorize(n);
    for (auto& pp : f)
        if (pp.e > 1) return 0;
    return (f.size() % 2) ? -1 : 1;
}

}  // namespace analytic
}  // namespace pretlab
