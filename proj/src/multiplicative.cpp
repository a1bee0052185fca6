#include "pretlab/multiplicative.hpp"

#include <cmath>

#include "pretlab/errors.hpp"
#include "pretlab/parallel.hpp"

namespace pretlab::pretentious {

MultiplicativeFunction::MultiplicativeFunction(std::string label, PowerFn fn, bool completely,
                                               bool bounded)
    : label_(std::move(label)), fn_(std::move(fn)), completely_(completely), bounded_(bounded) {}

Complex MultiplicativeFunction::at(std::int64_t p, int k) const {
    if (k == 0) return {1.0, 0.0};
    Complex v = fn_(p, k);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError(label_ + ": non-finite value at a prime power");
    if (bounded_ && std::abs(v) > 1.0 + 1e-12)
        throw UnitDiscError(label_ + ": |f(" + std::to_string(p) + "^" + std::to_string(k) +
                            ")| = " + std::to_string(std::abs(v)) + " > 1");
    return v;
}

Complex MultiplicativeFunction::operator()(std::int64_t n) const {
    if (n < 1) throw DomainError("multiplicative functions are defined on n >= 1");
    Complex v = 1.0;
    for (auto& pp : analytic::factorize(n)) v *= at(pp.p, pp.e);
    return v;
}

MultiplicativeFunction constant_one() {
    return {"one", [](std::int64_t, int) { return Complex(1.0, 0.0); }, true};
}

MultiplicativeFunction liouville() {
    return {"liouville", [](std::int64_t, int k) { return Complex(k % 2 ? -1.0 : 1.0, 0.0); },
            true};
}

MultiplicativeFunction mobius() {
    return {"mobius", [](std::int64_t, int k) { return Complex(k == 1 ? -1.0 : 0.0, 0.0); },
            false};
}

MultiplicativeFunction twist(double t) {
    return {"twist(" + std::to_string(t) + ")",
            [t](std::int64_t p, int k) { return std::polar(1.0, t * k * std::log(double(p))); },
            true};
}

MultiplicativeFunction from_character(const characters::DirichletCharacter& chi) {
    return {"char(" + chi.label() + ")",
            [chi](std::int64_t p, int k) {
                auto idx = chi.index(p);
                if (idx < 0) return Complex(0, 0);
                return chi.root(idx * k % chi.order());
            },
            true};
}

MultiplicativeFunction from_prime_values(std::string label,
                                         std::function<Complex(std::int64_t)> fp) {
    return {std::move(label),
            [fp](std::int64_t p, int k) {
                Complex z = fp(p), r = 1.0;
                for (int i = 0; i < k; ++i) r *= z;
                return r;
            },
            true};
}

MultiplicativeFunction divisor_sum(const MultiplicativeFunction& f) {
    return {"1*" + f.label(),
            [f](std::int64_t p, int k) {
                Complex s = 1.0;
                for (int j = 1; j <= k; ++j) s += f.at(p, j);
                return s;
            },
            false, false};
}

std::vector<Complex> values_in_block(const MultiplicativeFunction& f, std::int64_t lo,
                                     std::int64_t hi) {
    if (lo < 1 || hi < lo) throw DomainError("values_in_block needs 1 <= lo <= hi");
    std::size_t len = std::size_t(hi - lo);
    std::vector<Complex> val(len, Complex(1.0, 0.0));
    std::vector<std::int64_t> rem(len);
    for (std::size_t i = 0; i < len; ++i) rem[i] = lo + std::int64_t(i);
    std::int64_t root = std::int64_t(std::sqrt(double(hi))) + 1;
    auto tab = analytic::primes_upto(std::max<std::int64_t>(root, 2));
    for (auto pu : tab->primes) {
        std::int64_t p = pu;
        if (p * p >= hi) break;
        std::int64_t start = (lo + p - 1) / p * p;
        for (std::int64_t m = start; m < hi; m += p) {
            std::size_t i = std::size_t(m - lo);
            int e = 0;
            while (rem[i] % p == 0) {
                rem[i] /= p;
                ++e;
            }
            val[i] *= f.at(p, e);
        }
    }
    for (std::size_t i = 0; i < len; ++i)
        if (rem[i] > 1) val[i] *= f.at(rem[i], 1);
    return val;
}

namespace {
constexpr std::int64_t kBlock = 1 << 15;
}

std::vector<Complex> values_upto(const MultiplicativeFunction& f, std::int64_t X) {
    if (X < 1) return {Complex(0, 0)};
    std::size_t nb = std::size_t((X + kBlock - 1) / kBlock);
    auto parts = map_blocks<std::vector<Complex>>(nb, [&](std::size_t b) {
        std::int64_t lo = std::int64_t(b) * kBlock + 1;
        std::int64_t hi = std::min<std::int64_t>(X + 1, lo + kBlock);
        return values_in_block(f, lo, hi);
    });
    std::vector<Complex> out;
    out.reserve(std::size_t(X) + 1);
    out.push_back(Complex(0, 0));
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

Complex weighted_sum(const MultiplicativeFunction& f, std::int64_t X,
                     const std::function<double(std::int64_t)>& w) {
    if (X < 1) return {0.0, 0.0};
    std::size_t nb = std::size_t((X + kBlock - 1) / kBlock);
    struct S {
        long double re = 0, im = 0;
    };
    auto parts = map_blocks<S>(nb, [&](std::size_t b) {
        std::int64_t lo = std::int64_t(b) * kBlock + 1;
        std::int64_t hi = std::min<std::int64_t>(X + 1, lo + kBlock);
        auto v = values_in_block(f, lo, hi);
        S s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            double wi = w(lo + std::int64_t(i));
            s.re += v[i].real() * wi;
            s.im += v[i].imag() * wi;
        }
        return s;
    });
    S tot;
    for (auto& p : parts) {
        tot.re += p.re;
        tot.im += p.im;
    }
    return {double(tot.re), double(tot.im)};
}

}  // namespace pretlab::pretentious
