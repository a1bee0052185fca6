#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pretlab/analytic.hpp"
#include "pretlab/characters.hpp"

namespace pretlab::pretentious {

/**
 * Multiplicative function given by its prime-power values. Values must lie
 * in the closed unit disc unless the function was built unbounded (used for
 * divisor-type convolutions such as 1*f).
 */
class MultiplicativeFunction {
public:
    using PowerFn = std::function<Complex(std::int64_t p, int k)>;

    MultiplicativeFunction(std::string label, PowerFn fn, bool completely, bool bounded = true);

    /// f(p^k), unit-disc checked when bounded
    Complex at(std::int64_t p, int k) const;
    Complex at_prime(std::int64_t p) const { return at(p, 1); }
    /// f(n) by factorization; f(1) = 1
    Complex operator()(std::int64_t n) const;

    const std::string& label() const { return label_; }
    bool completely() const { return completely_; }
    bool bounded() const { return bounded_; }

private:
    std::string label_;
    PowerFn fn_;
    bool completely_;
    bool bounded_;
};

MultiplicativeFunction constant_one();
/// f(p) = -1, completely multiplicative
MultiplicativeFunction liouville();
/// f(p) = -1, f(p^k) = 0 for k >= 2
MultiplicativeFunction mobius();
/// n^{it}
MultiplicativeFunction twist(double t);
MultiplicativeFunction from_character(const characters::DirichletCharacter& chi);
/// completely multiplicative from prime values
MultiplicativeFunction from_prime_values(std::string label, std::function<Complex(std::int64_t)> fp);
/// 1 * f, whose prime-power values are partial sums of f(p^j); unbounded
MultiplicativeFunction divisor_sum(const MultiplicativeFunction& f);

/// f(n) for lo <= n < hi by block sieving (hi - lo modest).
std::vector<Complex> values_in_block(const MultiplicativeFunction& f, std::int64_t lo,
                                     std::int64_t hi);

/// f(1..X) as a dense vector (index 0 unused).
std::vector<Complex> values_upto(const MultiplicativeFunction& f, std::int64_t X);

/// sum_{n <= X} f(n) w(n) streamed in fixed blocks, block-ordered reduction.
Complex weighted_sum(const MultiplicativeFunction& f, std::int64_t X,
                     const std::function<double(std::int64_t)>& w);

}  // namespace pretlab::pretentious
