#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pretlab/analytic.hpp"

namespace pretlab::characters {

inline constexpr std::int64_t kGroupCap = 10'000'000;

// One cyclic factor of (Z/qZ)^*.
struct Component {
    std::int64_t p;          // prime of the block it lives in
    std::int64_t modulus;    // p^e
    std::int64_t order;      // cyclic order
    std::int64_t generator;  // generator mod p^e (-1 encoded as modulus-1)
    int block;               // index into CharacterGroup::blocks
    int slot;                // 0, or 1 for the 5-component mod 2^e
};

// Discrete-log data for one prime power p^e || q.
struct Block {
    std::int64_t p;
    int e;
    std::int64_t pe;
    // for odd p: log to the generator, -1 on non-units.
    // mod 2^e, e>=3: a + 2b where r = (-1)^a 5^b.  mod 4: a.  mod 2: 0.
    std::vector<std::int32_t> log;
    std::vector<int> comps;
};

class CharacterGroup {
public:
    explicit CharacterGroup(std::int64_t q);

    std::int64_t modulus() const { return q_; }
    std::int64_t size() const { return phi_; }
    /// lcm of component orders
    std::int64_t exponent() const { return exponent_; }
    const std::vector<Component>& components() const { return comps_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    /// component logs of n (all -1 if gcd(n,q) > 1); returns false on non-units
    bool logs(std::int64_t n, std::vector<std::int64_t>& out) const;

    /// element of (Z/qZ)^* that is the generator of component i and 1 elsewhere
    std::int64_t lifted_generator(int i) const;

private:
    std::int64_t q_;
    std::int64_t phi_;
    std::int64_t exponent_ = 1;
    std::vector<Block> blocks_;
    std::vector<Component> comps_;
};

using GroupPtr = std::shared_ptr<const CharacterGroup>;

/// Groups are cached per modulus; the returned pointer is shareable.
GroupPtr build_group(std::int64_t q);

// A value e(k/order) of a character, kept as an exact residue.
struct RootIndex {
    std::int64_t k;
    std::int64_t order;
};

class DirichletCharacter {
public:
    DirichletCharacter(GroupPtr g, std::vector<std::int64_t> exps);

    const CharacterGroup& group() const { return *group_; }
    const GroupPtr& group_ptr() const { return group_; }
    std::int64_t modulus() const { return group_->modulus(); }
    const std::vector<std::int64_t>& exponents() const { return exps_; }
    std::int64_t order() const { return order_; }
    std::int64_t conductor() const { return conductor_; }
    int parity() const { return parity_; }
    bool is_primitive() const { return conductor_ == modulus(); }
    bool is_principal() const { return order_ == 1; }
    bool is_real() const { return order_ <= 2; }

    /// exponent k with chi(n) = e(k/order), or -1 if gcd(n,q) > 1
    std::int64_t index(std::int64_t n) const;
    Complex root(std::int64_t k) const;
    Complex eval(std::int64_t n) const;

    std::string label() const;

private:
    GroupPtr group_;
    std::vector<std::int64_t> exps_;
    std::vector<std::int64_t> weights_;  // exponent()/n_i * e_i reduced, scaled to order_
    std::int64_t order_ = 1;
    std::int64_t conductor_ = 1;
    int parity_ = 1;
    std::shared_ptr<const std::vector<Complex>> roots_;
};

Complex eval(const DirichletCharacter& chi, std::int64_t n);

DirichletCharacter principal(std::int64_t q);
DirichletCharacter conj(const DirichletCharacter& chi);

/// chi1 * chi2 as a character mod lcm of the moduli.
DirichletCharacter multiply(const DirichletCharacter& a, const DirichletCharacter& b);

/// chi viewed mod a multiple Q of its modulus.
DirichletCharacter induce(const DirichletCharacter& chi, std::int64_t Q);

struct PrimitiveInfo {
    std::int64_t conductor;
    DirichletCharacter primitive;
};
PrimitiveInfo conductor_and_primitive(const DirichletCharacter& chi);

/// Sum over a mod q of chi(a) e(a/q), direct.
Complex gauss_sum(const DirichletCharacter& chi);

struct Filter {
    std::optional<int> parity;
    std::optional<std::int64_t> order;
    std::optional<bool> primitive;
};
std::vector<DirichletCharacter> enumerate(const GroupPtr& g, const Filter& f = {});

/// The product of Legendre symbols over p | m, for odd squarefree m.
DirichletCharacter jacobi_character(std::int64_t m);

std::string format_label(std::int64_t q, const std::vector<std::int64_t>& exps);
DirichletCharacter parse_label(const std::string& label);

}  // namespace pretlab::characters
