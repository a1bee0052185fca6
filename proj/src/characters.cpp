#include "pretlab/characters.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "pretlab/errors.hpp"

namespace pretlab::characters {

using analytic::gcd;
using analytic::mulmod;
using analytic::powmod;

namespace {

std::int64_t lcm(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

std::int64_t primitive_root_mod_p(std::int64_t p) {
    if (p == 2) return 1;
    auto fac = analytic::factorize(p - 1);
    for (std::int64_t g = 2;; ++g) {
        bool ok = true;
        for (auto& f : fac)
            if (powmod(g, (p - 1) / f.p, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
}

int vp(std::int64_t n, std::int64_t p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::int64_t modinv(std::int64_t a, std::int64_t m) {
    // extended Euclid; a, m coprime
    std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    while (a1) {
        std::int64_t qq = g / a1;
        std::tie(g, a1) = std::make_tuple(a1, g - qq * a1);
        std::tie(x, x1) = std::make_tuple(x1, x - qq * x1);
    }
    return ((x % m) + m) % m;
}

}  // namespace

// ---------------------------------------------------------------- group

CharacterGroup::CharacterGroup(std::int64_t q) : q_(q) {
    if (q < 1 || q > kGroupCap)
        throw CapacityError("character modulus " + std::to_string(q) + " outside [1, 1e7]");
    phi_ = analytic::euler_phi(q);
    for (auto& pp : analytic::factorize(q)) {
        Block b{pp.p, pp.e, pp.pe, std::vector<std::int32_t>(pp.pe, -1), {}};
        int bi = int(blocks_.size());
        if (pp.p == 2) {
            if (pp.e == 1) {
                b.log[1] = 0;
            } else if (pp.e == 2) {
                b.log[1] = 0;
                b.log[3] = 1;
                b.comps.push_back(int(comps_.size()));
                comps_.push_back({2, 4, 2, 3, bi, 0});
            } else {
                std::int64_t half = pp.pe / 4;  // order of 5
                std::int64_t x = 1;
                for (std::int64_t j = 0; j < half; ++j) {
                    b.log[x] = std::int32_t(2 * j);
                    b.log[pp.pe - x] = std::int32_t(2 * j + 1);
                    x = x * 5 % pp.pe;
                }
                b.comps.push_back(int(comps_.size()));
                comps_.push_back({2, pp.pe, 2, pp.pe - 1, bi, 0});
                b.comps.push_back(int(comps_.size()));
                comps_.push_back({2, pp.pe, half, 5, bi, 1});
            }
        } else {
            std::int64_t g = primitive_root_mod_p(pp.p);
            if (pp.e >= 2 && powmod(g, pp.p - 1, pp.p * pp.p) == 1) g += pp.p;
            std::int64_t ord = pp.pe / pp.p * (pp.p - 1);
            std::int64_t x = 1;
            for (std::int64_t j = 0; j < ord; ++j) {
                b.log[x] = std::int32_t(j);
                x = x * g % pp.pe;
            }
            b.comps.push_back(int(comps_.size()));
            comps_.push_back({pp.p, pp.pe, ord, g, bi, 0});
        }
        blocks_.push_back(std::move(b));
    }
    for (auto& c : comps_) exponent_ = lcm(exponent_, c.order);
}

bool CharacterGroup::logs(std::int64_t n, std::vector<std::int64_t>& out) const {
    out.assign(comps_.size(), -1);
    for (auto& b : blocks_) {
        std::int64_t r = ((n % b.pe) + b.pe) % b.pe;
        std::int32_t l = b.log[r];
        if (l < 0) return false;
        if (b.comps.size() == 1) {
            out[b.comps[0]] = l;
        } else if (b.comps.size() == 2) {
            out[b.comps[0]] = l & 1;
            out[b.comps[1]] = l >> 1;
        }
    }
    return true;
}

std::int64_t CharacterGroup::lifted_generator(int i) const {
    const auto& c = comps_.at(i);
    std::int64_t m = c.modulus, rest = q_ / m;
    std::int64_t v = c.generator % m;
    if (rest == 1) return v;
    // x = 1 mod rest, x = v mod m
    std::int64_t k = std::int64_t(mulmod(((v - 1) % m + m) % m, modinv(rest % m, m), m));
    return (1 + rest * k) % q_;
}

GroupPtr build_group(std::int64_t q) {
    static std::mutex mu;
    static std::map<std::int64_t, GroupPtr> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
    }
    auto g = std::make_shared<const CharacterGroup>(q);
    std::lock_guard<std::mutex> lock(mu);
    // keep small groups around; big tables are rebuilt on demand
    if (q <= 200000) {
        if (cache.size() > 4096) cache.clear();
        cache.emplace(q, g);
    }
    return g;
}

// ---------------------------------------------------------------- character

DirichletCharacter::DirichletCharacter(GroupPtr g, std::vector<std::int64_t> exps)
    : group_(std::move(g)), exps_(std::move(exps)) {
    const auto& comps = group_->components();
    if (exps_.size() != comps.size())
        throw DomainError("exponent vector length does not match the group");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        auto n = comps[i].order;
        exps_[i] = ((exps_[i] % n) + n) % n;
        order_ = lcm(order_, n / std::gcd(n, exps_[i]));
    }
    weights_.resize(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        auto n = comps[i].order;
        auto d = std::gcd(n, exps_[i]);
        weights_[i] = (exps_[i] / d) * (order_ / (n / d)) % order_;
    }

    // conductor, block by block
    conductor_ = 1;
    for (const auto& b : group_->blocks()) {
        int c = 0;
        if (b.p != 2) {
            const auto& comp = comps[b.comps[0]];
            auto o = comp.order / std::gcd(comp.order, exps_[b.comps[0]]);
            if (o > 1) c = 1 + vp(o, b.p);
        } else if (b.e == 2) {
            c = exps_[b.comps[0]] ? 2 : 0;
        } else if (b.e >= 3) {
            const auto& c5 = comps[b.comps[1]];
            auto ob = c5.order / std::gcd(c5.order, exps_[b.comps[1]]);
            if (ob == 1)
                c = exps_[b.comps[0]] ? 2 : 0;
            else
                c = vp(ob, 2) + 2;
        }
        for (int j = 0; j < c; ++j) conductor_ *= b.p;
    }

    auto k = index(-1);
    parity_ = (k == 0) ? 1 : -1;

    if (order_ <= 4096) {
        auto r = std::make_shared<std::vector<Complex>>(order_);
        for (std::int64_t j = 0; j < order_; ++j) {
            std::int64_t jj = std::min(j, order_ - j);
            double a = kTwoPi * double(jj) / double(order_);
            Complex z(std::cos(a), std::sin(a));
            (*r)[j] = (jj == j) ? z : std::conj(z);
        }
        // exact values at quarter turns
        if (order_ % 4 == 0) {
            (*r)[order_ / 4] = {0, 1};
            (*r)[3 * order_ / 4] = {0, -1};
        }
        if (order_ % 2 == 0) (*r)[order_ / 2] = {-1, 0};
        roots_ = std::move(r);
    }
}

std::int64_t DirichletCharacter::index(std::int64_t n) const {
    std::int64_t k = 0;
    for (const auto& b : group_->blocks()) {
        std::int64_t r = n % b.pe;
        if (r < 0) r += b.pe;
        std::int32_t l = b.log[r];
        if (l < 0) return -1;
        if (b.comps.size() == 1) {
            k += weights_[b.comps[0]] * l;
        } else if (b.comps.size() == 2) {
            k += weights_[b.comps[0]] * (l & 1) + weights_[b.comps[1]] * (l >> 1);
        }
        k %= order_;
    }
    return k;
}

Complex DirichletCharacter::root(std::int64_t k) const {
    if (roots_) return (*roots_)[k];
    std::int64_t jj = std::min(k, order_ - k);
    double a = kTwoPi * double(jj) / double(order_);
    Complex z(std::cos(a), std::sin(a));
    return jj == k ? z : std::conj(z);
}

Complex DirichletCharacter::eval(std::int64_t n) const {
    auto k = index(n);
    return k < 0 ? Complex(0, 0) : root(k);
}

std::string DirichletCharacter::label() const { return format_label(modulus(), exps_); }

Complex eval(const DirichletCharacter& chi, std::int64_t n) { return chi.eval(n); }

DirichletCharacter principal(std::int64_t q) {
    auto g = build_group(q);
    return DirichletCharacter(g, std::vector<std::int64_t>(g->components().size(), 0));
}

DirichletCharacter conj(const DirichletCharacter& chi) {
    auto e = chi.exponents();
    const auto& comps = chi.group().components();
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (comps[i].order - e[i]) % comps[i].order;
    return DirichletCharacter(chi.group_ptr(), e);
}

namespace {

// exponent vector on group g whose value at each lifted generator is the
// product of the given characters' values there
DirichletCharacter from_generators(const GroupPtr& g,
                                   const std::vector<const DirichletCharacter*>& parts) {
    const auto& comps = g->components();
    std::vector<std::int64_t> e(comps.size(), 0);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        std::int64_t gen = g->lifted_generator(int(i));
        std::int64_t n = comps[i].order;
        std::int64_t acc = 0;
        for (auto* chi : parts) {
            auto k = chi->index(gen);
            if (k < 0) throw DomainError("lifted generator is not a unit for a factor character");
            auto o = chi->order();
            auto d = std::gcd(k, o);
            auto num = k / d, den = o / d;
            if (n % den) throw DomainError("character value order does not divide component order");
            acc = (acc + num * (n / den)) % n;
        }
        e[i] = acc;
    }
    return DirichletCharacter(g, e);
}

}  // namespace

DirichletCharacter multiply(const DirichletCharacter& a, const DirichletCharacter& b) {
    auto Q = lcm(a.modulus(), b.modulus());
    return from_generators(build_group(Q), {&a, &b});
}

DirichletCharacter induce(const DirichletCharacter& chi, std::int64_t Q) {
    if (Q % chi.modulus()) throw DomainError("induce needs a multiple of the modulus");
    return from_generators(build_group(Q), {&chi});
}

PrimitiveInfo conductor_and_primitive(const DirichletCharacter& chi) {
    auto l = chi.conductor();
    auto g = build_group(l);
    // values at the generators mod l agree with chi on any unit lift, so
    // reading chi at a CRT lift mod q of each generator pins down psi
    const auto& comps = g->components();
    std::vector<std::int64_t> e(comps.size(), 0);
    std::int64_t q = chi.modulus();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        std::int64_t gen = g->lifted_generator(int(i));
        // lift gen mod l to a unit mod q: add multiples of l until coprime
        std::int64_t x = gen;
        while (gcd(x, q) != 1) x += l;
        auto k = chi.index(x);
        auto o = chi.order();
        auto d = std::gcd(k, o);
        auto n = comps[i].order;
        if (n % (o / d)) throw DomainError("conductor computation inconsistent");
        e[i] = (k / d) * (n / (o / d)) % n;
    }
    return {l, DirichletCharacter(g, e)};
}

Complex gauss_sum(const DirichletCharacter& chi) {
    std::int64_t q = chi.modulus(), o = chi.order();
    Complex s = 0;
    for (std::int64_t a = 0; a < q; ++a) {
        auto k = chi.index(a);
        if (k < 0) continue;
        // e(k/o + a/q) in one reduction
        long double ph = (long double)k / o + (long double)a / q;
        s += expi2pi(double(ph - std::floor(ph)));
    }
    return s;
}

std::vector<DirichletCharacter> enumerate(const GroupPtr& g, const Filter& f) {
    const auto& comps = g->components();
    std::vector<DirichletCharacter> out;
    std::vector<std::int64_t> e(comps.size(), 0);
    for (;;) {
        DirichletCharacter chi(g, e);
        bool keep = true;
        if (f.parity && chi.parity() != *f.parity) keep = false;
        if (f.order && chi.order() != *f.order) keep = false;
        if (f.primitive && chi.is_primitive() != *f.primitive) keep = false;
        if (keep) out.push_back(std::move(chi));
        // last component varies fastest
        int i = int(e.size()) - 1;
        while (i >= 0) {
            if (++e[i] < comps[i].order) break;
            e[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

DirichletCharacter jacobi_character(std::int64_t m) {
    if (m < 1 || m % 2 == 0 || !analytic::is_squarefree(m))
        throw PreconditionError("jacobi_character needs odd squarefree m");
    auto g = build_group(m);
    std::vector<std::int64_t> e;
    for (auto& c : g->components()) e.push_back(c.order / 2);
    return DirichletCharacter(g, e);
}

std::string format_label(std::int64_t q, const std::vector<std::int64_t>& exps) {
    std::ostringstream os;
    os << q << ':';
    for (std::size_t i = 0; i < exps.size(); ++i) os << (i ? "," : "") << exps[i];
    return os.str();
}

DirichletCharacter parse_label(const std::string& label) {
    auto colon = label.find(':');
    if (colon == std::string::npos) throw DomainError("character label needs 'q:e1,...'");
    std::int64_t q;
    try {
        std::size_t used = 0;
        q = std::stoll(label.substr(0, colon), &used);
        if (used != colon) throw DomainError("bad modulus in label");
    } catch (const std::logic_error&) {
        throw DomainError("bad modulus in label '" + label + "'");
    }
    auto g = build_group(q);
    std::vector<std::int64_t> e;
    std::string rest = label.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        auto tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            e.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw DomainError("bad exponent");
        } catch (const std::logic_error&) {
            throw DomainError("bad exponent '" + tok + "' in label");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (e.size() != g->components().size())
        throw DomainError("label has " + std::to_string(e.size()) + " exponents, group mod " +
                          std::to_string(q) + " has " +
                          std::to_string(g->components().size()));
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] < 0 || e[i] >= g->components()[i].order)
            throw DomainError("label exponent out of range");
    return DirichletCharacter(g, e);
}

}  // namespace pretlab::characters
