#include "pretlab/charsums.hpp"

#include <cmath>
#include <numeric>

#include "pretlab/errors.hpp"
#include "pretlab/parallel.hpp"

namespace pretlab::charsums {

using characters::conj;
using characters::multiply;

namespace {

// long-double complex accumulator; keeps conjugate inputs exactly conjugate
struct Acc {
    long double re = 0, im = 0;
    void add(Complex z) {
        re += z.real();
        im += z.imag();
    }
    void add(const Acc& o) {
        re += o.re;
        im += o.im;
    }
    Complex value() const { return {double(re), double(im)}; }
    double abs() const { return double(std::hypot(re, im)); }
};

void check_scan(std::int64_t q) {
    if (q > kScanCap) throw CapacityError("scan modulus beyond 1e7");
}

constexpr std::int64_t kBlock = 1 << 16;

// moduli closer than this count as equal, so the smallest N wins a tie;
// exact ties between sums of roots of unity are common
constexpr double kTie = 1e-9;

}  // namespace

Complex partial_sum(const DirichletCharacter& chi, std::int64_t N) {
    if (N < 0) throw DomainError("partial_sum needs N >= 0");
    std::int64_t q = chi.modulus();
    std::int64_t full = N / q, rem = N % q;
    Acc period, tail;
    if (full > 0) {
        if (chi.is_principal())
            period.re = (long double)chi.group().size();
        // a non-principal period sums to zero exactly
    }
    for (std::int64_t n = 1; n <= rem; ++n) {
        auto k = chi.index(n);
        if (k >= 0) tail.add(chi.root(k));
    }
    Acc out;
    out.re = period.re * full + tail.re;
    out.im = tail.im;
    return out.value();
}

MaxPartial max_partial(const DirichletCharacter& chi) {
    std::int64_t q = chi.modulus();
    check_scan(q);
    std::size_t nb = std::size_t((q + kBlock - 1) / kBlock);
    auto block_range = [&](std::size_t b) {
        std::int64_t lo = std::int64_t(b) * kBlock + 1;
        std::int64_t hi = std::min<std::int64_t>(q, lo + kBlock - 1);
        return std::make_pair(lo, hi);
    };
    auto totals = map_blocks<Acc>(nb, [&](std::size_t b) {
        auto [lo, hi] = block_range(b);
        Acc a;
        for (std::int64_t n = lo; n <= hi; ++n) {
            auto k = chi.index(n);
            if (k >= 0) a.add(chi.root(k));
        }
        return a;
    });
    std::vector<Acc> offset(nb);
    for (std::size_t b = 1; b < nb; ++b) {
        offset[b] = offset[b - 1];
        offset[b].add(totals[b - 1]);
    }
    auto best = map_blocks<MaxPartial>(nb, [&](std::size_t b) {
        auto [lo, hi] = block_range(b);
        Acc a = offset[b];
        MaxPartial r{-1.0, 0};
        for (std::int64_t n = lo; n <= hi; ++n) {
            auto k = chi.index(n);
            if (k >= 0) a.add(chi.root(k));
            double m = a.abs();
            if (m > r.M + kTie) r = {m, n};
        }
        return r;
    });
    MaxPartial out{-1.0, 0};
    for (auto& r : best)
        if (r.M > out.M + kTie) out = r;
    return out;
}

Complex harmonic_partial(const DirichletCharacter& chi, std::int64_t N, double t,
                         std::int64_t coprime_to) {
    if (N < 1) throw DomainError("harmonic_partial needs N >= 1");
    if (coprime_to < 1) throw DomainError("coprime_to must be >= 1");
    std::size_t nb = std::size_t((N + kBlock - 1) / kBlock);
    auto parts = map_blocks<Acc>(nb, [&](std::size_t b) {
        std::int64_t lo = std::int64_t(b) * kBlock + 1;
        std::int64_t hi = std::min<std::int64_t>(N, lo + kBlock - 1);
        Acc a;
        for (std::int64_t n = lo; n <= hi; ++n) {
            auto k = chi.index(n);
            if (k < 0) continue;
            if (coprime_to > 1 && std::gcd(n, coprime_to) != 1) continue;
            Complex z = chi.root(k) / double(n);
            if (t != 0.0) z *= std::polar(1.0, -t * std::log(double(n)));
            a.add(z);
        }
        return a;
    });
    Acc s;
    for (auto& p : parts) s.add(p);
    return s.value();
}

SumSeries sum_series(const DirichletCharacter& chi, std::int64_t N, Weight w, double t,
                     const std::vector<std::int64_t>& checkpoints) {
    if (N < 0) throw DomainError("sum_series needs N >= 0");
    check_scan(N);
    SumSeries s;
    s.label = chi.label();
    s.t = t;
    s.weight = w;
    s.checkpoints = checkpoints;
    std::sort(s.checkpoints.begin(), s.checkpoints.end());
    s.prefix.assign(s.checkpoints.size(), Complex(0, 0));
    std::size_t ci = 0;
    while (ci < s.checkpoints.size() && s.checkpoints[ci] <= 0) ++ci;
    Acc a;
    for (std::int64_t n = 1; n <= N; ++n) {
        auto k = chi.index(n);
        if (k >= 0) {
            Complex z = chi.root(k);
            if (w == Weight::harmonic) {
                z /= double(n);
                if (t != 0.0) z *= std::polar(1.0, -t * std::log(double(n)));
            }
            a.add(z);
        }
        double m = a.abs();
        if (n == 1 || m > s.max_modulus + kTie) {
            s.max_modulus = m;
            s.argmax = n;
        }
        while (ci < s.checkpoints.size() && s.checkpoints[ci] == n) s.prefix[ci++] = a.value();
    }
    return s;
}

std::vector<double> partial_walk(const DirichletCharacter& chi, std::int64_t upto) {
    check_scan(upto);
    std::vector<double> out;
    out.reserve(std::size_t(std::max<std::int64_t>(upto, 0)));
    Acc a;
    for (std::int64_t n = 1; n <= upto; ++n) {
        auto k = chi.index(n);
        if (k >= 0) a.add(chi.root(k));
        out.push_back(a.abs());
    }
    return out;
}

NqResult find_Nq(const DirichletCharacter& chi, const DirichletCharacter& xi) {
    std::int64_t q = chi.modulus();
    check_scan(q);
    auto psi = multiply(chi, conj(xi));
    check_scan(psi.modulus());
    Acc a;
    NqResult r{0, -1.0};
    for (std::int64_t n = 1; n <= q; ++n) {
        auto k = psi.index(n);
        if (k >= 0) a.add(psi.root(k) / double(n));
        double m = a.abs();
        if (m > r.value + kTie) r = {n, m};
    }
    return r;
}

Truncation L_truncated(const DirichletCharacter& chi, double t, std::int64_t N) {
    if (N < 1) throw DomainError("L_truncated needs N >= 1");
    if (chi.is_principal())
        throw PreconditionError("L_truncated needs a non-principal character (pole at s=1)");
    auto mp = max_partial(chi);
    Truncation tr;
    tr.value = harmonic_partial(chi, N, t, 1);
    tr.M = mp.M;
    tr.error_bound = (2.0 + std::abs(t)) * mp.M / double(N);
    return tr;
}

Complex L_euler_proxy(const DirichletCharacter& chi, double t, std::int64_t cutoff) {
    if (cutoff < 2) return {1.0, 0.0};
    auto tab = analytic::primes_upto(cutoff);
    Acc logsum;
    for (auto p : tab->primes) {
        if (p > cutoff) break;
        auto k = chi.index(p);
        if (k < 0) continue;
        Complex z = chi.root(k) * std::polar(1.0 / p, -t * std::log(double(p)));
        Complex f = 1.0 - z;
        if (std::abs(f) < 1e-12) throw DegeneracyError("Euler factor vanishes numerically");
        logsum.add(-std::log(f));
    }
    return std::exp(logsum.value());
}

Complex polya_rhs(const DirichletCharacter& chi, double alpha, std::int64_t cutoff) {
    if (!chi.is_primitive()) throw PreconditionError("Polya expansion needs a primitive character");
    return polya_rhs(chi, characters::gauss_sum(chi), alpha, cutoff);
}

Complex polya_rhs(const DirichletCharacter& chi, Complex gauss, double alpha,
                  std::int64_t cutoff) {
    if (!chi.is_primitive()) throw PreconditionError("Polya expansion needs a primitive character");
    std::int64_t q = chi.modulus();
    if (cutoff <= 0) cutoff = q;
    const double par = chi.parity();
    Acc s;
    for (std::int64_t n = 1; n <= cutoff; ++n) {
        auto k = chi.index(n);
        if (k < 0) continue;
        Complex cb = std::conj(chi.root(k)) / double(n);
        long double ph = (long double)n * alpha;
        double frac = double(ph - std::floor(ph));
        Complex en = expi2pi(frac);  // e(n alpha)
        // n and -n together; chi-bar(-n) = parity * chi-bar(n)
        Complex w = (1.0 - std::conj(en)) - par * (1.0 - en);
        s.add(cb * w);
    }
    return gauss / Complex(0.0, kTwoPi) * s.value();
}

// ---------------------------------------------------------------- arcs

double major_arc_bound(std::int64_t q, double delta) {
    double L = std::log(double(q));
    return std::exp(std::pow(L, delta) / std::log(L));
}

double minor_arc_floor(std::int64_t q, double delta) {
    double L = std::log(double(q));
    double LL = std::log(L);
    return std::pow(L, 2.0 - 2.0 * delta) * LL * LL * LL * LL;
}

ArcClassification classify_arc(double alpha, std::int64_t q, double delta) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0,1)");
    if (!(delta > 2.0 / kPi && delta < 1.0)) throw DomainError("delta must lie in (2/pi, 1)");
    if (q < 16) throw DomainError("classify_arc needs q >= 16");
    ArcClassification a{};
    a.alpha = alpha;
    a.delta = delta;
    a.q = q;
    a.R_q = major_arc_bound(q, delta);
    a.r_q = minor_arc_floor(q, delta);

    struct Conv {
        std::int64_t b, m;
    };
    std::vector<Conv> conv;
    std::int64_t p1 = 1, q1 = 0, p2 = 0, q2 = 1;
    long double x = alpha;
    for (int it = 0; it < 80; ++it) {
        long double fl = std::floor(x);
        if (fl > 4e18L) break;
        auto an = std::int64_t(fl);
        std::int64_t p = an * p1 + p2, m = an * q1 + q2;
        if (double(m) > a.R_q) break;
        conv.push_back({p, m});
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = m;
        long double fr = x - fl;
        if (fr < 1e-18L) break;
        x = 1.0L / fr;
    }
    // smallest denominator meeting the Dirichlet condition
    const Conv* pick = nullptr;
    for (auto& c : conv) {
        long double err = std::fabs((long double)c.m * alpha - c.b);
        if (err * a.R_q < 1.0L) {
            pick = &c;
            break;
        }
    }
    if (!pick) pick = &conv.back();
    a.b = pick->b;
    a.m = pick->m;
    a.type = double(a.m) <= a.r_q ? ArcType::major : ArcType::minor;
    long double err = std::fabs((long double)a.m * alpha - a.b);
    a.N_alpha = err == 0 ? double(q) : std::min(double(q), double(1.0L / err));
    return a;
}

// ---------------------------------------------------------------- reports

MchiReport mchi_ratio_report(const DirichletCharacter& chi, const DirichletCharacter& xi) {
    if (!xi.is_primitive()) throw PreconditionError("xi must be primitive");
    MchiReport r{};
    r.chi_label = chi.label();
    r.xi_label = xi.label();
    auto mp = max_partial(chi);
    r.M = mp.M;
    r.argmax = mp.argmax;
    auto nq = find_Nq(chi, xi);
    r.N_q = nq.N;
    r.max_harmonic = nq.value;
    std::int64_t q = chi.modulus(), l = xi.modulus();
    r.scale = std::sqrt(double(q) * double(l)) / (kPi * double(analytic::euler_phi(l)));
    r.ratio = r.M / (r.scale * r.max_harmonic);
    if (l == 1) {
        r.tau_interval_ok = r.ratio >= 0.5 && r.ratio <= 3.0;
        r.upper_bound = 3.0 / kPi * std::sqrt(double(q)) * r.max_harmonic;
        r.lower_bound = 1.0 / (2 * kPi) * std::sqrt(double(q)) * r.max_harmonic;
    } else {
        auto psi = multiply(chi, conj(xi));
        r.tau = std::max(1.0, std::abs(1.0 - psi.eval(2)));
    }
    return r;
}

std::int64_t least_nonresidue(std::int64_t q) {
    if (!analytic::is_prime(q) || q == 2) throw PreconditionError("least_nonresidue needs an odd prime");
    for (std::int64_t n = 2;; ++n)
        if (analytic::powmod(n, (q - 1) / 2, q) == std::uint64_t(q - 1)) return n;
}

QrReport qr_lower_bound(std::int64_t q, std::int64_t ell) {
    if (q % 4 != 3 || !analytic::is_prime(q))
        throw PreconditionError("qr_lower_bound needs a prime q = 3 mod 4");
    if (ell < 1 || ell % 2 == 0 || !analytic::is_squarefree(ell))
        throw PreconditionError("ell must be odd and squarefree");
    if (std::gcd(q, ell) != 1) throw PreconditionError("ell must be coprime to q");
    if (q * ell > kScanCap) throw CapacityError("modulus l*q beyond scan cap");

    QrReport r{};
    r.q = q;
    r.ell = ell;
    r.n_q = least_nonresidue(q);
    r.y = r.n_q - 1;
    const double w = std::sqrt(std::exp(1.0));
    r.x = std::pow(double(r.y), w);
    std::int64_t X = std::int64_t(std::floor(r.x + 1e-9));
    if (X > analytic::kSmoothCap) throw CapacityError("x = y^sqrt(e) beyond exhaustive cap");
    auto lpf = analytic::largest_prime_factor_table(std::max<std::int64_t>(X, 1));

    auto legendre = [&](std::int64_t n) -> int {
        if (n % q == 0) return 0;
        return analytic::powmod(n, (q - 1) / 2, q) == 1 ? 1 : -1;
    };
    long double lhs = 0, sm = 0, all = 0;
    for (std::int64_t n = 1; n <= X; ++n) {
        if (std::gcd(n, ell) != 1) continue;
        lhs += (long double)legendre(n) / n;
        all += 1.0L / n;
        if (lpf[n] <= std::uint32_t(r.y)) sm += 1.0L / n;
    }
    r.lhs = double(lhs);
    r.smooth_sum = double(sm);
    r.all_sum = double(all);
    r.decomposition = double(2 * sm - all);
    r.chain_holds = r.lhs >= r.decomposition - 1e-12;

    long double mf = 0;
    for (auto d : analytic::divisors(ell)) {
        int mu = analytic::mobius(d);
        if (mu == 0) continue;
        std::int64_t Xd = X / d;
        long double s_sm = 0, s_all = 0;
        for (std::int64_t m = 1; m <= Xd; ++m) {
            s_all += 1.0L / m;
            if (lpf[m] <= std::uint32_t(r.y)) s_sm += 1.0L / m;
        }
        mf += (long double)mu / d * (2 * s_sm - s_all);
    }
    r.mobius_form = double(mf);
    r.identity_applicable = true;
    for (auto& pp : analytic::factorize(ell))
        if (pp.p > r.y) r.identity_applicable = false;

    r.c = 2.0 * (std::sqrt(std::exp(1.0)) - 1.0) / kPi;
    if (ell == 1)
        r.tau = 0.5;
    else
        r.tau = (q % 8 == 7) ? 1.0 : 2.0;
    r.predicted = r.c * r.tau * std::sqrt(double(q)) * std::log(double(r.n_q));
    r.measured_M = max_partial(characters::jacobi_character(ell * q)).M;
    r.bound_holds = r.predicted <= r.measured_M;
    return r;
}

}  // namespace pretlab::charsums
