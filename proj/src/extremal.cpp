#include "pretlab/extremal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>

#include "pretlab/cache.hpp"
#include "pretlab/errors.hpp"
#include "pretlab/pretentious.hpp"

namespace pretlab::extremal {

namespace {

// tolerance is relative to the estimate, so integrate complex values whole;
// a near-zero imaginary part on its own would never converge
template <class F>
auto integrate01(F&& f, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0;
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, tol, &err);
}

}  // namespace

// ---------------------------------------------------------------- constants

double lambda_residual(double lam) {
    auto f = [lam](double th) { return std::abs(expi2pi(th) - lam); };
    return integrate01(f, 1e-14) - (2.0 - lam);
}

double solve_lambda() {
    static const double value = [] {
        double lo = 0.0, hi = 1.0;  // residual -1 at 0, 4/pi - 1 at 1
        for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
            double mid = 0.5 * (lo + hi);
            if (lambda_residual(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return value;
}

TauSolution solve_tau_full() {
    static const TauSolution sol = [] {
        auto h = [](double th) { return std::sin(th) - th * std::cos(th) - kPi / 2; };
        // h increases on (0, pi): derivative theta sin theta
        double lo = kPi / 2, hi = kPi;
        for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
            double mid = 0.5 * (lo + hi);
            if (h(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
        double th = 0.5 * (lo + hi);
        return TauSolution{th, -std::cos(th), h(th)};
    }();
    return sol;
}

double solve_tau() { return solve_tau_full().tau; }

double decay_ratio() {
    double l = solve_lambda();
    return 2 * l / (1 + l * l);
}

Complex symbol(double u) {
    Complex z = expi2pi(u) - solve_lambda();
    return z / std::abs(z);
}

const char* method_name(Method m) { return m == Method::quadrature ? "quadrature" : "series"; }

// ---------------------------------------------------------------- Fourier coefficients

Complex fourier_quadrature(int n) {
    if (std::abs(n) > 64) throw DomainError("fourier_quadrature supports |n| <= 64");
    auto f = [n](double u) { return symbol(u) * expi2pi(-double(n) * u); };
    return integrate01(f, 1e-12);
}

double h_coefficient(int m) {
    const double lam = solve_lambda();
    const double z = lam / (4 * (1 + lam * lam));
    const double a = std::abs(m);
    // l = 0 term: C(2a, a) z^a, in logs to survive large a
    double logt = std::lgamma(2 * a + 1) - 2 * std::lgamma(a + 1) + a * std::log(z);
    const double logz2 = 2 * std::log(z);
    double sum = 0;
    for (long l = 0;; ++l) {
        double term = std::exp(logt);
        sum += term;
        double j = a + 2 * l;
        double r = (a + 2 * l + 2) * (a + 2 * l + 1) / ((a + l + 1) * (l + 1)) * 4 * (2 * j + 3) *
                   (2 * j + 1) / ((j + 2) * (j + 1));
        double next_log = logt + std::log(r) + logz2;
        double ratio = r * z * z;
        // past the peak, and the geometric tail is negligible
        if (ratio < 1 && std::exp(next_log) / (1 - ratio) < 1e-18 * std::max(sum, 1e-300)) break;
        if (ratio < 1 && std::exp(next_log) / (1 - ratio) < 1e-34) break;
        if (l > 10'000'000) throw AccuracyError("h-series failed to converge");
        logt = next_log;
    }
    return sum;
}

double fourier_series(int n) {
    if (std::abs(n) > 64) throw DomainError("fourier_series supports |n| <= 64");
    const double lam = solve_lambda();
    return (h_coefficient(n - 1) - lam * h_coefficient(n)) / std::sqrt(1 + lam * lam);
}

Complex FourierTable::at(int n) const {
    if (std::abs(n) > n_max) throw DomainError("Fourier index outside table range");
    return coeffs[std::size_t(n + n_max)];
}

FourierTable fourier_table(int n_max, Method m) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    if (m == Method::quadrature && n_max > 64)
        throw DomainError("quadrature table supports n_max <= 64");
    static std::mutex mu;
    static std::map<std::pair<int, int>, FourierTable> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        // any cached table at least this wide can be sliced
        for (auto& [key, tab] : memo)
            if (key.second == int(m) && key.first >= n_max) {
                FourierTable out{m, n_max, {}};
                for (int n = -n_max; n <= n_max; ++n) out.coeffs.push_back(tab.at(n));
                return out;
            }
    }
    FourierTable t{m, n_max, std::vector<Complex>(std::size_t(2 * n_max + 1))};
    std::string key = std::string("fourier-") + method_name(m) + "-" + std::to_string(n_max);
    if (auto hit = cache::load(key, 2 * (2 * n_max + 1))) {
        for (std::size_t i = 0; i < t.coeffs.size(); ++i)
            t.coeffs[i] = {(*hit)[2 * i], (*hit)[2 * i + 1]};
    } else {
        if (m == Method::quadrature) {
            for (int n = -n_max; n <= n_max; ++n) t.coeffs[n + n_max] = fourier_quadrature(n);
        } else {
            const double lam = solve_lambda(), s = std::sqrt(1 + lam * lam);
            std::vector<double> h(std::size_t(n_max + 2));
            for (int k = 0; k <= n_max + 1; ++k) h[k] = h_coefficient(k);
            auto H = [&](int k) { return h[std::size_t(std::abs(k))]; };
            for (int n = -n_max; n <= n_max; ++n)
                t.coeffs[n + n_max] = (H(n - 1) - lam * H(n)) / s;
        }
        std::vector<double> flat;
        for (auto& c : t.coeffs) {
            flat.push_back(c.real());
            flat.push_back(c.imag());
        }
        cache::store(key, flat);
    }
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(std::make_pair(n_max, int(m)), t);
    return t;
}

double decay_bound(int n) {
    int a = std::abs(n);
    if (a < 2) throw DomainError("decay bound holds for |n| >= 2");
    const double lam = solve_lambda(), l2 = lam * lam, c = decay_ratio();
    const double lead = std::exp(1.0 / 6) * std::sqrt(2.0) / ((1 - c * c) * kPi * std::sqrt(1 + l2));
    const double shape = 1 - (2.0 * a - 1) / (2.0 * a) * l2 / (1 + l2);
    return lead * shape * std::pow(c, a - 1) / (a - 1);
}

bool FourierChecks::all_pass() const {
    for (auto& c : clauses)
        if (!c.pass) return false;
    return identity_pass;
}

FourierChecks lemma_fourier_checks(int n_max) {
    if (n_max < 10 || n_max > 64) throw DomainError("lemma checks need 10 <= n_max <= 64");
    auto quad = fourier_table(n_max, Method::quadrature);
    auto ser = fourier_table(n_max, Method::series);
    FourierChecks r;
    r.n_max = n_max;
    auto g = [&](int n) { return quad.at(n).real(); };

    r.dual_method_gap = 0;
    for (int n = -20; n <= 20; ++n)
        r.dual_method_gap = std::max(r.dual_method_gap, std::abs(quad.at(n) - ser.at(n)));

    {  // (a) realness
        Clause c{"a: g_n real", true, 1e300, 0, ""};
        for (int n = -n_max; n <= n_max; ++n) {
            double slack = 1e-10 - std::abs(quad.at(n).imag());
            if (slack < c.margin) c = {c.name, c.pass, slack, n, ""};
        }
        c.pass = c.margin >= 0;
        c.detail = "max |Im g_n| = " + std::to_string(1e-10 - c.margin);
        r.clauses.push_back(c);
    }
    {  // (b) decay: 0.99^|n| on the whole range, the explicit bound for 2 <= |n| <= 20
        Clause c{"b: |g_n| <= 0.99^|n| and explicit decay bound", true, 1e300, 0, ""};
        for (int n = -n_max; n <= n_max; ++n) {
            double gn = std::max(std::abs(quad.at(n)), std::abs(ser.at(n)));
            double slack = std::pow(0.99, std::abs(n)) - gn;
            if (std::abs(n) >= 2 && std::abs(n) <= 20)
                slack = std::min(slack, decay_bound(n) - gn);
            if (slack < c.margin) {
                c.margin = slack;
                c.worst_n = n;
            }
        }
        c.pass = c.margin >= 0;
        r.clauses.push_back(c);
    }
    {  // (c) g_{-n} < g_n, and h_{n+1} < h_{n-1}
        Clause c{"c: g_{-n} < g_n", true, 1e300, 0, ""};
        for (int n = 1; n <= n_max; ++n) {
            double slack = std::min(g(n) - g(-n), ser.at(n).real() - ser.at(-n).real());
            if (slack < c.margin) {
                c.margin = slack;
                c.worst_n = n;
            }
        }
        bool h_ok = true;
        for (int n = 1; n <= 30; ++n)
            if (!(h_coefficient(n + 1) < h_coefficient(n - 1))) h_ok = false;
        c.pass = c.margin > 0 && h_ok;
        c.detail = h_ok ? "h_{n+1} < h_{n-1} for n <= 30" : "h monotonicity fails";
        r.clauses.push_back(c);
    }
    {  // (d) g_n <= g_1 - 1/20 away from n = 0, 1
        Clause c{"d: g_n <= g_1 - 1/20 for n != 0,1", true, 1e300, 0, ""};
        for (int n = -n_max; n <= n_max; ++n) {
            if (n == 0 || n == 1) continue;
            double slack = g(1) - 0.05 - g(n);
            if (slack < c.margin) {
                c.margin = slack;
                c.worst_n = n;
            }
        }
        c.pass = c.margin >= 0;
        c.detail = "g_1 - g_2 = " + std::to_string(g(1) - g(2));
        r.clauses.push_back(c);
    }
    {  // (e)
        Clause c{"e: g_0 < g_1 - 1", true, g(1) - 1 - g(0), 0, ""};
        c.pass = c.margin > 0;
        r.clauses.push_back(c);
    }
    const double lam = solve_lambda();
    r.identity_residual = lam * (g(0) - 1) - (g(1) - 2);
    r.identity_pass = std::abs(r.identity_residual) <= 1e-8;
    return r;
}

// ---------------------------------------------------------------- f_t

Complex ft_prime_power(double t, std::int64_t p, int m) {
    const double lp = std::log(double(p));
    std::vector<Complex> v(std::size_t(m) + 1);
    v[0] = 1.0;
    for (int k = 1; k <= m; ++k) {
        Complex s = 0;
        for (int j = 1; j <= k; ++j) s += v[k - j] * symbol(t * j * lp / kTwoPi);
        v[k] = s / double(k);
    }
    return v[m];
}

MultiplicativeFunction build_ft(double t, std::int64_t X) {
    if (!(std::abs(t) > 0 && std::abs(t) <= 1)) throw DomainError("build_ft needs 0 < |t| <= 1");
    if (X < 1 || X > analytic::kSieveCap) throw CapacityError("build_ft X outside sieve cap");
    // powers p^m, m >= 2, are memoized; prime values are cheap to recompute
    auto memo = std::make_shared<std::map<std::int64_t, std::vector<Complex>>>();
    if (X >= 2) {
        auto tab = analytic::primes_upto(X);
        for (auto pu : tab->primes) {
            std::int64_t p = pu;
            if (p > X) break;
            Complex fp = symbol(t * std::log(double(p)) / kTwoPi);
            if (std::abs(fp) > 1 + 1e-12) throw UnitDiscError("f_t(p) left the unit disc");
            if (p * p > X) continue;
            const double lp = std::log(double(p));
            std::vector<Complex> v{Complex(1.0)};
            for (std::int64_t pk = 1; pk <= X / p; pk *= p) {
                int k = int(v.size());
                Complex s = 0;
                for (int j = 1; j <= k; ++j) s += v[k - j] * symbol(t * j * lp / kTwoPi);
                v.push_back(s / double(k));
                if (std::abs(v.back()) > 1 + 1e-12)
                    throw UnitDiscError("f_t(p^m) left the unit disc at p=" + std::to_string(p));
            }
            memo->emplace(p, std::move(v));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "f_t(t=%.10g)", t);
    return MultiplicativeFunction(
        buf,
        [t, memo](std::int64_t p, int m) -> Complex {
            if (m == 1) return symbol(t * std::log(double(p)) / kTwoPi);
            auto it = memo->find(p);
            if (it != memo->end() && m < int(it->second.size())) return it->second[m];
            return ft_prime_power(t, p, m);
        },
        false);
}

Complex log_sum_direct(const MultiplicativeFunction& f, std::int64_t X) {
    if (X < 1) throw DomainError("log_sum_direct needs X >= 1");
    if (X > kLogSumCap) throw CapacityError("log_sum_direct beyond 1e8");
    return pretentious::weighted_sum(f, X, [](std::int64_t n) { return 1.0 / double(n); });
}

// ---------------------------------------------------------------- main term

namespace {

// principal Log of i*y, y real nonzero
Complex log_iy(double y) { return {std::log(std::abs(y)), y > 0 ? kPi / 2 : -kPi / 2}; }

double tail_of_shift(int ell, int K) {
    // sum over |k| > K of B(|l - k|)(log|k| + pi), B the explicit decay bound
    double s = 0;
    for (int sign : {1, -1}) {
        for (long k = K + 1;; ++k) {
            long idx = std::labs(ell - sign * k);
            if (idx < 2) continue;
            double term = decay_bound(int(idx)) * (std::log(double(k)) + kPi);
            s += term;
            if (term < 1e-30 * std::max(s, 1e-300) || term < 1e-300) break;
            if (k > 100000000) break;
        }
    }
    return s;
}

}  // namespace

Complex shift_constant(int ell, double t_sign, int K, double* tail_bound) {
    if (K < 20) throw DomainError("shift constant needs K >= 20");
    auto tab = fourier_table(K + std::abs(ell) + 1, Method::series);
    const double arg_neg = t_sign >= 0 ? -kPi : kPi;
    long double re = 0, im = 0;
    // small |k| last so the big terms do not swamp the tail
    for (int k = K; k >= 1; --k) {
        for (int kk : {k, -k}) {
            double gk = tab.real(ell - kk);
            re -= gk * std::log(double(k));
            if (kk < 0) im -= gk * arg_neg;
        }
    }
    if (tail_bound) *tail_bound = tail_of_shift(ell, K);
    return std::exp(Complex(double(re), double(im)));
}

AsymptoticReport main_term(double t, std::int64_t X, int K, bool with_direct) {
    if (!(t != 0 && std::abs(t) <= 1)) throw DomainError("main_term needs 0 < |t| <= 1");
    if (X < 3) throw DomainError("main_term needs X >= 3");
    AsymptoticReport r{};
    r.t = t;
    r.X = X;
    r.K = K;
    const int n_det = 40;
    auto tab = fourier_table(n_det, Method::series);
    auto gamma_of = [&](int l) { return l == 0 ? tab.real(0) + 1 : tab.real(l); };
    r.mu = -1e300;
    for (int l = -n_det; l <= n_det; ++l) r.mu = std::max(r.mu, gamma_of(l));
    double runner = -1e300;
    for (int l = -n_det; l <= n_det; ++l) {
        if (gamma_of(l) >= r.mu - 1e-9)
            r.argmax_set.push_back(l);
        else
            runner = std::max(runner, gamma_of(l));
    }
    r.gap = r.mu - runner;

    const double L = std::log(double(X));
    r.main_total = 0;
    for (int l : r.argmax_set) {
        MainTermEntry e{};
        e.ell = l;
        e.gamma = gamma_of(l);
        e.C = shift_constant(l, t, K, &e.C_tail_bound);
        int lp = l == 0 ? 1 : l;
        Complex osc = std::polar(1.0, double(l) * t * L);
        Complex pw = std::exp((e.gamma - 1) * log_iy(t * L));
        e.term = osc / Complex(0, double(lp) * t) * e.C * pw / analytic::complex_gamma(e.gamma);
        r.main_total += e.term;
        r.entries.push_back(e);
    }
    r.growth_ratio = std::abs(r.main_total) /
                     (std::pow(std::abs(t) * L, tab.real(1) - 1) / std::abs(t));
    if (std::abs(t) * L < 10)
        r.warnings.push_back("regime: |t| log X < 10, asymptotic not yet in force");
    double lo = 3 / std::log(L);
    if (std::abs(t) < lo || std::abs(t) > 0.3)
        r.warnings.push_back("regime: |t| outside [3/log log X, 0.3]");
    if (with_direct) {
        r.direct = log_sum_direct(build_ft(t, X), X);
        r.ratio = *r.direct / r.main_total;
        r.ratio_modulus = std::abs(*r.ratio);
    }
    return r;
}

Complex zeta_shift_product(int ell, double t, int N) {
    if (t == 0) throw DomainError("zeta_shift_product needs t != 0");
    if (N < 1) throw DomainError("zeta_shift_product needs N >= 1");
    if (double(2 * N + std::abs(ell)) * std::abs(t) > 1e4)
        throw DomainError("shifts exceed the zeta evaluation range");
    auto tab = fourier_table(2 * N, Method::series);
    long double re = 0, im = 0;
    for (int k = -2 * N; k <= 2 * N; ++k) {
        if (k == ell) continue;  // the pole
        Complex s(1.0, -double(k - ell) * t);
        Complex lz = std::log(analytic::zeta_near_one(s, 1e-13));
        double gk = tab.real(k);
        re += gk * lz.real();
        im += gk * lz.imag();
    }
    return std::exp(Complex(double(re), double(im)));
}

ProdEstCheck prodest_check(int ell, double t, int N, int K) {
    ProdEstCheck c{};
    c.t = t;
    c.product = zeta_shift_product(ell, t, N);
    auto tab = fourier_table(std::max(40, std::abs(ell) + 1), Method::series);
    double gl = tab.real(ell);
    c.reference = shift_constant(ell, t, K) * std::exp((gl - 1) * log_iy(t));
    c.ratio = c.product / c.reference;
    c.deviation = std::abs(c.ratio - 1.0);
    return c;
}

SharpnessReport sharpness_report(double t, std::int64_t X) {
    if (!(t != 0 && std::abs(t) <= 1)) throw DomainError("sharpness_report needs 0 < |t| <= 1");
    if (X < 3) throw DomainError("sharpness_report needs X >= 3");
    SharpnessReport r{};
    r.t = t;
    r.X = X;
    r.y_t = std::exp(1.0 / std::abs(t));
    auto f = build_ft(t, X);
    auto one = pretentious::constant_one();
    const double L = std::log(double(X)), lam = solve_lambda();
    r.log_sum_modulus = std::abs(log_sum_direct(f, X));
    r.d2_X = pretentious::distance(f, one, X).d2;
    r.bound = L * std::exp(-lam * r.d2_X);
    auto y = std::int64_t(std::floor(r.y_t));
    r.d2_y = y >= 2 ? pretentious::distance(f, one, y).d2 : 0.0;
    r.ratio = r.log_sum_modulus / r.bound;
    auto tab = fourier_table(40, Method::series);
    r.growth = std::pow(std::abs(t) * L, tab.real(1) - 1) / std::abs(t);
    r.ratio_growth = r.log_sum_modulus / r.growth;
    r.identity_residual = lam * (tab.real(0) - 1) - (tab.real(1) - 2);
    if (std::abs(t) < 1 / std::log(L))
        r.warnings.push_back("regime: |t| below 1/log log X");
    if (std::abs(t) * L < 10)
        r.warnings.push_back("regime: |t| log X < 10, asymptotic not yet in force");
    return r;
}

ConvInverseReport conv_inverse_check(const MultiplicativeFunction& f, double t, std::int64_t p_max,
                                     int k_max) {
    if (p_max < 2 || k_max < 1) throw DomainError("conv_inverse_check needs p_max >= 2, k_max >= 1");
    ConvInverseReport r{};
    r.t = t;
    r.p_max = p_max;
    r.k_max = k_max;
    r.min_factor_slack = 1e300;
    r.H = 1.0;
    auto tab = analytic::primes_upto(p_max);
    for (auto pu : tab->primes) {
        std::int64_t p = pu;
        if (p > p_max) break;
        if (std::abs(f.at(p, 1) - symbol(t * std::log(double(p)) / kTwoPi)) > 1e-12)
            throw PreconditionError("f must agree with f_t on primes");
        std::vector<Complex> ft(std::size_t(k_max) + 1), h(std::size_t(k_max) + 1);
        // f_t(p^k) by one recursion pass
        const double lp = std::log(double(p));
        ft[0] = 1.0;
        for (int k = 1; k <= k_max; ++k) {
            Complex s = 0;
            for (int j = 1; j <= k; ++j) s += ft[k - j] * symbol(t * j * lp / kTwoPi);
            ft[k] = s / double(k);
        }
        h[0] = 1.0;
        for (int k = 1; k <= k_max; ++k) {
            Complex s = f.at(p, k);
            for (int j = 0; j < k; ++j) s -= ft[k - j] * h[j];
            h[k] = s;
        }
        r.max_h_prime = std::max(r.max_h_prime, std::abs(h[1]));
        for (int k = 2; k <= k_max; ++k) {
            double ratio = std::abs(h[k]) / std::ldexp(1.0, k - 1);
            if (ratio > r.worst_power_ratio) {
                r.worst_power_ratio = ratio;
                r.worst_p = p;
                r.worst_k = k;
            }
        }
        // Euler factor at s = 1 + i t
        Complex E = 0, ps = 1.0;
        Complex step = std::polar(1.0 / double(p), -t * lp);
        for (int k = 0; k <= k_max; ++k) {
            E += h[k] * ps;
            ps *= step;
        }
        if (p == 2)
            r.factor_two = std::abs(E);
        else
            r.min_factor_slack =
                std::min(r.min_factor_slack, std::abs(E) - (1 - 2.0 / (double(p) * (p - 2))));
        r.H *= E;
    }
    r.pass = r.max_h_prime <= 1e-12 && r.worst_power_ratio <= 1 + 1e-12 &&
             r.min_factor_slack >= -1e-12;
    return r;
}

}  // namespace pretlab::extremal
