#include "dispatch.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pretlab/acceptance.hpp"
#include "pretlab/analytic.hpp"
#include "pretlab/characters.hpp"
#include "pretlab/charsums.hpp"
#include "pretlab/errors.hpp"
#include "pretlab/extremal.hpp"
#include "pretlab/multiplicative.hpp"
#include "pretlab/parallel.hpp"
#include "pretlab/pretentious.hpp"

namespace pretlab::cli {

namespace ch = pretlab::characters;
namespace cs = pretlab::charsums;
namespace ex = pretlab::extremal;
namespace pr = pretlab::pretentious;
using pr::MultiplicativeFunction;

namespace {

// cap on anything that materializes f(1..x) in this layer
constexpr std::int64_t kValuesCap = 10'000'000;

[[noreturn]] void violated(const std::string& what) {
    throw PreconditionError("precondition violated: " + what);
}

void require(bool ok, const std::string& what) {
    if (!ok) violated(what);
}

double round_sig(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round15(x);
}

json cx(Complex z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

template <class T>
json opt(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_same_v<T, double>) return num(*v);
    else if constexpr (std::is_same_v<T, Complex>) return cx(*v);
    else return *v;
}

json strings(const std::vector<std::string>& v) {
    json a = json::array();
    for (auto& s : v) a.push_back(s);
    return a;
}

// Typed view over the request inputs. Every getter records the value it
// settled on (including defaults) in normalized().
class Params {
public:
    explicit Params(const json& in) : in_(in.is_null() ? json::object() : in) {
        if (!in_.is_object()) violated("inputs is a JSON object");
    }

    std::int64_t integer(const std::string& k, std::optional<std::int64_t> def = {}) {
        auto v = opt_integer(k);
        if (!v) {
            if (!def) violated("input '" + k + "' is required");
            v = def;
        }
        out_[k] = *v;
        return *v;
    }
    std::optional<std::int64_t> opt_integer(const std::string& k) {
        if (!in_.contains(k) || in_[k].is_null()) return std::nullopt;
        const json& v = in_[k];
        std::int64_t r;
        if (v.is_number_integer()) r = v.get<std::int64_t>();
        else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>() &&
                 std::abs(v.get<double>()) < 9e18)
            r = std::int64_t(v.get<double>());
        else violated("input '" + k + "' is an integer");
        out_[k] = r;
        return r;
    }
    double real(const std::string& k, std::optional<double> def = {}) {
        double r;
        if (!in_.contains(k) || in_[k].is_null()) {
            if (!def) violated("input '" + k + "' is required");
            r = *def;
        } else {
            if (!in_[k].is_number()) violated("input '" + k + "' is a number");
            r = in_[k].get<double>();
        }
        require(std::isfinite(r), "input '" + k + "' is finite");
        out_[k] = r;
        return r;
    }
    std::string text(const std::string& k, std::optional<std::string> def = {}) {
        std::string r;
        if (!in_.contains(k) || in_[k].is_null()) {
            if (!def) violated("input '" + k + "' is required");
            r = *def;
        } else {
            if (!in_[k].is_string()) violated("input '" + k + "' is a string");
            r = in_[k].get<std::string>();
        }
        out_[k] = r;
        return r;
    }
    bool flag(const std::string& k) {
        bool r = false;
        if (in_.contains(k) && !in_[k].is_null()) {
            if (!in_[k].is_boolean()) violated("input '" + k + "' is a boolean");
            r = in_[k].get<bool>();
        }
        out_[k] = r;
        return r;
    }
    std::vector<std::int64_t> ints(const std::string& k, std::vector<std::int64_t> def) {
        std::vector<std::int64_t> r = std::move(def);
        if (in_.contains(k) && !in_[k].is_null()) {
            if (!in_[k].is_array()) violated("input '" + k + "' is an array of integers");
            r.clear();
            for (auto& e : in_[k]) {
                if (e.is_number_integer()) r.push_back(e.get<std::int64_t>());
                else if (e.is_number_float() && std::floor(e.get<double>()) == e.get<double>())
                    r.push_back(std::int64_t(e.get<double>()));
                else violated("input '" + k + "' is an array of integers");
            }
        }
        out_[k] = r;
        return r;
    }

    const json& normalized() const { return out_; }

private:
    json in_;
    json out_ = json::object();
};

struct Record {
    json value = json::object();
    json residuals = json::object();
    json warnings = json::array();
};

using Handler = std::function<void(Params&, Record&)>;

struct Entry {
    OpSpec spec;
    Handler run;
    bool hidden = false;  // reachable from dispatch and verify, not from the CLI
};

// ---- input helpers ----

ch::DirichletCharacter character(Params& p, const std::string& key = "char") {
    auto chi = ch::parse_label(p.text(key));
    if (key == "char") {
        if (auto q = p.opt_integer("q"))
            require(*q == chi.modulus(), "q equals the modulus of the character label");
    }
    return chi;
}

// one | liouville | mobius | sign4 | twist:T | char:LABEL | ft:T
MultiplicativeFunction function_spec(const std::string& s, std::int64_t x) {
    auto colon = s.find(':');
    std::string head = s.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto real_arg = [&]() {
        try {
            std::size_t used = 0;
            double t = std::stod(arg, &used);
            if (used != arg.size() || !std::isfinite(t)) throw std::invalid_argument(arg);
            return t;
        } catch (const std::logic_error&) {
            violated("function '" + s + "' has a real parameter");
        }
    };
    if (s == "one") return pr::constant_one();
    if (s == "liouville") return pr::liouville();
    if (s == "mobius") return pr::mobius();
    if (s == "sign4")
        return pr::from_prime_values(
            "sign4", [](std::int64_t p) { return Complex(p % 4 == 1 ? 1.0 : -1.0); });
    if (head == "twist" && !arg.empty()) return pr::twist(real_arg());
    if (head == "char" && !arg.empty()) return pr::from_character(ch::parse_label(arg));
    if (head == "ft" && !arg.empty()) return ex::build_ft(real_arg(), x);
    violated("function is one of one, liouville, mobius, sign4, twist:T, char:LABEL, ft:T");
}

MultiplicativeFunction function_input(Params& p, const std::string& key, std::int64_t x,
                                      std::optional<std::string> def = {}) {
    return function_spec(p.text(key, def), x);
}

// x >= 2 for everything summing over primes up to x
std::int64_t upper_x(Params& p, std::optional<std::int64_t> def = {}) {
    auto x = p.integer("x", def);
    require(x >= 2, "x >= 2");
    return x;
}

struct MeasuredSums {
    Complex flat;
    Complex logarithmic;
};
MeasuredSums measured_sums(const MultiplicativeFunction& f, std::int64_t x) {
    if (x > kValuesCap) throw CapacityError("measured sums need x <= 1e7");
    auto vals = pr::values_upto(f, x);
    MeasuredSums m{0.0, 0.0};
    for (std::int64_t n = 1; n <= x; ++n) {
        m.flat += vals[std::size_t(n)];
        m.logarithmic += vals[std::size_t(n)] / double(n);
    }
    return m;
}

json table(std::vector<std::string> columns, json rows) {
    return {{"columns", strings(columns)}, {"rows", std::move(rows)}};
}

pr::GammaMode gamma_mode(const std::string& s) {
    if (s == "closed") return pr::GammaMode::closed_form;
    if (s == "fourier") return pr::GammaMode::fourier_partial;
    if (s == "direct") return pr::GammaMode::direct_average;
    violated("mode is one of closed, fourier, direct");
}

ex::Method method_input(Params& p) {
    auto m = p.text("method", std::string("series"));
    if (m == "series") return ex::Method::series;
    if (m == "quadrature") return ex::Method::quadrature;
    violated("method is one of series, quadrature");
}

// ---- handlers ----

json char_summary(const ch::DirichletCharacter& chi) {
    return {{"label", chi.label()},     {"order", chi.order()},
            {"conductor", chi.conductor()}, {"parity", chi.parity()},
            {"primitive", chi.is_primitive()}};
}

void op_chars_list(Params& p, Record& r) {
    auto q = p.integer("q");
    require(q >= 1, "q >= 1");
    ch::Filter f;
    if (auto par = p.opt_integer("parity")) {
        require(*par == 1 || *par == -1, "parity is 1 or -1");
        f.parity = int(*par);
    }
    if (auto ord = p.opt_integer("order")) {
        require(*ord >= 1, "order >= 1");
        f.order = *ord;
    }
    auto prim = p.text("primitive", std::string("any"));
    require(prim == "any" || prim == "yes" || prim == "no", "primitive is any, yes or no");
    if (prim != "any") f.primitive = prim == "yes";
    auto limit = p.integer("limit", 200);
    require(limit >= 0, "limit >= 0");

    auto g = ch::build_group(q);
    auto all = ch::enumerate(g, f);
    json list = json::array();
    for (std::size_t i = 0; i < all.size() && std::int64_t(i) < limit; ++i)
        list.push_back(char_summary(all[i]));
    r.value = {{"modulus", q},
               {"group_size", g->size()},
               {"count", std::int64_t(all.size())},
               {"characters", list},
               {"truncated", std::int64_t(all.size()) > limit}};
    if (!f.parity && !f.order && !f.primitive)
        r.residuals["count_minus_phi"] = std::int64_t(all.size()) - analytic::euler_phi(q);
}

void op_chars_info(Params& p, Record& r) {
    auto chi = character(p);
    auto prim = ch::conductor_and_primitive(chi);
    Complex g = ch::gauss_sum(chi);
    r.value = char_summary(chi);
    r.value["modulus"] = chi.modulus();
    r.value["primitive_label"] = prim.primitive.label();
    r.value["gauss_sum"] = cx(g);
    // the primitive character must agree with chi on units
    double agree = 0;
    std::int64_t upto = std::min<std::int64_t>(chi.modulus(), 1000);
    for (std::int64_t n = 1; n <= upto; ++n)
        if (analytic::gcd(n, chi.modulus()) == 1)
            agree = std::max(agree, std::abs(chi.eval(n) - prim.primitive.eval(n)));
    r.residuals["primitive_mismatch"] = num(agree);
    if (chi.is_primitive())
        r.residuals["gauss_modulus_sq_minus_q"] = num(std::norm(g) - double(chi.modulus()));
}

void op_chars_eval(Params& p, Record& r) {
    auto chi = character(p);
    auto n = p.integer("n");
    Complex v = ch::eval(chi, n);
    r.value = {{"value", cx(v)}, {"index", chi.index(n)}};
    if (chi.index(n) >= 0) r.residuals["modulus_minus_one"] = num(std::abs(v) - 1.0);
}

void op_charsum_max(Params& p, Record& r) {
    auto chi = character(p);
    auto m = cs::max_partial(chi);
    r.value = {{"M", num(m.M)}, {"argmax", m.argmax}};
    r.residuals["argmax_recheck"] = num(std::abs(cs::partial_sum(chi, m.argmax)) - m.M);
}

void op_charsum_partial(Params& p, Record& r) {
    auto chi = character(p);
    auto N = p.integer("n");
    require(N >= 0, "n >= 0");
    r.value = {{"value", cx(cs::partial_sum(chi, N))}};
    if (!chi.is_principal() && chi.modulus() <= 1'000'000)
        r.residuals["full_period_sum"] = num(std::abs(cs::partial_sum(chi, chi.modulus())));
}

void op_charsum_harmonic(Params& p, Record& r) {
    auto chi = character(p);
    auto N = p.integer("n");
    auto t = p.real("t", 0.0);
    auto c = p.integer("coprime", 1);
    require(N >= 0, "n >= 0");
    require(c >= 1, "coprime >= 1");
    r.value = {{"value", cx(cs::harmonic_partial(chi, N, t, c))}};
}

void op_charsum_nq(Params& p, Record& r) {
    auto chi = character(p);
    auto xi = ch::parse_label(p.text("xi"));
    auto res = cs::find_Nq(chi, xi);
    r.value = {{"N", res.N}, {"value", num(res.value)}};
    auto prod = ch::multiply(chi, ch::conj(xi));
    r.residuals["value_recheck"] = num(std::abs(cs::harmonic_partial(prod, res.N)) - res.value);
}

void op_charsum_mchi(Params& p, Record& r) {
    auto chi = character(p);
    auto xi = ch::parse_label(p.text("xi"));
    auto m = cs::mchi_ratio_report(chi, xi);
    r.value = {{"chi", m.chi_label},         {"xi", m.xi_label},
               {"M", num(m.M)},              {"argmax", m.argmax},
               {"N_q", m.N_q},               {"max_harmonic", num(m.max_harmonic)},
               {"scale", num(m.scale)},      {"ratio", num(m.ratio)},
               {"tau", opt(m.tau)},          {"tau_interval_ok", opt(m.tau_interval_ok)},
               {"upper_bound", opt(m.upper_bound)}, {"lower_bound", opt(m.lower_bound)}};
    if (m.upper_bound) r.residuals["upper_slack"] = num(*m.upper_bound - m.M);
    if (m.lower_bound) r.residuals["lower_slack"] = num(m.M - *m.lower_bound);
}

void op_charsum_euler(Params& p, Record& r) {
    auto chi = character(p);
    auto t = p.real("t", 0.0);
    auto cut = p.integer("cutoff");
    require(cut >= 2, "cutoff >= 2");
    Complex e = cs::L_euler_proxy(chi, t, cut);
    r.value = {{"value", cx(e)}};
    if (!chi.is_principal() && chi.modulus() <= 100'000) {
        auto tr = cs::L_truncated(chi, t, 100 * chi.modulus());
        r.residuals["gap_to_truncated"] = num(std::abs(e - tr.value));
    }
}

void op_ltrunc(Params& p, Record& r) {
    auto chi = character(p);
    auto t = p.real("t", 0.0);
    auto N = p.integer("n");
    require(N >= 1, "n >= 1");
    require(!chi.is_principal(), "character is non-principal");
    require(N <= cs::kScanCap / 2, "n <= 5e6");
    auto a = cs::L_truncated(chi, t, N);
    auto b = cs::L_truncated(chi, t, 2 * N);
    double gap = std::abs(a.value - b.value);
    r.value = {{"value", cx(a.value)}, {"error_bound", num(a.error_bound)}, {"M", num(a.M)}};
    r.residuals["doubling_gap"] = num(gap);
    r.residuals["within_bound"] = gap <= a.error_bound;
}

void op_polya(Params& p, Record& r) {
    auto chi = character(p);
    auto alpha = p.real("alpha");
    auto cut = p.integer("cutoff", 0);
    require(alpha >= 0.0 && alpha <= 1.0, "0 <= alpha <= 1");
    require(cut >= 0, "cutoff >= 0");
    require(!chi.is_principal(), "character is non-principal");
    Complex rhs = cs::polya_rhs(chi, alpha, cut);
    auto N = std::int64_t(std::floor(alpha * double(chi.modulus())));
    Complex direct = cs::partial_sum(chi, N);
    double gap = std::abs(rhs - direct);
    r.value = {{"rhs", cx(rhs)}, {"direct", cx(direct)}, {"N", N}};
    r.residuals["gap"] = num(gap);
    r.residuals["gap_over_sqrt_q"] = num(gap / std::sqrt(double(chi.modulus())));
}

void op_arcs(Params& p, Record& r) {
    auto alpha = p.real("alpha");
    auto q = p.integer("q");
    auto delta = p.real("delta");
    require(q >= 16, "q >= 16");
    require(delta > 0.0 && delta <= 1.0, "0 < delta <= 1");
    auto a = cs::classify_arc(alpha, q, delta);
    r.value = {{"alpha", num(a.alpha)}, {"delta", num(a.delta)}, {"q", a.q},
               {"b", a.b},                {"m", a.m},
               {"type", a.type == cs::ArcType::major ? "major" : "minor"},
               {"N_alpha", num(a.N_alpha)}, {"R_q", num(a.R_q)}, {"r_q", num(a.r_q)}};
    r.residuals["approximation"] =
        num(std::abs(a.alpha - double(a.b) / double(a.m)) * double(a.m));
}

void op_qrbound(Params& p, Record& r) {
    auto q = p.integer("q");
    auto ell = p.integer("ell", 1);
    require(q >= 3 && analytic::is_prime(q), "q is an odd prime");
    require(ell >= 1, "ell >= 1");
    auto b = cs::qr_lower_bound(q, ell);
    r.value = {{"q", b.q},
               {"ell", b.ell},
               {"n_q", b.n_q},
               {"y", b.y},
               {"x", num(b.x)},
               {"lhs", num(b.lhs)},
               {"smooth_sum", num(b.smooth_sum)},
               {"all_sum", num(b.all_sum)},
               {"decomposition", num(b.decomposition)},
               {"mobius_form", num(b.mobius_form)},
               {"identity_applicable", b.identity_applicable},
               {"chain_holds", b.chain_holds},
               {"c", num(b.c)},
               {"tau", num(b.tau)},
               {"predicted", num(b.predicted)},
               {"measured_M", num(b.measured_M)},
               {"bound_holds", b.bound_holds}};
    if (b.identity_applicable) r.residuals["mobius_identity"] = num(b.mobius_form - b.decomposition);
    r.residuals["chain_slack"] = num(b.lhs - b.decomposition);
    r.residuals["bound_slack"] = num(b.measured_M - b.predicted);
}

json distance_json(const pr::DistanceReport& d) {
    return {{"f", d.f_label},     {"g", d.g_label},         {"x", d.x},
            {"y", opt(d.y)},      {"d2", num(d.d2)},        {"distance", num(d.distance())},
            {"T", opt(d.T)},      {"t_star", opt(d.t_star)}, {"M", opt(d.M)},
            {"grid_spacing", opt(d.grid_spacing)}, {"grid_points", opt(d.grid_points)}};
}

void op_distance_pair(Params& p, Record& r) {
    auto x = upper_x(p);
    auto f = function_input(p, "f", x);
    auto g = function_input(p, "g", x);
    auto d = pr::distance(f, g, x);
    r.value = distance_json(d);
    r.residuals["symmetry"] = num(d.d2 - pr::distance(g, f, x).d2);
}

void op_distance_range(Params& p, Record& r) {
    auto x = upper_x(p);
    auto y = p.integer("y");
    auto f = function_input(p, "f", x);
    auto g = function_input(p, "g", x);
    require(y >= 2 && y <= x, "2 <= y <= x");
    double d2 = pr::distance_range(f, g, y, x);
    r.value = {{"d2", num(d2)}, {"f", f.label()}, {"g", g.label()}};
    r.residuals["split"] = num(pr::distance(f, g, x).d2 - pr::distance(f, g, y).d2 - d2);
}

void op_distance_twist(Params& p, Record& r) {
    auto x = upper_x(p);
    auto f = function_input(p, "f", x);
    auto T = p.real("T", 1.0);
    auto res = p.real("resolution", 0.01);
    require(T > 0.0, "T > 0");
    require(res > 0.0, "resolution > 0");
    auto d = pr::min_twist(f, x, T, res);
    r.value = distance_json(d);
    if (d.t_star)
        r.residuals["value_recheck"] =
            num(pr::distance(f, pr::twist(*d.t_star), x).d2 - d.d2);
}

void op_bounds_halasz(Params& p, Record& r) {
    auto x = upper_x(p);
    auto f = function_input(p, "f", x);
    auto T = p.real("T", std::log(double(x)));
    require(T > 0.0, "T > 0");
    double rhs = pr::halasz_rhs(f, x, T);
    auto m = measured_sums(f, x);
    r.value = {{"rhs", num(rhs)}, {"measured", num(std::abs(m.flat))}};
    r.residuals["ratio"] = num(std::abs(m.flat) / rhs);
}

void op_bounds_ht(Params& p, Record& r) {
    auto x = upper_x(p);
    auto f = function_input(p, "f", x);
    double rhs = pr::ht_rhs(f, x);
    auto m = measured_sums(f, x);
    r.value = {{"rhs", num(rhs)}, {"measured", num(std::abs(m.flat))}};
    r.residuals["ratio"] = num(std::abs(m.flat) / rhs);
}

void op_bounds_logmean(Params& p, Record& r) {
    auto x = upper_x(p);
    auto f = function_input(p, "f", x);
    auto b = pr::logmean_rhs(f, x);
    auto m = measured_sums(f, x);
    r.value = {{"x", b.x},
               {"M", num(b.M)},
               {"t_halasz", num(b.t_halasz)},
               {"t_logsum", num(b.t_logsum)},
               {"d2_one", num(b.d2_one)},
               {"bound_small_t", num(b.bound_small_t)},
               {"bound_large_t", opt(b.bound_large_t)},
               {"bound_lambda", num(b.bound_lambda)},
               {"large_t_branch", b.large_t_branch},
               {"applicable", num(b.applicable())},
               {"measured", num(std::abs(m.logarithmic))}};
    r.residuals["ratio"] = num(std::abs(m.logarithmic) / b.applicable());
}

void op_bounds_genhalasz(Params& p, Record& r) {
    auto x = upper_x(p);
    auto f = function_input(p, "f", x);
    auto kappa = p.real("kappa", 1.0);
    require(kappa > 0.0, "kappa > 0");
    auto g = pr::genhalasz(f, x, kappa);
    r.value = {{"x", g.x},
               {"kappa", num(g.kappa)},
               {"M", num(g.M)},
               {"t_peak", num(g.t_peak)},
               {"peak", num(g.peak)},
               {"sigma", num(g.sigma)},
               {"t_range", num(g.t_range)},
               {"grid_spacing", num(g.grid_spacing)},
               {"grid_points", g.grid_points},
               {"truncation", g.truncation}};
    r.residuals["M_recheck"] = num(pr::genhalasz_M(f, x, kappa) - g.M);
}

void op_gammak(Params& p, Record& r) {
    auto k = p.integer("k");
    auto mode = p.text("mode", std::string("closed"));
    auto D = p.integer("D", 1'000'000);
    require(k >= 1 && k <= 1'000'000, "1 <= k <= 1e6");
    require(D >= 1, "D >= 1");
    auto gm = gamma_mode(mode);
    double v = pr::gamma_k(int(k), gm, D);
    r.value = {{"value", num(v)}};
    r.residuals["gap_to_closed_form"] = num(v - pr::gamma_k(int(k)));
}

void op_extremal_constants(Params& p, Record& r) {
    auto n_max = p.integer("n_max", 10);
    require(n_max >= 1 && n_max <= 64, "1 <= n_max <= 64");
    auto ten = [](double v) { return round_sig(v, 10); };
    json rows = json::array();
    auto row = [&](const char* name, std::int64_t idx, double v, const char* method) {
        rows.push_back({name, idx, ten(v), method});
    };
    auto ts = ex::solve_tau_full();
    row("lambda", 0, ex::solve_lambda(), "bisection");
    row("tau", 0, ts.tau, "bisection");
    row("theta", 0, ts.theta, "bisection");
    row("decay_ratio", 0, ex::decay_ratio(), "closed_form");
    auto quad = ex::fourier_table(int(n_max), ex::Method::quadrature);
    auto ser = ex::fourier_table(int(n_max), ex::Method::series);
    double gap = 0;
    for (int n = -int(n_max); n <= int(n_max); ++n) {
        row("g", n, quad.real(n), "quadrature");
        row("g", n, ser.real(n), "series");
        gap = std::max(gap, std::abs(quad.at(n) - ser.at(n)));
    }
    for (int m = 0; m <= int(n_max); ++m) row("h", m, ex::h_coefficient(m), "series");
    for (int k = 1; k <= 10; ++k) row("gamma", k, pr::gamma_k(k), "closed_form");
    r.value = table({"quantity", "index", "value", "method"}, rows);
    r.residuals["lambda_residual"] = num(ex::lambda_residual(ex::solve_lambda()));
    r.residuals["tau_residual"] = num(ts.residual);
    r.residuals["quadrature_series_gap"] = num(gap);
}

void op_extremal_fourier(Params& p, Record& r) {
    auto n_max = p.integer("n_max", 20);
    auto m = method_input(p);
    require(n_max >= 0, "n_max >= 0");
    require(m == ex::Method::series || n_max <= 64, "n_max <= 64 for quadrature");
    require(n_max <= 100'000, "n_max <= 1e5");
    auto tab = ex::fourier_table(int(n_max), m);
    json rows = json::array();
    Complex total = 0;
    for (int n = -int(n_max); n <= int(n_max); ++n) {
        Complex g = tab.at(n);
        total += g;
        json bound = std::abs(n) >= 2 ? num(ex::decay_bound(n)) : json(nullptr);
        rows.push_back({n, num(g.real()), num(g.imag()), bound});
    }
    r.value = table({"n", "re", "im", "decay_bound"}, rows);
    // sum of all g_n is g(0) = 1; the truncated sum only approaches it
    r.residuals["partial_sum_minus_one"] = num(std::abs(total - 1.0));
}

void op_extremal_lemma(Params& p, Record& r) {
    auto n_max = p.integer("n_max", 40);
    require(n_max >= 2 && n_max <= 64, "2 <= n_max <= 64");
    auto c = ex::lemma_fourier_checks(int(n_max));
    json clauses = json::array();
    for (auto& cl : c.clauses)
        clauses.push_back({{"name", cl.name},
                           {"pass", cl.pass},
                           {"margin", num(cl.margin)},
                           {"worst_n", cl.worst_n},
                           {"detail", cl.detail}});
    r.value = {{"n_max", c.n_max}, {"clauses", clauses}, {"all_pass", c.all_pass()},
               {"identity_pass", c.identity_pass}};
    r.residuals["identity_residual"] = num(c.identity_residual);
    r.residuals["dual_method_gap"] = num(c.dual_method_gap);
}

void op_extremal_ft(Params& p, Record& r) {
    auto t = p.real("t");
    auto X = upper_x(p);
    require(X <= kValuesCap, "x <= 1e7");
    auto f = ex::build_ft(t, X);
    std::int64_t show = std::min<std::int64_t>(X, 30);
    json vals = json::array();
    for (std::int64_t n = 1; n <= show; ++n) vals.push_back(cx(f(n)));
    auto all = pr::values_upto(f, std::min<std::int64_t>(X, 100'000));
    double excess = 0;
    for (std::size_t n = 1; n < all.size(); ++n) excess = std::max(excess, std::abs(all[n]) - 1.0);
    r.value = {{"label", f.label()}, {"values", vals}};
    r.residuals["max_modulus_excess"] = num(std::max(excess, 0.0));
}

void op_extremal_logsum(Params& p, Record& r) {
    auto X = upper_x(p);
    require(X <= ex::kLogSumCap, "x <= 1e8");
    auto f = function_input(p, "f", X);
    Complex s = ex::log_sum_direct(f, X);
    r.value = {{"value", cx(s)}, {"modulus", num(std::abs(s))}};
    r.residuals["trivial_bound_slack"] = num(std::log(double(X)) + 1.0 - std::abs(s));
}

void op_extremal_prodest(Params& p, Record& r) {
    auto ell = p.integer("ell", 1);
    auto t = p.real("t");
    auto N = p.integer("n", 200);
    auto K = p.integer("K", ex::kDefaultK);
    require(t != 0.0 && std::abs(t) <= 1.0, "0 < |t| <= 1");
    require(N >= 1 && N <= 10'000, "1 <= n <= 1e4");
    require(K >= 20 && K <= 100'000, "20 <= K <= 1e5");
    require(std::abs(ell) <= 64, "|ell| <= 64");
    auto c = ex::prodest_check(int(ell), t, int(N), int(K));
    r.value = {{"t", num(c.t)}, {"product", cx(c.product)}, {"reference", cx(c.reference)},
               {"ratio", cx(c.ratio)}};
    r.residuals["deviation"] = num(c.deviation);
}

void op_extremal_zetaprod(Params& p, Record& r) {
    auto ell = p.integer("ell", 1);
    auto t = p.real("t");
    auto N = p.integer("n", 200);
    require(t != 0.0, "t != 0");
    require(N >= 1 && N <= 10'000, "1 <= n <= 1e4");
    require(std::abs(ell) <= 64, "|ell| <= 64");
    r.value = {{"value", cx(ex::zeta_shift_product(int(ell), t, int(N)))}};
}

json sharpness_json(const ex::SharpnessReport& s) {
    return {{"t", num(s.t)},
            {"x", s.X},
            {"y_t", num(s.y_t)},
            {"log_sum_modulus", num(s.log_sum_modulus)},
            {"d2_X", num(s.d2_X)},
            {"bound", num(s.bound)},
            {"d2_y", num(s.d2_y)},
            {"ratio", num(s.ratio)},
            {"growth", num(s.growth)},
            {"ratio_growth", num(s.ratio_growth)}};
}

void op_extremal_sharpness(Params& p, Record& r) {
    auto t = p.real("t");
    auto X = upper_x(p);
    require(t != 0.0, "t != 0");
    auto s = ex::sharpness_report(t, X);
    r.value = sharpness_json(s);
    r.residuals["identity_residual"] = num(s.identity_residual);
    r.warnings = strings(s.warnings);
}

void op_extremal_convinv(Params& p, Record& r) {
    auto t = p.real("t");
    auto p_max = p.integer("p_max", 1000);
    auto k_max = p.integer("k_max", 8);
    require(p_max >= 2 && p_max <= 10'000'000, "2 <= p_max <= 1e7");
    require(k_max >= 1 && k_max <= 60, "1 <= k_max <= 60");
    auto spec = p.text("f", std::string("ft"));
    std::ostringstream def;
    def.precision(17);
    def << "ft:" << t;
    auto f = function_spec(spec == "ft" ? def.str() : spec, p_max);
    auto c = ex::conv_inverse_check(f, t, p_max, int(k_max));
    r.value = {{"t", num(c.t)},
               {"p_max", c.p_max},
               {"k_max", c.k_max},
               {"max_h_prime", num(c.max_h_prime)},
               {"worst_power_ratio", num(c.worst_power_ratio)},
               {"worst_p", c.worst_p},
               {"worst_k", c.worst_k},
               {"min_factor_slack", num(c.min_factor_slack)},
               {"factor_two", num(c.factor_two)},
               {"H", cx(c.H)},
               {"pass", c.pass}};
    r.residuals["prime_slack"] = num(2.0 - c.max_h_prime);
    r.residuals["power_slack"] = num(1.0 - c.worst_power_ratio);
}

json asymptotic_json(const ex::AsymptoticReport& a) {
    json entries = json::array();
    for (auto& e : a.entries)
        entries.push_back({{"ell", e.ell},
                           {"gamma", num(e.gamma)},
                           {"C", cx(e.C)},
                           {"C_tail_bound", num(e.C_tail_bound)},
                           {"term", cx(e.term)}});
    json args = json::array();
    for (int l : a.argmax_set) args.push_back(l);
    return {{"t", num(a.t)},
            {"x", a.X},
            {"K", a.K},
            {"argmax_set", args},
            {"mu", num(a.mu)},
            {"gap", num(a.gap)},
            {"entries", entries},
            {"main_total", cx(a.main_total)},
            {"direct", opt(a.direct)},
            {"ratio", opt(a.ratio)},
            {"ratio_modulus", opt(a.ratio_modulus)},
            {"growth_ratio", num(a.growth_ratio)}};
}

void op_asymptotic(Params& p, Record& r) {
    auto t = p.real("t");
    auto X = upper_x(p);
    auto K = p.integer("K", ex::kDefaultK);
    bool skip = p.flag("skip_direct");
    require(t != 0.0, "t != 0");
    require(K >= 20 && K <= 100'000, "20 <= K <= 1e5");
    require(skip || X <= ex::kLogSumCap, "x <= 1e8 unless skip_direct");
    auto a = ex::main_term(t, X, int(K), !skip);
    r.value = asymptotic_json(a);
    if (a.ratio_modulus) r.residuals["ratio_modulus_minus_one"] = num(*a.ratio_modulus - 1.0);
    r.warnings = strings(a.warnings);
}

void op_export_walk(Params& p, Record& r) {
    auto chi = character(p);
    auto from = p.integer("from", 1);
    auto to = p.integer("to", chi.modulus());
    require(from >= 1, "from >= 1");
    require(to <= cs::kScanCap, "to <= 1e7");
    json rows = json::array();
    if (from <= to) {
        auto walk = cs::partial_walk(chi, to);
        for (std::int64_t N = from; N <= to; ++N) rows.push_back({N, num(walk[std::size_t(N - 1)])});
    }
    r.value = table({"N", "abs_S"}, rows);
}

std::vector<std::int64_t> x_list(Params& p) {
    auto xs = p.ints("xs", {10'000, 100'000, 1'000'000});
    for (auto x : xs) require(x >= 2, "every x in xs >= 2");
    return xs;
}

void op_export_sharpness(Params& p, Record& r) {
    auto t = p.real("t");
    auto xs = x_list(p);
    require(t != 0.0, "t != 0");
    json rows = json::array();
    for (auto X : xs) {
        auto s = ex::sharpness_report(t, X);
        rows.push_back({X, num(s.ratio), num(s.log_sum_modulus), num(s.bound), num(s.d2_X),
                        num(s.ratio_growth)});
    }
    r.value = table({"X", "ratio", "log_sum_modulus", "bound", "d2_X", "ratio_growth"}, rows);
}

void op_export_asymptotic(Params& p, Record& r) {
    auto t = p.real("t");
    auto xs = x_list(p);
    auto K = p.integer("K", ex::kDefaultK);
    require(t != 0.0, "t != 0");
    require(K >= 20 && K <= 100'000, "20 <= K <= 1e5");
    json rows = json::array();
    for (auto X : xs) {
        auto a = ex::main_term(t, X, int(K), true);
        rows.push_back({X, opt(a.ratio_modulus), num(a.growth_ratio), num(a.main_total.real()),
                        num(a.main_total.imag())});
    }
    r.value = table({"X", "ratio_modulus", "growth_ratio", "main_re", "main_im"}, rows);
}

// analytic layer, verify-only

void op_analytic_primes(Params& p, Record& r) {
    auto limit = p.integer("limit");
    auto t = analytic::sieve_primes(limit);
    r.value = {{"count", std::int64_t(t.primes.size())},
               {"largest", t.primes.empty() ? 0 : std::int64_t(t.primes.back())}};
}

void op_analytic_prsum(Params& p, Record& r) {
    auto x = upper_x(p);
    double s = analytic::prime_reciprocal_sum(x);
    r.value = {{"value", num(s)}};
    constexpr double kMertens = 0.2614972128476427837554;
    r.residuals["mertens_gap"] = num(s - std::log(std::log(double(x))) - kMertens);
}

void op_analytic_zeta(Params& p, Record& r) {
    Complex s(p.real("re"), p.real("im", 0.0));
    auto prec = p.real("precision", 1e-12);
    require(prec > 0.0, "precision > 0");
    r.value = {{"value", cx(analytic::zeta_near_one(s, prec))}};
}

void op_analytic_gamma(Params& p, Record& r) {
    Complex z(p.real("re"), p.real("im", 0.0));
    Complex g = analytic::complex_gamma(z);
    r.value = {{"value", cx(g)}};
    Complex g1 = analytic::complex_gamma(z + 1.0);
    r.residuals["recurrence"] = num(std::abs(g1 - z * g) / std::abs(g1));
}

void op_analytic_rho(Params& p, Record& r) {
    auto u = p.real("u");
    double v = analytic::dickman_rho(u);
    r.value = {{"value", num(v)}};
    if (u >= 1.0 && u <= 2.0) r.residuals["closed_form_gap"] = num(v - (1.0 - std::log(u)));
}

void op_analytic_smooth(Params& p, Record& r) {
    auto x = p.integer("x");
    auto y = p.integer("y");
    r.value = {{"count", analytic::smooth_count(x, y)}};
}

void op_analytic_smoothsum(Params& p, Record& r) {
    auto x = p.integer("x");
    auto y = p.integer("y");
    auto c = p.integer("coprime", 1);
    r.value = {{"value", num(analytic::smooth_reciprocal_sum(x, y, c))}};
}

// ---- the table ----

ArgSpec I(std::string n, std::string h, bool req = false) {
    return {std::move(n), ArgType::integer, std::move(h), req};
}
ArgSpec R(std::string n, std::string h, bool req = false) {
    return {std::move(n), ArgType::real, std::move(h), req};
}
ArgSpec S(std::string n, std::string h, bool req = false) {
    return {std::move(n), ArgType::text, std::move(h), req};
}
ArgSpec F(std::string n, std::string h) { return {std::move(n), ArgType::flag, std::move(h), false}; }
ArgSpec L(std::string n, std::string h) { return {std::move(n), ArgType::int_list, std::move(h), false}; }

const char* kFn = "one | liouville | mobius | sign4 | twist:T | char:LABEL | ft:T";

const std::vector<Entry>& entries() {
    static const std::vector<Entry> all = [] {
        const ArgSpec chr = S("char", "character label q:e1,...,ek", true);
        const ArgSpec qchk = I("q", "modulus (checked against the label)");
        const ArgSpec xreq = I("x", "upper limit", true);
        std::vector<Entry> v = {
            {{"chars", "list", "characters mod q", {I("q", "modulus", true), I("parity", "1 or -1"), I("order", "exact order"), S("primitive", "any | yes | no"), I("limit", "max characters listed")}}, op_chars_list},
            {{"chars", "info", "order, conductor, parity, Gauss sum", {chr, qchk}}, op_chars_info},
            {{"chars", "eval", "chi(n)", {chr, qchk, I("n", "argument", true)}}, op_chars_eval},
            {{"charsum", "max", "max |S(chi,N)| over N <= q", {chr, qchk}}, op_charsum_max},
            {{"charsum", "partial", "S(chi,N)", {chr, qchk, I("n", "N", true)}}, op_charsum_partial},
            {{"charsum", "harmonic", "sum chi(n) n^{-1-it} over n <= N", {chr, qchk, I("n", "N", true), R("t", "height"), I("coprime", "restrict to gcd(n, this) = 1")}}, op_charsum_harmonic},
            {{"charsum", "nq", "N maximizing the twisted harmonic sum", {chr, qchk, S("xi", "second character label", true)}}, op_charsum_nq},
            {{"charsum", "mchi", "M(chi) against the harmonic-sum prediction", {chr, qchk, S("xi", "second character label", true)}}, op_charsum_mchi},
            {{"charsum", "euler", "Euler product over p <= cutoff", {chr, qchk, R("t", "height"), I("cutoff", "prime cutoff", true)}}, op_charsum_euler},
            {{"ltrunc", "", "truncated L(1+it, chi) with error bound", {chr, qchk, R("t", "height"), I("n", "truncation point", true)}}, op_ltrunc},
            {{"polya", "", "Fourier expansion of S(chi, alpha q)", {chr, qchk, R("alpha", "in [0,1]", true), I("cutoff", "|n| cutoff, 0 means q")}}, op_polya},
            {{"arcs", "", "major/minor arc classification", {R("alpha", "point", true), I("q", "modulus", true), R("delta", "in (0,1]", true)}}, op_arcs},
            {{"qrbound", "", "lower bound for real characters via n_q", {I("q", "prime", true), I("ell", "odd squarefree twist modulus")}}, op_qrbound},
            {{"distance", "pair", "D(f,g;x)", {S("f", kFn, true), S("g", kFn, true), xreq}}, op_distance_pair},
            {{"distance", "range", "D(f,g;y,x) over primes in (y,x]", {S("f", kFn, true), S("g", kFn, true), I("y", "lower limit", true), xreq}}, op_distance_range},
            {{"distance", "twist", "min over |t| <= T of D(f, n^{it}; x)", {S("f", kFn, true), xreq, R("T", "twist range"), R("resolution", "grid resolution")}}, op_distance_twist},
            {{"bounds", "halasz", "Halasz bound against |sum f(n)|", {S("f", kFn, true), xreq, R("T", "twist range (default log x)")}}, op_bounds_halasz},
            {{"bounds", "ht", "Hall-Tenenbaum bound for real f", {S("f", kFn, true), xreq}}, op_bounds_ht},
            {{"bounds", "logmean", "bounds for |sum f(n)/n|", {S("f", kFn, true), xreq}}, op_bounds_logmean},
            {{"bounds", "genhalasz", "generalized Halasz M(f;x,kappa)", {S("f", kFn, true), xreq, R("kappa", "range exponent")}}, op_bounds_genhalasz},
            {{"gammak", "", "gamma_k", {I("k", "k >= 1", true), S("mode", "closed | fourier | direct"), I("D", "terms or points")}}, op_gammak},
            {{"extremal", "constants", "lambda, tau, g_n, h_n, gamma_k", {I("n_max", "largest |n|")}, true}, op_extremal_constants},
            {{"extremal", "fourier", "Fourier coefficients g_n", {I("n_max", "largest |n|"), S("method", "series | quadrature")}, true}, op_extremal_fourier},
            {{"extremal", "lemma", "coefficient inequalities", {I("n_max", "largest |n|")}}, op_extremal_lemma},
            {{"extremal", "ft", "the extremal function f_t", {R("t", "height", true), xreq}}, op_extremal_ft},
            {{"extremal", "logsum", "sum f(n)/n over n <= x", {S("f", kFn, true), xreq}}, op_extremal_logsum},
            {{"extremal", "prodest", "zeta-shift product against its limit", {I("ell", "shift"), R("t", "height", true), I("n", "shifts |k| <= n"), I("K", "C truncation")}}, op_extremal_prodest},
            {{"extremal", "zetaprod", "zeta-shift product", {I("ell", "shift"), R("t", "height", true), I("n", "shifts |k| <= n")}}, op_extremal_zetaprod},
            {{"extremal", "sharpness", "log sum of f_t against the lambda bound", {R("t", "height", true), xreq}}, op_extremal_sharpness},
            {{"extremal", "convinv", "convolution inverse bounds", {R("t", "height", true), I("p_max", "prime limit"), I("k_max", "power limit"), S("f", "function (default ft at t)")}}, op_extremal_convinv},
            {{"asymptotic", "", "main term for the log sum of f_t", {R("t", "height", true), xreq, I("K", "C truncation"), F("skip_direct", "no direct sum")}}, op_asymptotic},
            {{"export", "walk", "|S(chi,N)| for N in [from,to]", {chr, qchk, I("from", "first N"), I("to", "last N (default q)")}, true}, op_export_walk},
            {{"export", "sharpness", "sharpness ratio across x", {R("t", "height", true), L("xs", "comma list of x")}, true}, op_export_sharpness},
            {{"export", "asymptotic", "main-term ratio across x", {R("t", "height", true), L("xs", "comma list of x"), I("K", "C truncation")}, true}, op_export_asymptotic},
        };
        auto hidden = [&](const char* action, std::vector<ArgSpec> args, Handler h) {
            v.push_back({{"analytic", action, "", std::move(args)}, std::move(h), true});
        };
        hidden("primes", {I("limit", "", true)}, op_analytic_primes);
        hidden("prsum", {I("x", "", true)}, op_analytic_prsum);
        hidden("zeta", {R("re", "", true), R("im", ""), R("precision", "")}, op_analytic_zeta);
        hidden("gamma", {R("re", "", true), R("im", "")}, op_analytic_gamma);
        hidden("rho", {R("u", "", true)}, op_analytic_rho);
        hidden("smooth", {I("x", "", true), I("y", "", true)}, op_analytic_smooth);
        hidden("smoothsum", {I("x", "", true), I("y", "", true), I("coprime", "")}, op_analytic_smoothsum);
        return v;
    }();
    return all;
}

const Entry& find_entry(const std::string& op) {
    for (auto& e : entries())
        if (op_name(e.spec) == op) return e;
    violated("op '" + op + "' is known");
}

// ---- CSV ----

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.15g", v.get<double>());
        return buf;
    }
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

void flatten(const std::string& prefix, const json& v, std::vector<std::pair<std::string, json>>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(prefix + "." + std::to_string(i), v[i], out);
    } else {
        out.emplace_back(prefix, v);
    }
}

// ---- verify ----

struct SmokeCase {
    std::string op;
    json inputs;
    // empty string on success
    std::function<std::string(const json&)> check;
};

std::string expect(bool ok, const std::string& what) { return ok ? "" : what; }

double jd(const json& v) { return v.is_null() ? NAN : v.get<double>(); }
double res(const json& rec, const char* k) { return jd(rec["residuals"][k]); }
double val(const json& rec, const char* k) { return jd(rec["value"][k]); }
Complex cval(const json& rec, const char* k) {
    return {jd(rec["value"][k]["re"]), jd(rec["value"][k]["im"])};
}

std::int64_t brute_smooth(std::int64_t x, std::int64_t y) {
    std::int64_t c = 0;
    for (std::int64_t n = 1; n <= x; ++n) {
        std::int64_t big = 1, k = n;
        for (std::int64_t p = 2; p * p <= k; ++p)
            while (k % p == 0) {
                big = std::max(big, p);
                k /= p;
            }
        if (k > 1) big = std::max(big, k);
        c += big <= y;
    }
    return c;
}

std::vector<SmokeCase> smoke_cases() {
    const double kLambda = 0.822168391594620243;
    std::vector<SmokeCase> v = {
        {"analytic.primes", {{"limit", 1000}}, [](const json& r) { return expect(r["value"]["count"] == 168, "pi(1000) = 168"); }},
        {"analytic.prsum", {{"x", 1'000'000}}, [](const json& r) { return expect(std::abs(res(r, "mertens_gap")) < 1e-3, "Mertens gap"); }},
        {"analytic.zeta", {{"re", 2.0}, {"im", 0.0}}, [](const json& r) { return expect(std::abs(cval(r, "value") - kPi * kPi / 6) < 1e-12, "zeta(2)"); }},
        {"analytic.gamma", {{"re", 0.5}, {"im", 0.0}}, [](const json& r) { return expect(std::abs(cval(r, "value") - std::sqrt(kPi)) < 1e-12 && res(r, "recurrence") < 1e-12, "Gamma(1/2)"); }},
        {"analytic.rho", {{"u", 1.5}}, [](const json& r) { return expect(std::abs(res(r, "closed_form_gap")) < 1e-12, "rho on [1,2]"); }},
        {"analytic.smooth", {{"x", 2000}, {"y", 13}}, [](const json& r) { return expect(r["value"]["count"] == brute_smooth(2000, 13), "smooth count vs trial division"); }},
        {"analytic.smoothsum", {{"x", 100}, {"y", 100}}, [](const json& r) {
             double h = 0;
             for (int n = 1; n <= 100; ++n) h += 1.0 / n;
             return expect(std::abs(val(r, "value") - h) < 1e-12, "harmonic number H_100");
         }},
        {"chars.list", {{"q", 120}}, [](const json& r) { return expect(r["residuals"]["count_minus_phi"] == 0, "phi(q) characters"); }},
        {"chars.info", {{"char", "163:1"}}, [](const json& r) { return expect(std::abs(res(r, "gauss_modulus_sq_minus_q")) < 1e-8 && res(r, "primitive_mismatch") < 1e-12, "|g|^2 = q"); }},
        {"chars.eval", {{"char", "15:1,1"}, {"n", 7}}, [](const json& r) { return expect(std::abs(res(r, "modulus_minus_one")) < 1e-14, "|chi(n)| = 1"); }},
        {"charsum.max", {{"char", "997:1"}, {"q", 997}}, [](const json& r) { return expect(std::abs(res(r, "argmax_recheck")) < 1e-9, "argmax recheck"); }},
        {"charsum.partial", {{"char", "163:3"}, {"n", 50}}, [](const json& r) { return expect(res(r, "full_period_sum") < 1e-9, "full period sums to 0"); }},
        {"charsum.harmonic", {{"char", "5:1"}, {"n", 1000}, {"t", 0.0}, {"coprime", 1}}, [](const json& r) { return expect(std::isfinite(cval(r, "value").real()), "finite"); }},
        {"charsum.nq", {{"char", "71:35"}, {"xi", "1:"}}, [](const json& r) { return expect(std::abs(res(r, "value_recheck")) < 1e-9, "N_q recheck"); }},
        {"charsum.mchi", {{"char", "163:81"}, {"xi", "1:"}}, [](const json& r) { return expect(r["value"]["tau_interval_ok"] == true, "1/2 <= ratio <= 3"); }},
        {"charsum.euler", {{"char", "5:1"}, {"t", 0.0}, {"cutoff", 100'000}}, [](const json& r) { return expect(res(r, "gap_to_truncated") < 0.05, "Euler product near L"); }},
        {"ltrunc", {{"char", "163:81"}, {"t", 0.5}, {"n", 10'000}}, [](const json& r) { return expect(r["residuals"]["within_bound"] == true, "doubling gap within bound"); }},
        {"polya", {{"char", "163:81"}, {"alpha", 0.3}}, [](const json& r) { return expect(res(r, "gap_over_sqrt_q") < 1.0, "expansion tracks S"); }},
        {"arcs", {{"alpha", 0.25}, {"q", 1'000'000}, {"delta", 0.9}}, [](const json& r) { return expect(r["value"]["type"] == "major" && r["value"]["m"] == 4, "1/4 is major"); }},
        {"qrbound", {{"q", 43}, {"ell", 1}}, [](const json& r) { return expect(r["value"]["n_q"] == 2 && r["value"]["bound_holds"] == true, "n_43 = 2 and bound"); }},
        {"distance.pair", {{"f", "mobius"}, {"g", "one"}, {"x", 10'000}}, [](const json& r) { return expect(std::abs(res(r, "symmetry")) < 1e-12, "symmetric"); }},
        {"distance.range", {{"f", "liouville"}, {"g", "one"}, {"y", 100}, {"x", 10'000}}, [](const json& r) { return expect(std::abs(res(r, "split")) < 1e-10, "additive split"); }},
        {"distance.twist", {{"f", "twist:0.25"}, {"x", 10'000}}, [](const json& r) { return expect(std::abs(val(r, "t_star") - 0.25) < 1e-3, "recovers t"); }},
        {"bounds.halasz", {{"f", "mobius"}, {"x", 20'000}}, [](const json& r) { return expect(res(r, "ratio") <= 10, "ratio <= 10"); }},
        {"bounds.ht", {{"f", "liouville"}, {"x", 20'000}}, [](const json& r) { return expect(res(r, "ratio") <= 10, "ratio <= 10"); }},
        {"bounds.logmean", {{"f", "char:5:1"}, {"x", 20'000}}, [](const json& r) { return expect(res(r, "ratio") <= 10, "ratio <= 10"); }},
        {"bounds.genhalasz", {{"f", "mobius"}, {"x", 2000}, {"kappa", 1.0}}, [](const json& r) { return expect(std::abs(res(r, "M_recheck")) < 1e-12 && std::isfinite(val(r, "M")), "M recheck"); }},
        {"gammak", {{"k", 4}, {"mode", "fourier"}, {"D", 100'000}}, [](const json& r) { return expect(std::abs(res(r, "gap_to_closed_form")) < 1e-3, "fourier vs closed form"); }},
        {"extremal.constants", {{"n_max", 4}}, [=](const json& r) {
             auto row = r["value"]["rows"][0];
             return expect(std::abs(row[2].get<double>() - kLambda) < 1e-9 && std::abs(res(r, "lambda_residual")) < 1e-12 && res(r, "quadrature_series_gap") < 1e-10, "lambda and dual methods");
         }},
        {"extremal.fourier", {{"n_max", 2000}, {"method", "series"}}, [](const json& r) { return expect(res(r, "partial_sum_minus_one") < 1e-6, "sum of g_n = 1"); }},
        {"extremal.lemma", {{"n_max", 40}}, [](const json& r) { return expect(r["value"]["all_pass"] == true, "all clauses"); }},
        {"extremal.ft", {{"t", 0.2}, {"x", 10'000}}, [](const json& r) { return expect(res(r, "max_modulus_excess") <= 1e-12, "unit disc"); }},
        {"extremal.logsum", {{"f", "ft:0.2"}, {"x", 100'000}}, [](const json& r) { return expect(res(r, "trivial_bound_slack") >= 0, "|sum f/n| <= log x + 1"); }},
        {"extremal.prodest", {{"ell", 1}, {"t", 0.05}, {"n", 200}}, [](const json& r) { return expect(res(r, "deviation") < 0.3, "product near limit"); }},
        {"extremal.zetaprod", {{"ell", 1}, {"t", 0.1}, {"n", 200}}, [](const json& r) { return expect(std::isfinite(r["value"]["value"]["re"].get<double>()), "finite"); }},
        {"extremal.sharpness", {{"t", 0.2}, {"x", 100'000}}, [](const json& r) { return expect(std::abs(res(r, "identity_residual")) < 1e-9, "identity"); }},
        {"extremal.convinv", {{"t", 0.2}, {"p_max", 500}, {"k_max", 6}}, [](const json& r) { return expect(r["value"]["pass"] == true, "inverse bounds"); }},
        {"asymptotic", {{"t", 0.2}, {"x", 100'000}}, [](const json& r) { return expect(std::isfinite(res(r, "ratio_modulus_minus_one")), "ratio finite"); }},
        {"export.walk", {{"char", "163:1"}}, [](const json& r) { return expect(r["value"]["rows"].size() == 163, "163 rows"); }},
        {"export.sharpness", {{"t", 0.2}, {"xs", {10'000, 100'000}}}, [](const json& r) { return expect(r["value"]["rows"].size() == 2, "2 rows"); }},
        {"export.asymptotic", {{"t", 0.2}, {"xs", json::array()}}, [](const json& r) { return expect(r["value"]["rows"].empty(), "empty range"); }},
    };
    return v;
}

struct VerifyRow {
    std::string name;
    bool pass;
    double seconds;
    std::string note;
};

}  // namespace

double round15(double x) { return round_sig(x, 15); }

const std::vector<OpSpec>& operations() {
    static const std::vector<OpSpec> specs = [] {
        std::vector<OpSpec> v;
        for (auto& e : entries()) v.push_back(e.spec);
        return v;
    }();
    return specs;
}

std::string op_name(const OpSpec& s) {
    return s.action.empty() ? s.command : s.command + "." + s.action;
}

json dispatch(const std::string& op, const json& inputs) {
    const Entry& e = find_entry(op);
    if (!inputs.is_null() && !inputs.is_object()) violated("inputs is a JSON object");
    if (inputs.is_object()) {
        for (auto it = inputs.begin(); it != inputs.end(); ++it) {
            bool known = false;
            for (auto& a : e.spec.args) known = known || a.name == it.key();
            if (!known) violated("input '" + it.key() + "' is accepted by " + op);
        }
    }
    Params p(inputs);
    Record r;
    e.run(p, r);
    return {{"op", op},
            {"inputs", p.normalized()},
            {"value", r.value},
            {"residuals", r.residuals},
            {"warnings", r.warnings}};
}

std::string to_csv(const json& record) {
    std::ostringstream os;
    const json& v = record.at("value");
    if (v.contains("columns") && v.contains("rows")) {
        const json& cols = v["columns"];
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_cell(cols[i]);
        os << "\n";
        for (auto& row : v["rows"]) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return os.str();
    }
    std::vector<std::pair<std::string, json>> cells;
    cells.emplace_back("op", record.at("op"));
    flatten("", v, cells);
    flatten("residuals", record.at("residuals"), cells);
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i].first);
    os << "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i].second);
    os << "\n";
    return os.str();
}

namespace {

int error_exit(std::ostream& err, const std::string& kind, const std::string& msg) {
    json e = {{"error", {{"kind", kind}, {"message", msg}}}};
    err << e.dump() << "\n";
    if (kind == "capacity") return kExitCapacity;
    if (kind == "usage" || kind == "precondition" || kind == "domain" || kind == "pole" ||
        kind == "degeneracy")
        return kExitUsage;
    return kExitRuntime;
}

std::vector<VerifyRow> run_smoke(std::vector<json>* records) {
    std::vector<VerifyRow> rows;
    std::set<std::string> seen;
    for (auto& c : smoke_cases()) {
        auto t0 = std::chrono::steady_clock::now();
        VerifyRow row{c.op, false, 0.0, ""};
        try {
            json rec = dispatch(c.op, c.inputs);
            std::string bad = c.check(rec);
            // round trip through text and back through dispatch
            json again = json::parse(rec.dump());
            if (bad.empty() && dispatch(again["op"], again["inputs"]) != rec)
                bad = "re-dispatch differs";
            row.pass = bad.empty();
            row.note = bad.empty() ? "ok" : bad;
            if (records) records->push_back(rec);
        } catch (const std::exception& e) {
            row.note = std::string("threw: ") + e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        seen.insert(c.op);
        rows.push_back(row);
    }
    for (auto& s : operations()) {
        auto n = op_name(s);
        if (!seen.count(n)) rows.push_back({n, false, 0.0, "not exercised"});
    }
    return rows;
}

int run_verify(const std::string& suite, std::uint64_t seed, const std::string& format,
               std::ostream& out) {
    std::vector<VerifyRow> rows;
    if (suite == "smoke" || suite == "all") rows = run_smoke(nullptr);
    if (suite == "acceptance" || suite == "all") {
        acceptance::Options opt;
        opt.seed = seed;
        for (int id = 1; id <= acceptance::kCriteria; ++id) {
            auto o = acceptance::run_criterion(id, opt);
            rows.push_back({"acceptance." + std::to_string(id) + "." + o.name, o.pass, o.seconds,
                            o.detail});
        }
    }
    int passed = 0;
    for (auto& r : rows) passed += r.pass;
    bool ok = passed == int(rows.size());
    if (format == "json") {
        json a = json::array();
        for (auto& r : rows)
            a.push_back({{"name", r.name}, {"pass", r.pass}, {"note", r.note}});
        out << json{{"op", "verify"},
                    {"inputs", {{"suite", suite}, {"seed", seed}}},
                    {"value", {{"passed", passed}, {"total", rows.size()}, {"checks", a}}}}
                   .dump(2)
            << "\n";
    } else {
        std::size_t w = 4;
        for (auto& r : rows) w = std::max(w, r.name.size());
        char buf[64];
        for (auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%8.2f s  ", r.seconds);
            out << (r.pass ? "PASS  " : "FAIL  ") << r.name << std::string(w - r.name.size() + 2, ' ')
                << buf << r.note << "\n";
        }
        out << passed << "/" << rows.size() << " checks passed\n";
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

json parse_cli_value(const ArgSpec& a, const std::string& s) {
    auto bad = [&]() -> json {
        throw CLI::ValidationError("--" + a.name, "expects " +
                                   std::string(a.type == ArgType::integer ? "an integer" : "a number"));
    };
    auto as_int = [&](const std::string& tok) -> std::int64_t {
        try {
            std::size_t used = 0;
            long long v = std::stoll(tok, &used);
            if (used == tok.size()) return v;
            double d = std::stod(tok, &used);  // 1e6 style
            if (used == tok.size() && std::floor(d) == d && std::abs(d) < 9e18) return std::int64_t(d);
        } catch (const std::logic_error&) {
        }
        bad();
        return 0;
    };
    switch (a.type) {
    case ArgType::integer:
        return as_int(s);
    case ArgType::real: {
        try {
            std::size_t used = 0;
            double d = std::stod(s, &used);
            if (used == s.size()) return d;
        } catch (const std::logic_error&) {
        }
        return bad();
    }
    case ArgType::int_list: {
        json arr = json::array();
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) arr.push_back(as_int(tok));
        return arr;
    }
    case ArgType::real_list: {
        json arr = json::array();
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) arr.push_back(std::stod(tok));
        return arr;
    }
    case ArgType::text:
        return s;
    case ArgType::flag:
        return true;
    }
    return nullptr;
}

std::string cli_flag(const std::string& key) {
    std::string s = key;
    for (auto& c : s)
        if (c == '_') c = '-';
    return "--" + s;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pretlab: multiplicative functions, character sums and the extremal example"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string format = "auto";
    std::string output;
    unsigned threads = 0;
    int verbose = 0;
    app.add_option("--format", format, "json | csv (default: csv for tables, json otherwise)")
        ->check(CLI::IsMember({"auto", "json", "csv"}));
    app.add_option("-o,--output", output, "write here instead of stdout");
    app.add_option("--threads", threads, "worker threads, 0 = all cores");
    app.add_flag("-v,--verbose", verbose, "warnings to stderr");

    const auto& specs = operations();
    const auto& all = entries();
    std::vector<std::map<std::string, std::string>> given(specs.size());
    std::vector<std::map<std::string, bool>> flags(specs.size());
    std::vector<CLI::App*> leaves(specs.size(), nullptr);
    std::map<std::string, CLI::App*> commands;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (all[i].hidden) continue;
        const auto& s = specs[i];
        CLI::App*& cmd = commands[s.command];
        if (!cmd) {
            cmd = app.add_subcommand(s.command, s.action.empty() ? s.help : s.command + " operations");
            if (!s.action.empty()) cmd->require_subcommand(1);
        }
        CLI::App* leaf = s.action.empty() ? cmd : cmd->add_subcommand(s.action, s.help);
        leaves[i] = leaf;
        for (auto& a : s.args) {
            if (a.type == ArgType::flag) {
                leaf->add_flag(cli_flag(a.name), flags[i][a.name], a.help);
            } else {
                auto* o = leaf->add_option(cli_flag(a.name), given[i][a.name], a.help);
                if (a.required) o->required();
            }
        }
    }
    std::string suite = "smoke";
    std::uint64_t seed = acceptance::kDefaultSeed;
    auto* verify = app.add_subcommand("verify", "run the self-check suites");
    verify->add_option("--suite", suite, "all | acceptance | smoke")
        ->check(CLI::IsMember({"all", "acceptance", "smoke"}));
    verify->add_option("--seed", seed, "seed for randomized criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        // help on a subcommand surfaces as a parse error with exit code 0
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        return error_exit(err, "usage", msg);
    }

    set_parallelism(threads);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) return error_exit(err, "io", "cannot write '" + output + "'");
    }
    std::ostream& sink = output.empty() ? out : file;

    try {
        if (verify->parsed()) {
            int rc = run_verify(suite, seed, format == "json" ? "json" : "text", sink);
            sink.flush();
            if (!output.empty() && !file) return error_exit(err, "io", "write to '" + output + "' failed");
            return rc;
        }
        std::size_t chosen = specs.size();
        for (std::size_t i = 0; i < specs.size(); ++i)
            if (leaves[i] && leaves[i]->parsed()) chosen = i;
        if (chosen == specs.size()) return error_exit(err, "usage", "no operation selected");
        const auto& s = specs[chosen];

        json inputs = json::object();
        for (auto& a : s.args) {
            if (a.type == ArgType::flag) {
                if (flags[chosen][a.name]) inputs[a.name] = true;
                continue;
            }
            auto it = given[chosen].find(a.name);
            if (leaves[chosen]->count(cli_flag(a.name)) == 0) continue;
            inputs[a.name] = parse_cli_value(a, it->second);
        }
        json rec = dispatch(op_name(s), inputs);
        if (verbose)
            for (auto& w : rec["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
        bool csv = format == "csv" || (format == "auto" && s.table);
        if (csv) sink << to_csv(rec);
        else sink << rec.dump(2) << "\n";
        sink.flush();
        if (!output.empty() && !file) return error_exit(err, "io", "write to '" + output + "' failed");
        return kExitOk;
    } catch (const CLI::ValidationError& e) {
        return error_exit(err, "usage", e.what());
    } catch (const Error& e) {
        return error_exit(err, e.kind(), e.what());
    } catch (const std::exception& e) {
        return error_exit(err, "internal", e.what());
    }
}

}  // namespace pretlab::cli
