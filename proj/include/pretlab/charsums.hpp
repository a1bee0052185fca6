#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pretlab/characters.hpp"

namespace pretlab::charsums {

using characters::DirichletCharacter;

inline constexpr std::int64_t kScanCap = 10'000'000;

/// S(chi, N), direct.
Complex partial_sum(const DirichletCharacter& chi, std::int64_t N);

struct MaxPartial {
    double M;
    std::int64_t argmax;  // smallest N attaining M
};
/// max over 1 <= N <= q of |S(chi, N)|
MaxPartial max_partial(const DirichletCharacter& chi);

/// Sum over n <= N, gcd(n, coprime_to) = 1 of chi(n) n^{-1-it}.
Complex harmonic_partial(const DirichletCharacter& chi, std::int64_t N, double t = 0.0,
                         std::int64_t coprime_to = 1);

enum class Weight { flat, harmonic };

// Prefix sums of chi(n) (flat) or chi(n) n^{-1-it} (harmonic) up to N.
struct SumSeries {
    std::string label;
    double t = 0.0;
    Weight weight = Weight::flat;
    std::vector<std::int64_t> checkpoints;
    std::vector<Complex> prefix;  // at checkpoints
    std::int64_t argmax = 0;
    double max_modulus = 0.0;
};
SumSeries sum_series(const DirichletCharacter& chi, std::int64_t N, Weight w, double t,
                     const std::vector<std::int64_t>& checkpoints);

/// Modulus of S(chi, N) for every 1 <= N <= upto, for plotting.
std::vector<double> partial_walk(const DirichletCharacter& chi, std::int64_t upto);

struct NqResult {
    std::int64_t N;
    double value;
};
/// argmax over 1 <= N <= q (q = modulus of chi) of |sum_{n<=N} (chi xi-bar)(n)/n|
NqResult find_Nq(const DirichletCharacter& chi, const DirichletCharacter& xi);

struct Truncation {
    Complex value;
    double error_bound;  // (2+|t|) M(chi) / N
    double M;
};
Truncation L_truncated(const DirichletCharacter& chi, double t, std::int64_t N);

/// prod over p <= cutoff of (1 - chi(p) p^{-1-it})^{-1}
Complex L_euler_proxy(const DirichletCharacter& chi, double t, std::int64_t cutoff);

/// (g(chi)/2 pi i) sum over 1 <= |n| <= cutoff of chi-bar(n)/n (1 - e(-n alpha)).
/// cutoff <= 0 means q.
Complex polya_rhs(const DirichletCharacter& chi, double alpha, std::int64_t cutoff = 0);
/// same, reusing a Gauss sum already at hand
Complex polya_rhs(const DirichletCharacter& chi, Complex gauss, double alpha,
                  std::int64_t cutoff = 0);

enum class ArcType { major, minor };

struct ArcClassification {
    double alpha;
    double delta;
    std::int64_t q;
    std::int64_t b;
    std::int64_t m;
    ArcType type;
    double N_alpha;
    double R_q;
    double r_q;
};
double major_arc_bound(std::int64_t q, double delta);  // R_q
double minor_arc_floor(std::int64_t q, double delta);  // r_q
ArcClassification classify_arc(double alpha, std::int64_t q, double delta);

struct MchiReport {
    std::string chi_label, xi_label;
    double M;
    std::int64_t argmax;
    std::int64_t N_q;
    double max_harmonic;
    double scale;       // sqrt(q l) / (pi phi(l))
    double ratio;       // M / (scale * max_harmonic)
    std::optional<double> tau;  // xi nontrivial only
    // xi trivial: 1/2 <= ratio <= 3, and the two one-sided bounds
    std::optional<bool> tau_interval_ok;
    std::optional<double> upper_bound;  // 3/pi sqrt(q) |sum|
    std::optional<double> lower_bound;  // 1/(2 pi) sqrt(q) |sum|
};
MchiReport mchi_ratio_report(const DirichletCharacter& chi, const DirichletCharacter& xi);

struct QrReport {
    std::int64_t q, ell;
    std::int64_t n_q;
    std::int64_t y;
    double x;
    double lhs;              // sum_{n<=x,(n,l)=1} (n/q)/n
    double smooth_sum;       // sum over y-smooth n<=x, (n,l)=1
    double all_sum;          // sum over n<=x, (n,l)=1
    double decomposition;    // 2 smooth_sum - all_sum
    double mobius_form;      // sum_{d|l} mu(d)/d (2 S_smooth(x/d) - S_all(x/d))
    bool identity_applicable;  // every prime of l is <= y
    bool chain_holds;        // lhs >= decomposition
    double c;                // 2(sqrt e - 1)/pi
    double tau;
    double predicted;        // c tau sqrt(q) log n_q
    double measured_M;       // M((./lq))
    bool bound_holds;
};
std::int64_t least_nonresidue(std::int64_t q);
QrReport qr_lower_bound(std::int64_t q, std::int64_t ell);

}  // namespace pretlab::charsums
