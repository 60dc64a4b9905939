#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nbwalk/bigint.hpp"
#include "nbwalk/budget.hpp"
#include "nbwalk/graph.hpp"

namespace nbwalk {

// Polynomial family p_{r,k}: p_0 = 1, p_1 = x,
// p_{k+2} = r/(r-1) x p_{k+1} - 1/(r-1) p_k. On an r-regular graph the
// k-step NB transition matrix equals p_k(P). For r = 2 these are the
// Chebyshev polynomials of the first kind.
struct PolyParams {
    int degree = 2;  // r >= 2
    int step = 0;    // k >= 0
};

enum class Regime { subcritical, critical, supercritical };

std::string_view to_string(Regime regime);

struct RegimeClassification {
    double x = 0.0;
    double threshold = 0.0;     // 2 sqrt(r-1) / r
    double discriminant = 0.0;  // r^2 x^2 - 4 (r-1)
    Regime regime = Regime::subcritical;
    std::optional<double> theta;  // cos(theta) = r x / (2 sqrt(r-1)); subcritical only
};

// Discriminants within critical_tolerance of zero count as critical.
inline constexpr double kCriticalTolerance = 1e-9;
RegimeClassification classify(int degree, double x, double critical_tolerance = kCriticalTolerance);

double critical_threshold(int degree);

// Exact for rational input. Throws InvalidArgument for r < 2 or k < 0.
Rational p_eval_recurrence(PolyParams params, const Rational& x);
double p_eval_recurrence(PolyParams params, double x);
long double p_eval_recurrence(PolyParams params, long double x);

// p_0(x) .. p_{k_max}(x) in one pass.
std::vector<double> p_sequence(int degree, int k_max, double x);

// Root-based closed form dispatched on the discriminant:
//   supercritical  1/2 [(1 + x(r-2)/sqrt D) rho_+^k + (1 - x(r-2)/sqrt D) rho_-^k]
//   subcritical    (r-1)^{-k/2} (cos k theta + (r-2) x / sqrt(-D) sin k theta)
//   critical       (sgn x)^k (r-1)^{-k/2} (1 + (r-2) k / r)
// Ill-conditioned as D -> 0 from below; the recurrence is the reference.
double p_eval_closed_form(PolyParams params, double x);

// Eigenvalue bound for p_k(lambda), k >= 1:
//   |lambda| above threshold:    |p_k(lambda)| <= |lambda|^k
//   at or below threshold:       |p_k(lambda)| <= C_r k (r-1)^{-k/2}
struct BoundCheck {
    Regime regime = Regime::subcritical;
    double value = 0.0;   // p_k(lambda)
    double bound = 0.0;
    double margin = 0.0;  // bound - |value|
    bool pass = false;
};

inline constexpr double kDefaultBoundConstant = 2.0;
BoundCheck check_eig_bound(PolyParams params, double lambda, double c_r = kDefaultBoundConstant);

struct BoundSweepRow {
    int degree = 0;
    int step = 0;
    double x = 0.0;
    BoundCheck check;
};

struct BoundSweepSummary {
    std::size_t checked = 0;
    std::size_t failures = 0;
    double min_margin_supercritical = 0.0;  // +inf when no supercritical point was tested
    double min_margin_subcritical = 0.0;
    bool pass() const { return failures == 0; }
};

// Grid: `points` equally spaced values on [-1, 1] (endpoints included) plus
// the two threshold points +-2 sqrt(r-1)/r. Checks every (r, k, x) with
// 1 <= k <= k_max. Optional sink receives each row in deterministic order
// (by r, then x, then k) and forces single-threaded evaluation.
BoundSweepSummary bound_sweep(std::span<const int> degrees, int k_max, std::size_t points,
                              double c_r = kDefaultBoundConstant, std::size_t workers = 0,
                              const std::function<void(const BoundSweepRow&)>& sink = {});

std::vector<double> bound_sweep_grid(int degree, std::size_t points);

struct TorusSpectrum {
    TorusSpec spec;
    std::vector<double> eigenvalues;  // of P = A / (2d); index = torus vertex of the frequency tuple
};

// lambda_j = (1/d) sum_i cos(2 pi j_i / n) over all j in {0..n-1}^d.
// Throws CapacityError when n^d exceeds budgets.max_vertices.
TorusSpectrum torus_spectrum(const TorusSpec& spec, const Budgets& budgets = {});

struct SpectralReturnRow {
    int k = 0;               // walk length is 2k
    double simple = 0.0;     // (1/N) sum lambda^{2k}
    double nb = 0.0;         // (1/N) sum p_{2k}(lambda)
    bool lattice_exact = false;  // 2k < n: equals the Z^d value; otherwise torus-specific
};

std::vector<SpectralReturnRow> spectral_return_probs(const TorusSpectrum& spectrum, int k_max);

}  // namespace nbwalk
