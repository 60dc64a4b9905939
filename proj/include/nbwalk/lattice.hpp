#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nbwalk/bigint.hpp"
#include "nbwalk/budget.hpp"

namespace nbwalk {

// Closed walks of length 2n at the origin of Z^d:
//   d = 1: C(2n, n);  d = 2: C(2n, n)^2;
//   d >= 3: sum over k_1 + ... + k_d = n of (2n)! / (k_1!^2 ... k_d!^2).
BigInt simple_closed_count(int d, int n);

// The two index forms of the alternating-sum count of closed NB walks of
// length 2n on Z^2 (n >= 1).
struct Z2SumForms {
    BigInt by_step;      // sum over i of (-3)^i C(2n-i, i) C(2n-2i, n-i)^2 - (same at n-1)
    BigInt by_diagonal;  // sum over k of (-3)^{n-k} C(n+k, 2k) C(2k, k)^2 - (same at n-1)
};
Z2SumForms nb_closed_count_z2_sum_forms(int n);

// Both forms, checked against each other; throws std::logic_error on
// disagreement.
BigInt nb_closed_count_z2_sum(int n);

// T_n = [x^n] (1 + x + x^2)^n, from sum_k C(n, 2k) C(2k, k).
BigInt central_trinomial(int n);

// T_n by expanding (1 + x + x^2)^n and reading off the middle coefficient.
BigInt central_trinomial_by_expansion(int n);

// T_0..T_max via n T_n = (2n - 1) T_{n-1} + 3 (n - 1) T_{n-2}. Built once,
// read-only afterwards.
class TrinomialTable {
public:
    explicit TrinomialTable(int max_n);

    int max_n() const { return static_cast<int>(values_.size()) - 1; }
    const BigInt& operator[](int n) const { return values_.at(static_cast<std::size_t>(n)); }

private:
    std::vector<BigInt> values_;
};

struct SunCheck {
    BigInt lhs;  // T_n^2
    BigInt rhs;  // sum_k C(n+k, 2k) C(2k, k)^2 (-3)^{n-k}
    bool pass() const { return lhs == rhs; }
};
SunCheck sun_identity_check(int n);

// T_n^2 - T_{n-1}^2 closed NB walks of length 2n on Z^2 (n >= 1).
BigInt nb_closed_count_z2_trinomial(int n);

// Closed NB walks of length 2n at the origin of Z^d via the regular-graph
// closed form with r = 2d and simple closed counts for the A-power diagonals.
BigInt nb_closed_count_zd(int d, int n);

// Independent check: dynamic program over (lattice offset, last direction)
// counting closed NB walks of length k from the origin. Throws
// OracleBudgetError when d * (2k+1)^d exceeds budgets.dp_states or d exceeds
// budgets.dp_max_dim.
BigInt lattice_dp_oracle(int d, int k, const Budgets& budgets = {});

// sqrt(3) / (2 sqrt(n pi)) 3^n (1 - 3 / (16 n)). Overflows to +inf past n ~ 640.
double trinomial_asymptotic(int n);

// |approx / T_n - 1| evaluated in log space, valid for any n >= 1.
double trinomial_asymptotic_error(int n, const BigInt& exact);

// Natural log of a positive big integer.
double log_of(const BigInt& value);

enum class WalkKind { simple, nb };

struct ReturnEntry {
    int k = 0;        // walk length 2k
    BigInt count;     // closed walks
    BigInt total;     // all walks of that length
    Rational prob;    // count / total
    double prob_float = 0.0;
    double partial_sum = 0.0;  // sum_{j=1}^{k} prob_float
    std::optional<double> asymptotic_ratio;
};

// Entries start at k = 1; the trivial p(0) = 1 is not part of the sums.
struct ReturnSeries {
    int dimension = 0;
    WalkKind kind = WalkKind::nb;
    std::vector<ReturnEntry> entries;
};

// NB walks: total 2d (2d-1)^{2k-1}. For d = 2 the ratio column is p(2k) 2 pi k.
ReturnSeries nb_return_series(int d, int k_max);

// Simple walks: total (2d)^{2k}. Ratio column: p sqrt(pi k) for d = 1,
// p pi k for d = 2, p (pi k)^{d/2} for d >= 3 (the unspecified constant).
ReturnSeries simple_return_series(int d, int k_max);

// Least-squares slope of partial_sum against ln k over k in [k_lo, k_hi].
double log_slope(const ReturnSeries& series, int k_lo, int k_hi);

// Power-law fit p(2k) ~ c k^{-alpha} over k in [k_from / 2, k_from] and the
// implied tail sum_{k > k_from} p(2k) ~ c (k_from + 1/2)^{1 - alpha} / (alpha - 1).
struct TailEstimate {
    double exponent = 0.0;
    double constant = 0.0;
    double tail = 0.0;
};
TailEstimate power_law_tail(const ReturnSeries& series, int k_from);

}  // namespace nbwalk
