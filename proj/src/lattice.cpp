#include "nbwalk/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nbwalk/errors.hpp"

namespace nbwalk {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(what);
}

// (-3)^e
BigInt minus_three_pow(long e) { return power(-3, static_cast<unsigned long>(e)); }

// sum_{k_1+...+k_d = m} (m! / (k_1! ... k_d!))^2, memoized per thread.
const BigInt& squared_multinomial_sum(int d, int m) {
    thread_local std::vector<std::vector<BigInt>> cache;
    if (static_cast<int>(cache.size()) <= d) cache.resize(static_cast<std::size_t>(d) + 1);
    auto& row = cache[static_cast<std::size_t>(d)];
    while (static_cast<int>(row.size()) <= m) {
        const int mm = static_cast<int>(row.size());
        BigInt value;
        if (d == 1) {
            value = 1;
        } else {
            for (int k = 0; k <= mm; ++k) {
                BigInt c = binomial(mm, k);
                value += c * c * squared_multinomial_sum(d - 1, mm - k);
            }
        }
        // Recursive calls may have resized the outer cache; re-fetch the row.
        cache[static_cast<std::size_t>(d)].push_back(std::move(value));
    }
    return cache[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)];
}

// sum_{i=0}^{m} (-3)^i C(2m-i, i) C(2m-2i, m-i)^2
BigInt z2_step_sum(int m) {
    BigInt total;
    for (int i = 0; i <= m; ++i) {
        BigInt c = binomial(2 * m - 2 * i, m - i);
        total += minus_three_pow(i) * binomial(2 * m - i, i) * c * c;
    }
    return total;
}

}  // namespace

BigInt simple_closed_count(int d, int n) {
    require(d >= 1, "dimension must be >= 1");
    require(n >= 0, "n must be >= 0");
    BigInt central = binomial(2 * n, n);
    if (d == 1) return central;
    if (d == 2) return central * central;
    return central * squared_multinomial_sum(d, n);
}

Z2SumForms nb_closed_count_z2_sum_forms(int n) {
    require(n >= 1, "n must be >= 1");
    Z2SumForms forms;
    forms.by_step = z2_step_sum(n) - z2_step_sum(n - 1);

    for (int k = 0; k <= n; ++k) {
        BigInt c = binomial(2 * k, k);
        forms.by_diagonal += minus_three_pow(n - k) * binomial(n + k, 2 * k) * c * c;
    }
    for (int k = 1; k <= n; ++k) {
        BigInt c = binomial(2 * k - 2, k - 1);
        forms.by_diagonal -= minus_three_pow(n - k) * binomial(n + k - 2, 2 * k - 2) * c * c;
    }
    return forms;
}

BigInt nb_closed_count_z2_sum(int n) {
    auto forms = nb_closed_count_z2_sum_forms(n);
    if (forms.by_step != forms.by_diagonal) {
        throw std::logic_error("Z^2 alternating-sum forms disagree at n=" + std::to_string(n));
    }
    return forms.by_step;
}

BigInt central_trinomial(int n) {
    require(n >= 0, "n must be >= 0");
    BigInt total;
    for (int k = 0; 2 * k <= n; ++k) total += binomial(n, 2 * k) * binomial(2 * k, k);
    return total;
}

BigInt central_trinomial_by_expansion(int n) {
    require(n >= 0, "n must be >= 0");
    std::vector<BigInt> poly{1};
    for (int step = 0; step < n; ++step) {
        std::vector<BigInt> next(poly.size() + 2);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] += poly[i];
            next[i + 2] += poly[i];
        }
        poly = std::move(next);
    }
    return poly[static_cast<std::size_t>(n)];
}

TrinomialTable::TrinomialTable(int max_n) {
    require(max_n >= 0, "max_n must be >= 0");
    values_.reserve(static_cast<std::size_t>(max_n) + 1);
    values_.emplace_back(1);
    if (max_n >= 1) values_.emplace_back(1);
    for (int n = 2; n <= max_n; ++n) {
        BigInt t = (2 * n - 1) * values_[static_cast<std::size_t>(n - 1)] +
                   3 * (n - 1) * values_[static_cast<std::size_t>(n - 2)];
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(n));
        values_.push_back(std::move(t));
    }
}

SunCheck sun_identity_check(int n) {
    require(n >= 0, "n must be >= 0");
    SunCheck check;
    BigInt t = central_trinomial(n);
    check.lhs = t * t;
    for (int k = 0; k <= n; ++k) {
        BigInt c = binomial(2 * k, k);
        check.rhs += binomial(n + k, 2 * k) * c * c * minus_three_pow(n - k);
    }
    return check;
}

BigInt nb_closed_count_z2_trinomial(int n) {
    require(n >= 1, "n must be >= 1");
    BigInt a = central_trinomial(n);
    BigInt b = central_trinomial(n - 1);
    return a * a - b * b;
}

BigInt nb_closed_count_zd(int d, int n) {
    require(d >= 1, "dimension must be >= 1");
    require(n >= 1, "n must be >= 1");
    const long r1 = 2L * d - 1;
    // A^{2m}(v,v) is the simple closed count at length 2m; odd powers vanish.
    auto alternating = [&](int half) {
        BigInt total;
        const int len = 2 * half;
        for (int i = 0; i <= half; ++i) {
            BigInt term = binomial(len - i, i) * power(r1, static_cast<unsigned long>(i)) *
                          simple_closed_count(d, half - i);
            if (i % 2) total -= term;
            else total += term;
        }
        return total;
    };
    return alternating(n) - alternating(n - 1);
}

BigInt lattice_dp_oracle(int d, int k, const Budgets& budgets) {
    require(d >= 1, "dimension must be >= 1");
    require(k >= 0, "length must be >= 0");
    if (static_cast<std::size_t>(d) > budgets.dp_max_dim) {
        throw OracleBudgetError("lattice DP oracle supports d <= " + std::to_string(budgets.dp_max_dim));
    }
    double states = d * std::pow(2.0 * k + 1.0, d);
    if (states > static_cast<double>(budgets.dp_states)) {
        throw OracleBudgetError("lattice DP state count " + std::to_string(static_cast<long long>(states)) +
                                " exceeds budget " + std::to_string(budgets.dp_states));
    }
    if (k == 0) return 1;
    if (k % 2) return 0;

    // A closed walk of length k never leaves the box of radius k/2.
    const int radius = k / 2;
    const int side = 2 * radius + 1;
    std::size_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(side);
    std::vector<std::size_t> stride(static_cast<std::size_t>(d));
    for (int i = 0, s = 1; i < d; ++i, s *= side) stride[static_cast<std::size_t>(i)] = static_cast<std::size_t>(s);

    const int dirs = 2 * d;  // direction 2a is +e_a, 2a+1 is -e_a; reverse is dir ^ 1
    auto coord = [&](std::size_t cell, int axis) {
        return static_cast<int>((cell / stride[static_cast<std::size_t>(axis)]) % static_cast<std::size_t>(side)) -
               radius;
    };
    auto l1 = [&](std::size_t cell) {
        int s = 0;
        for (int a = 0; a < d; ++a) s += std::abs(coord(cell, a));
        return s;
    };

    std::size_t origin = 0;
    for (int a = 0; a < d; ++a) origin += static_cast<std::size_t>(radius) * stride[static_cast<std::size_t>(a)];

    // counts[dir * cells + cell]: walks ending at cell whose last step was dir.
    std::vector<BigInt> counts(static_cast<std::size_t>(dirs) * cells);
    for (int dir = 0; dir < dirs; ++dir) {
        std::size_t cell = origin + stride[static_cast<std::size_t>(dir / 2)];
        if (dir % 2) cell = origin - stride[static_cast<std::size_t>(dir / 2)];
        counts[static_cast<std::size_t>(dir) * cells + cell] = 1;
    }
    for (int step = 1; step < k; ++step) {
        const int remaining = k - step - 1;
        std::vector<BigInt> next(counts.size());
        for (int dir = 0; dir < dirs; ++dir) {
            for (std::size_t cell = 0; cell < cells; ++cell) {
                const BigInt& c = counts[static_cast<std::size_t>(dir) * cells + cell];
                if (c == 0) continue;
                for (int nd = 0; nd < dirs; ++nd) {
                    if (nd == (dir ^ 1)) continue;
                    const int axis = nd / 2;
                    const int x = coord(cell, axis) + (nd % 2 ? -1 : 1);
                    if (x < -radius || x > radius) continue;
                    std::size_t target = nd % 2 ? cell - stride[static_cast<std::size_t>(axis)]
                                                : cell + stride[static_cast<std::size_t>(axis)];
                    if (l1(target) > remaining) continue;
                    next[static_cast<std::size_t>(nd) * cells + target] += c;
                }
            }
        }
        counts = std::move(next);
    }
    BigInt total;
    for (int dir = 0; dir < dirs; ++dir) total += counts[static_cast<std::size_t>(dir) * cells + origin];
    return total;
}

double trinomial_asymptotic(int n) {
    require(n >= 1, "n must be >= 1");
    const double nn = n;
    return std::sqrt(3.0) / (2.0 * std::sqrt(nn * std::numbers::pi)) * std::pow(3.0, nn) * (1.0 - 3.0 / (16.0 * nn));
}

double log_of(const BigInt& value) {
    long exponent = 0;
    double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double trinomial_asymptotic_error(int n, const BigInt& exact) {
    require(n >= 1, "n must be >= 1");
    const double nn = n;
    const double log_approx = 0.5 * std::log(3.0) - std::log(2.0) - 0.5 * std::log(nn * std::numbers::pi) +
                              nn * std::log(3.0) + std::log1p(-3.0 / (16.0 * nn));
    return std::fabs(std::expm1(log_approx - log_of(exact)));
}

namespace {

void fill_probabilities(ReturnSeries& series) {
    double running = 0.0;
    for (auto& e : series.entries) {
        e.prob = Rational(e.count, e.total);
        e.prob.canonicalize();
        e.prob_float = to_double(e.prob);
        running += e.prob_float;
        e.partial_sum = running;
    }
}

}  // namespace

ReturnSeries nb_return_series(int d, int k_max) {
    require(d >= 1, "dimension must be >= 1");
    require(k_max >= 0, "k_max must be >= 0");
    ReturnSeries series{d, WalkKind::nb, {}};
    series.entries.reserve(static_cast<std::size_t>(k_max));

    std::optional<TrinomialTable> table;
    if (d == 2) table.emplace(k_max);

    const long r = 2L * d;
    BigInt total = r;  // length 1
    BigInt step_factor = power(r - 1, 2);
    for (int k = 1; k <= k_max; ++k) {
        if (k == 1) total *= (r - 1);  // length 2
        else total *= step_factor;
        ReturnEntry e;
        e.k = k;
        e.total = total;
        if (d == 1) {
            e.count = 0;
        } else if (d == 2) {
            e.count = (*table)[k] * (*table)[k] - (*table)[k - 1] * (*table)[k - 1];
        } else {
            e.count = nb_closed_count_zd(d, k);
        }
        series.entries.push_back(std::move(e));
    }
    fill_probabilities(series);
    if (d == 2) {
        for (auto& e : series.entries) e.asymptotic_ratio = e.prob_float * 2.0 * std::numbers::pi * e.k;
    }
    return series;
}

ReturnSeries simple_return_series(int d, int k_max) {
    require(d >= 1, "dimension must be >= 1");
    require(k_max >= 0, "k_max must be >= 0");
    ReturnSeries series{d, WalkKind::simple, {}};
    series.entries.reserve(static_cast<std::size_t>(k_max));

    const BigInt step_factor = power(2L * d, 2);
    BigInt total = 1;
    BigInt central = 1;  // C(2k, k), updated incrementally
    for (int k = 1; k <= k_max; ++k) {
        total *= step_factor;
        central *= 2 * (2 * k - 1);
        mpz_divexact_ui(central.get_mpz_t(), central.get_mpz_t(), static_cast<unsigned long>(k));
        ReturnEntry e;
        e.k = k;
        e.total = total;
        if (d == 1) e.count = central;
        else if (d == 2) e.count = central * central;
        else e.count = simple_closed_count(d, k);
        series.entries.push_back(std::move(e));
    }
    fill_probabilities(series);
    for (auto& e : series.entries) {
        const double pk = std::numbers::pi * e.k;
        if (d == 1) e.asymptotic_ratio = e.prob_float * std::sqrt(pk);
        else if (d == 2) e.asymptotic_ratio = e.prob_float * pk;
        else e.asymptotic_ratio = e.prob_float * std::pow(pk, d / 2.0);
    }
    return series;
}

double log_slope(const ReturnSeries& series, int k_lo, int k_hi) {
    require(k_lo >= 1 && k_hi > k_lo, "need 1 <= k_lo < k_hi");
    require(static_cast<std::size_t>(k_hi) <= series.entries.size(), "k_hi beyond series length");
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double x = std::log(static_cast<double>(k));
        const double y = series.entries[static_cast<std::size_t>(k - 1)].partial_sum;
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TailEstimate power_law_tail(const ReturnSeries& series, int k_from) {
    require(k_from >= 4, "k_from must be >= 4");
    require(static_cast<std::size_t>(k_from) <= series.entries.size(), "k_from beyond series length");
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = k_from / 2; k <= k_from; ++k) {
        const auto& e = series.entries[static_cast<std::size_t>(k - 1)];
        if (e.count == 0) continue;
        const double x = std::log(static_cast<double>(k));
        const double y = log_of(e.count) - log_of(e.total);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    TailEstimate out;
    if (n < 2) return out;  // identically zero series
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    out.exponent = -slope;
    out.constant = std::exp(intercept);
    out.tail = out.exponent > 1.0
                   ? out.constant * std::pow(k_from + 0.5, 1.0 - out.exponent) / (out.exponent - 1.0)
                   : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace nbwalk
