#include "nbwalk/cheb_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nbwalk/errors.hpp"
#include "nbwalk/parallel.hpp"

namespace nbwalk {

namespace {

void validate(PolyParams params) {
    if (params.degree < 2) throw InvalidArgument("polynomial family needs r >= 2, got " + std::to_string(params.degree));
    if (params.step < 0) throw InvalidArgument("polynomial step must be nonnegative");
}

// p_{k+2} = (r x p_{k+1} - p_k) / (r - 1); one division keeps p_k(+-1) exact.
template <typename T>
T run_recurrence(int degree, int step, const T& x) {
    T prev = T(1);
    if (step == 0) return prev;
    T cur = x;
    const T r = T(degree);
    const T r1 = T(degree - 1);
    for (int k = 1; k < step; ++k) {
        T next = (r * x * cur - prev) / r1;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<long double> long_sequence(int degree, int k_max, long double x) {
    std::vector<long double> p(static_cast<std::size_t>(k_max) + 1);
    p[0] = 1.0L;
    if (k_max >= 1) p[1] = x;
    for (std::size_t k = 2; k < p.size(); ++k) p[k] = (degree * x * p[k - 1] - p[k - 2]) / (degree - 1);
    return p;
}

BoundCheck evaluate_bound(int degree, int step, double lambda, long double value, double c_r) {
    BoundCheck out;
    out.regime = classify(degree, lambda).regime;
    out.value = static_cast<double>(value);
    long double bound;
    if (out.regime == Regime::supercritical) {
        bound = std::pow(std::fabs(static_cast<long double>(lambda)), static_cast<long double>(step));
    } else {
        bound = static_cast<long double>(c_r) * step *
                std::pow(1.0L / std::sqrt(static_cast<long double>(degree - 1)), static_cast<long double>(step));
    }
    long double margin = bound - std::fabs(value);
    out.bound = static_cast<double>(bound);
    out.margin = static_cast<double>(margin);
    out.pass = margin >= 0.0L;
    return out;
}

}  // namespace

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical: return "critical";
        case Regime::supercritical: return "supercritical";
    }
    return "unknown";
}

double critical_threshold(int degree) { return 2.0 * std::sqrt(degree - 1.0) / degree; }

RegimeClassification classify(int degree, double x, double critical_tolerance) {
    if (degree < 2) throw InvalidArgument("regime classification needs r >= 2");
    RegimeClassification c;
    c.x = x;
    c.threshold = critical_threshold(degree);
    const double r = degree;
    c.discriminant = r * r * x * x - 4.0 * (r - 1.0);
    if (std::fabs(c.discriminant) < critical_tolerance) {
        c.regime = Regime::critical;
    } else if (c.discriminant < 0) {
        c.regime = Regime::subcritical;
        c.theta = std::atan2(std::sqrt(-c.discriminant), r * x);
    } else {
        c.regime = Regime::supercritical;
    }
    return c;
}

Rational p_eval_recurrence(PolyParams params, const Rational& x) {
    validate(params);
    Rational value = run_recurrence<Rational>(params.degree, params.step, x);
    value.canonicalize();
    return value;
}

double p_eval_recurrence(PolyParams params, double x) {
    validate(params);
    return run_recurrence<double>(params.degree, params.step, x);
}

long double p_eval_recurrence(PolyParams params, long double x) {
    validate(params);
    return run_recurrence<long double>(params.degree, params.step, x);
}

std::vector<double> p_sequence(int degree, int k_max, double x) {
    validate({degree, k_max});
    std::vector<double> p(static_cast<std::size_t>(k_max) + 1);
    p[0] = 1.0;
    if (k_max >= 1) p[1] = x;
    for (std::size_t k = 2; k < p.size(); ++k) p[k] = (degree * x * p[k - 1] - p[k - 2]) / (degree - 1);
    return p;
}

double p_eval_closed_form(PolyParams params, double x) {
    validate(params);
    const double r = params.degree;
    const double k = params.step;
    const auto c = classify(params.degree, x);
    switch (c.regime) {
        case Regime::supercritical: {
            const double root = std::sqrt(c.discriminant);
            const double weight = x * (r - 2.0) / root;
            const double hi = (r * x + root) / (2.0 * (r - 1.0));
            const double lo = (r * x - root) / (2.0 * (r - 1.0));
            return 0.5 * ((1.0 + weight) * std::pow(hi, k) + (1.0 - weight) * std::pow(lo, k));
        }
        case Regime::subcritical: {
            const double root = std::sqrt(-c.discriminant);
            const double theta = *c.theta;
            return std::pow(r - 1.0, -k / 2.0) *
                   (std::cos(theta * k) + (r - 2.0) * x / root * std::sin(theta * k));
        }
        case Regime::critical: {
            // Double root sgn(x)/sqrt(r-1).
            const double sign = (x < 0 && params.step % 2 == 1) ? -1.0 : 1.0;
            return sign * std::pow(r - 1.0, -k / 2.0) * (1.0 + (r - 2.0) * k / r);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

BoundCheck check_eig_bound(PolyParams params, double lambda, double c_r) {
    validate(params);
    if (params.step < 1) throw InvalidArgument("eigenvalue bound needs k >= 1");
    const long double value = run_recurrence<long double>(params.degree, params.step, lambda);
    return evaluate_bound(params.degree, params.step, lambda, value, c_r);
}

std::vector<double> bound_sweep_grid(int degree, std::size_t points) {
    std::vector<double> grid;
    grid.reserve(points + 2);
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(points == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    const double t = critical_threshold(degree);
    grid.push_back(-t);
    grid.push_back(t);
    return grid;
}

BoundSweepSummary bound_sweep(std::span<const int> degrees, int k_max, std::size_t points, double c_r,
                              std::size_t workers, const std::function<void(const BoundSweepRow&)>& sink) {
    if (k_max < 1) throw InvalidArgument("bound sweep needs k_max >= 1");
    for (int r : degrees) validate({r, k_max});

    struct Task {
        int degree;
        double x;
    };
    std::vector<Task> tasks;
    for (int r : degrees)
        for (double x : bound_sweep_grid(r, points)) tasks.push_back({r, x});

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<BoundSweepSummary> partial(tasks.size());
    auto run = [&](std::size_t i) {
        const auto& task = tasks[i];
        auto& s = partial[i];
        s.min_margin_subcritical = kInf;
        s.min_margin_supercritical = kInf;
        const auto seq = long_sequence(task.degree, k_max, task.x);
        for (int k = 1; k <= k_max; ++k) {
            auto check = evaluate_bound(task.degree, k, task.x, seq[static_cast<std::size_t>(k)], c_r);
            ++s.checked;
            if (!check.pass) ++s.failures;
            double& slot = check.regime == Regime::supercritical ? s.min_margin_supercritical
                                                                 : s.min_margin_subcritical;
            slot = std::min(slot, check.margin);
            if (sink) sink({task.degree, k, task.x, check});
        }
    };
    detail::parallel_for(tasks.size(), sink ? 1 : (workers ? workers : detail::default_workers()), run);

    BoundSweepSummary total;
    total.min_margin_subcritical = kInf;
    total.min_margin_supercritical = kInf;
    for (const auto& s : partial) {
        total.checked += s.checked;
        total.failures += s.failures;
        total.min_margin_subcritical = std::min(total.min_margin_subcritical, s.min_margin_subcritical);
        total.min_margin_supercritical = std::min(total.min_margin_supercritical, s.min_margin_supercritical);
    }
    return total;
}

TorusSpectrum torus_spectrum(const TorusSpec& spec, const Budgets& budgets) {
    if (spec.side < 3) throw InvalidSize("torus needs side >= 3");
    if (spec.dimension < 1) throw InvalidSize("torus needs dimension >= 1");
    auto count = spec.vertex_count();
    if (!count || *count > budgets.max_vertices) throw CapacityError("torus spectrum exceeds vertex budget");

    std::vector<double> cosines(spec.side);
    for (std::size_t j = 0; j < spec.side; ++j)
        cosines[j] = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.side));

    TorusSpectrum out{spec, std::vector<double>(*count)};
    const double d = static_cast<double>(spec.dimension);
    for (std::size_t v = 0; v < *count; ++v) {
        std::size_t rest = v;
        double sum = 0.0;
        for (std::size_t axis = 0; axis < spec.dimension; ++axis) {
            sum += cosines[rest % spec.side];
            rest /= spec.side;
        }
        out.eigenvalues[v] = sum / d;
    }
    return out;
}

std::vector<SpectralReturnRow> spectral_return_probs(const TorusSpectrum& spectrum, int k_max) {
    if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
    const int degree = static_cast<int>(2 * spectrum.spec.dimension);
    const std::size_t n = spectrum.eigenvalues.size();
    const std::size_t rows = static_cast<std::size_t>(k_max) + 1;

    std::vector<std::vector<double>> simple(rows, std::vector<double>(n));
    std::vector<std::vector<double>> nb(rows, std::vector<double>(n));
    detail::parallel_for(n, detail::default_workers(), [&](std::size_t i) {
        const double lambda = spectrum.eigenvalues[i];
        const auto seq = p_sequence(degree, 2 * k_max, lambda);
        double sq = 1.0;
        for (std::size_t k = 0; k < rows; ++k) {
            simple[k][i] = sq;
            nb[k][i] = seq[2 * k];
            sq *= lambda * lambda;
        }
    });

    std::vector<SpectralReturnRow> out;
    for (std::size_t k = 0; k < rows; ++k) {
        SpectralReturnRow row;
        row.k = static_cast<int>(k);
        // Clamped so round-off cannot leave [0, 1].
        row.simple = std::clamp(pairwise_sum(simple[k]) / static_cast<double>(n), 0.0, 1.0);
        row.nb = std::clamp(pairwise_sum(nb[k]) / static_cast<double>(n), 0.0, 1.0);
        row.lattice_exact = 2 * k < spectrum.spec.side;
        out.push_back(row);
    }
    return out;
}

}  // namespace nbwalk
