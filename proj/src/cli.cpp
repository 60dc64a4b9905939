#include "nbwalk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>

#include "nbwalk/cheb_poly.hpp"
#include "nbwalk/errors.hpp"
#include "nbwalk/graph.hpp"
#include "nbwalk/lattice.hpp"
#include "nbwalk/nb_matrix.hpp"
#include "nbwalk/parallel.hpp"
#include "nbwalk/walk_sim.hpp"

namespace nbwalk {

namespace {

using Json = nlohmann::ordered_json;

// A usage problem detected after CLI11 accepted the arguments.
struct UsageError : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct GlobalOptions {
    std::string out;
    std::string format = "csv";
    std::size_t workers = detail::default_workers();
};

struct Output {
    Json rows = Json::array();  // one object per record, shared by CSV and JSON
    Json meta = Json::object(); // JSON only
    Json parameters = Json::object();
    std::uint64_t seed = 0;
    bool has_seed = false;
};

// Cells never contain commas: objects flatten to key=value;... and arrays to
// space-separated values.
std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_object()) {
        std::string text;
        for (const auto& [key, value] : v.items()) text += (text.empty() ? "" : ";") + key + "=" + csv_cell(value);
        return text;
    }
    if (v.is_array()) {
        std::string text;
        for (const auto& value : v) text += (text.empty() ? "" : " ") + csv_cell(value);
        return text;
    }
    return v.dump();
}

std::string render(const Output& o, const std::string& format) {
    if (format == "json") {
        Json doc = o.meta;
        doc["rows"] = o.rows;
        return doc.dump(2) + "\n";
    }
    std::ostringstream csv;
    if (o.rows.empty()) return "";
    bool first = true;
    for (const auto& [key, _] : o.rows.front().items()) {
        csv << (first ? "" : ",") << key;
        first = false;
    }
    csv << '\n';
    for (const auto& row : o.rows) {
        first = true;
        for (const auto& [_, value] : row.items()) {
            csv << (first ? "" : ",") << csv_cell(value);
            first = false;
        }
        csv << '\n';
    }
    return csv.str();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

int emit(const Output& o, const GlobalOptions& g, const std::string& subcommand, const std::vector<std::string>& args,
         std::chrono::steady_clock::time_point started, std::ostream& out) {
    const std::string text = render(o, g.format);
    if (g.out.empty()) {
        out << text;
        return kExitOk;
    }
    {
        const auto parent = std::filesystem::path(g.out).parent_path();
        std::error_code ec;
        if (!parent.empty()) std::filesystem::create_directories(parent, ec);
        std::ofstream file(g.out, std::ios::binary);
        if (!file) throw CapacityError("cannot open output file " + g.out);
        file << text;
    }
    Json manifest;
    manifest["subcommand"] = subcommand;
    manifest["argv"] = args;
    manifest["parameters"] = o.parameters;
    manifest["seed"] = o.has_seed ? Json(o.seed) : Json(nullptr);
    manifest["version"] = kVersion;
    manifest["outputs"] = Json::array({g.out});
    manifest["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream(g.out + ".manifest.json", std::ios::binary) << manifest.dump(2) << "\n";
    return kExitOk;
}

// --- enumerate ---------------------------------------------------------------

struct EnumerateOptions {
    int dim = 2;
    int n_max = 5;
    std::vector<std::string> methods{"closed-form"};
};

Output run_enumerate(const EnumerateOptions& o, const Budgets& budgets) {
    if (o.dim < 1) throw UsageError("--dim must be >= 1");
    if (o.n_max < 1) throw UsageError("--n-max must be >= 1");
    for (const auto& m : o.methods) {
        if (m != "sum" && m != "trinomial" && m != "closed-form" && m != "dp") {
            throw UsageError("unknown method '" + m + "' (expected sum, trinomial, closed-form, dp)");
        }
        if ((m == "sum" || m == "trinomial") && o.dim != 2) {
            throw CapacityError("method '" + m + "' is only defined for --dim 2");
        }
        if (m == "dp" && static_cast<std::size_t>(o.dim) > budgets.dp_max_dim) {
            throw CapacityError("method 'dp' supports --dim <= " + std::to_string(budgets.dp_max_dim));
        }
    }
    Output out;
    out.parameters = {{"dim", o.dim}, {"n_max", o.n_max}, {"methods", o.methods}};
    out.meta = {{"dimension", o.dim}, {"methods", o.methods}};
    for (int n = 1; n <= o.n_max; ++n) {
        Json row;
        row["n"] = n;
        row["length"] = 2 * n;
        std::optional<BigInt> first;
        bool agree = true;
        for (const auto& m : o.methods) {
            BigInt value;
            if (m == "sum") value = nb_closed_count_z2_sum(n);
            else if (m == "trinomial") value = nb_closed_count_z2_trinomial(n);
            else if (m == "closed-form") value = nb_closed_count_zd(o.dim, n);
            else value = lattice_dp_oracle(o.dim, 2 * n, budgets);
            if (!first) first = value;
            agree = agree && value == *first;
            row[m] = to_decimal(value);
        }
        row["agreement"] = agree;
        out.rows.push_back(std::move(row));
    }
    return out;
}

// --- series ------------------------------------------------------------------

struct SeriesOptions {
    int dim = 2;
    int k_max = 10;
    std::string walk = "nb";
};

Output run_series(const SeriesOptions& o) {
    if (o.dim < 1) throw UsageError("--dim must be >= 1");
    if (o.k_max < 1) throw UsageError("--k-max must be >= 1");
    auto series = o.walk == "nb" ? nb_return_series(o.dim, o.k_max) : simple_return_series(o.dim, o.k_max);
    Output out;
    out.parameters = {{"dim", o.dim}, {"k_max", o.k_max}, {"walk", o.walk}};
    out.meta = {{"dimension", o.dim}, {"walk", o.walk}};
    for (const auto& e : series.entries) {
        out.rows.push_back(Json{{"k", e.k},
                                {"length", 2 * e.k},
                                {"count", to_decimal(e.count)},
                                {"total", to_decimal(e.total)},
                                {"prob", to_fraction(e.prob)},
                                {"prob_float", e.prob_float},
                                {"partial_sum", e.partial_sum},
                                {"asymptotic_ratio", optional_number(e.asymptotic_ratio)}});
    }
    return out;
}

// --- spectrum ----------------------------------------------------------------

struct SpectrumOptions {
    std::size_t n = 7;
    std::size_t dim = 2;
    int k_max = -1;
    bool eigenvalues = false;
    bool sweep = false;
    std::vector<int> degrees{3, 4, 5, 6, 7, 8};
    std::size_t points = 101;
    double c_r = kDefaultBoundConstant;
};

Output run_spectrum(const SpectrumOptions& o, const Budgets& budgets, std::size_t workers) {
    Output out;
    if (o.sweep) {
        const int k_max = o.k_max < 0 ? 50 : o.k_max;
        out.parameters = {{"sweep", true}, {"r", o.degrees}, {"k_max", k_max}, {"points", o.points}, {"c_r", o.c_r}};
        auto summary = bound_sweep(o.degrees, k_max, o.points, o.c_r, workers, [&](const BoundSweepRow& row) {
            out.rows.push_back(Json{{"r", row.degree},
                                    {"k", row.step},
                                    {"x", row.x},
                                    {"regime", std::string(to_string(row.check.regime))},
                                    {"p_value", row.check.value},
                                    {"bound", row.check.bound},
                                    {"margin", row.check.margin},
                                    {"pass", row.check.pass}});
        });
        out.meta = {{"checked", summary.checked}, {"failures", summary.failures}};
        return out;
    }
    TorusSpec spec{o.n, o.dim};
    auto spectrum = torus_spectrum(spec, budgets);
    if (o.eigenvalues) {
        out.parameters = {{"n", o.n}, {"dim", o.dim}, {"eigenvalues", true}};
        out.meta = {{"n", o.n}, {"dimension", o.dim}, {"vertices", spectrum.eigenvalues.size()}};
        for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
            out.rows.push_back(Json{{"index", i}, {"eigenvalue", spectrum.eigenvalues[i]}});
        }
        return out;
    }
    const int k_max = o.k_max < 0 ? static_cast<int>((o.n - 1) / 2) : o.k_max;
    out.parameters = {{"n", o.n}, {"dim", o.dim}, {"k_max", k_max}};
    out.meta = {{"n", o.n}, {"dimension", o.dim}};
    for (const auto& row : spectral_return_probs(spectrum, k_max)) {
        out.rows.push_back(Json{{"k", row.k},
                                {"length", 2 * row.k},
                                {"p_simple", row.simple},
                                {"p_nb", row.nb},
                                {"lattice_exact", row.lattice_exact}});
    }
    return out;
}

// --- simulate ----------------------------------------------------------------

struct SimulateOptions {
    std::string mode = "nb";
    int dim = 0;
    std::string graph_file;
    std::uint64_t trials = 10000;
    std::size_t steps = 100;
    std::uint64_t seed = 0;
    Vertex start = 0;
};

Output run_simulate(const SimulateOptions& o, std::size_t workers) {
    SimConfig config;
    config.mode = o.mode == "nb" ? WalkMode::nb : WalkMode::simple;
    config.trials = o.trials;
    config.max_steps = o.steps;
    config.seed = o.seed;
    config.workers = workers;
    config.start = o.start;
    if (!o.graph_file.empty()) {
        std::ifstream in(o.graph_file);
        if (!in) throw UsageError("cannot read graph file " + o.graph_file);
        std::stringstream buf;
        buf << in.rdbuf();
        config.graph = std::make_shared<const FiniteGraph>(parse_edge_list(buf.str()));
    } else {
        config.dimension = o.dim;
    }
    if (o.dim > 0 && !o.graph_file.empty()) throw UsageError("give either --dim or --graph, not both");
    if (o.dim <= 0 && o.graph_file.empty()) throw UsageError("one of --dim or --graph is required");

    auto stats = simulate_walks(config);
    Output out;
    out.seed = o.seed;
    out.has_seed = true;
    out.parameters = {{"mode", o.mode}, {"dim", o.dim},     {"graph", o.graph_file}, {"trials", o.trials},
                      {"steps", o.steps}, {"seed", o.seed}, {"start", o.start}};
    out.meta = {{"mode", o.mode}, {"trials", o.trials}, {"steps", o.steps}, {"seed", o.seed}};
    std::uint64_t returned = 0;
    for (std::size_t k = 1; k <= stats.max_steps; ++k) {
        returned += stats.first_return[k];
        auto ci = stats.interval(k);
        out.rows.push_back(Json{{"k", k},
                                {"at_origin", stats.at_origin[k]},
                                {"estimate", stats.estimate(k)},
                                {"ci_low", ci.low},
                                {"ci_high", ci.high},
                                {"first_return", stats.first_return[k]},
                                {"return_by", static_cast<double>(returned) / static_cast<double>(stats.trials)}});
    }
    return out;
}

// --- verify ------------------------------------------------------------------

struct VerifyOptions {
    std::string suite = "all";
    int n_max = -1;
    std::vector<int> degrees{3, 4, 5, 6, 7, 8};
    int k_max = -1;
    std::size_t points = 10000;
    double c_r = kDefaultBoundConstant;
};

struct Check {
    std::string name;
    bool pass = false;
    Json detail;
};

std::vector<Check> verify_sun(int n_max) {
    std::vector<Check> out;
    bool all = true;
    int first_failure = -1;
    for (int n = 0; n <= n_max; ++n) {
        if (!sun_identity_check(n).pass()) {
            all = false;
            if (first_failure < 0) first_failure = n;
        }
    }
    out.push_back({"sun_identity", all, {{"n_max", n_max}, {"first_failure", first_failure}}});
    return out;
}

std::vector<Check> verify_bounds(const std::vector<int>& degrees, int k_max, std::size_t points, double c_r,
                                 std::size_t workers) {
    auto s = bound_sweep(degrees, k_max, points, c_r, workers);
    Json detail{{"r", degrees},
                {"k_max", k_max},
                {"points", points},
                {"c_r", c_r},
                {"checked", s.checked},
                {"failures", s.failures},
                {"min_margin_subcritical", s.min_margin_subcritical},
                {"min_margin_supercritical", std::isinf(s.min_margin_supercritical)
                                                 ? Json(nullptr)
                                                 : Json(s.min_margin_supercritical)}};
    return {{"eigenvalue_bounds", s.pass(), detail}};
}

std::vector<Check> verify_z2(int n_max) {
    std::vector<Check> out;
    bool forms = true, triple = true;
    for (int n = 1; n <= n_max; ++n) {
        auto f = nb_closed_count_z2_sum_forms(n);
        forms = forms && f.by_step == f.by_diagonal;
        auto t = nb_closed_count_z2_trinomial(n);
        triple = triple && f.by_step == t && t == lattice_dp_oracle(2, 2 * n);
    }
    out.push_back({"z2_sum_forms_agree", forms, {{"n_max", n_max}}});
    out.push_back({"z2_sum_trinomial_dp_agree", triple, {{"n_max", n_max}}});
    return out;
}

std::vector<Check> verify_trinomial(int n_max) {
    TrinomialTable table(n_max);
    bool ok = true;
    for (int n = 0; n <= n_max; ++n) {
        auto t = central_trinomial(n);
        ok = ok && t == central_trinomial_by_expansion(n) && t == table[n];
    }
    return {{"trinomial_paths_agree", ok, {{"n_max", n_max}}}};
}

std::vector<Check> verify_oracle(int k_max) {
    std::vector<std::pair<std::string, FiniteGraph>> graphs;
    graphs.emplace_back("C3", build_cycle(3));
    graphs.emplace_back("C5", build_cycle(5));
    graphs.emplace_back("K4", build_complete(4));
    graphs.emplace_back("K5", build_complete(5));
    graphs.emplace_back("torus(5,2)", build_torus({5, 2}));
    const Edge star[] = {{0, 1}, {0, 2}, {0, 3}};
    graphs.emplace_back("star K1,3", FiniteGraph::from_edges(4, star));
    const Edge path[] = {{0, 1}, {1, 2}, {2, 3}};
    graphs.emplace_back("path P4", FiniteGraph::from_edges(4, path));

    std::vector<Check> out;
    for (const auto& [name, g] : graphs) {
        auto rec = nb_counts(g, k_max);
        auto gf = gen_func_counts(g, k_max);
        bool ok = true;
        for (Vertex u = 0; u < g.vertex_count(); ++u) {
            auto brute = nb_counts_brute_force_table(g, u, k_max);
            for (int k = 0; k <= k_max; ++k)
                for (Vertex v = 0; v < g.vertex_count(); ++v) {
                    const auto& r = rec[static_cast<std::size_t>(k)].entries(u, v);
                    ok = ok && r == gf[static_cast<std::size_t>(k)].entries(u, v) &&
                         r == brute[static_cast<std::size_t>(k)][v];
                }
        }
        if (g.regular_degree()) {
            for (int k = 0; k <= k_max; ++k)
                ok = ok && nb_counts_regular_closed_form(g, k).entries == rec[static_cast<std::size_t>(k)].entries;
        }
        out.push_back({"matrix_paths " + name, ok, {{"k_max", k_max}, {"vertices", g.vertex_count()}}});
    }
    return out;
}

Output run_verify(const VerifyOptions& o, std::size_t workers, std::vector<std::string>& failed) {
    static const std::vector<std::string> suites{"sun", "bounds", "oracle", "z2", "trinomial", "all"};
    if (std::find(suites.begin(), suites.end(), o.suite) == suites.end()) {
        throw UsageError("unknown suite '" + o.suite + "'");
    }
    auto want = [&](const char* s) { return o.suite == "all" || o.suite == s; };
    std::vector<Check> checks;
    auto append = [&](std::vector<Check> more) {
        for (auto& c : more) checks.push_back(std::move(c));
    };
    if (want("sun")) append(verify_sun(o.n_max < 0 ? 200 : o.n_max));
    if (want("bounds")) append(verify_bounds(o.degrees, o.k_max < 0 ? 200 : o.k_max, o.points, o.c_r, workers));
    if (want("oracle")) append(verify_oracle(o.k_max < 0 ? 10 : std::min(o.k_max, 10)));
    if (want("z2")) append(verify_z2(o.n_max < 0 ? 16 : o.n_max));
    if (want("trinomial")) append(verify_trinomial(o.n_max < 0 ? 200 : o.n_max));

    Output out;
    out.parameters = {{"suite", o.suite}, {"n_max", o.n_max}, {"r", o.degrees}, {"k_max", o.k_max},
                      {"points", o.points}, {"c_r", o.c_r}};
    bool all = true;
    for (const auto& c : checks) {
        out.rows.push_back(Json{{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        if (!c.pass) failed.push_back(c.name);
        all = all && c.pass;
    }
    out.meta = {{"suite", o.suite}, {"pass", all}};
    return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int run_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err, int depth) {
    if (depth > 0) throw UsageError("replay manifests cannot nest");
    std::ifstream in(manifest_path);
    if (!in) throw UsageError("cannot read manifest " + manifest_path);
    Json manifest = Json::parse(in, nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("argv")) throw UsageError("malformed manifest " + manifest_path);
    return dispatch(manifest["argv"].get<std::vector<std::string>>(), out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
    const auto started = std::chrono::steady_clock::now();
    CLI::App app{"Exact and Monte Carlo analysis of non-backtracking random walks", "nbwalk"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    GlobalOptions global;
    app.add_option("--out", global.out, "Write data to this file (plus FILE.manifest.json)");
    auto* format_opt =
        app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", global.workers, "Worker threads")->check(CLI::PositiveNumber);

    EnumerateOptions eo;
    auto* enumerate = app.add_subcommand("enumerate", "Closed NB walk counts on Z^d");
    enumerate->add_option("--dim", eo.dim, "Lattice dimension");
    enumerate->add_option("--n-max", eo.n_max, "Largest half-length n (walk length 2n)")->required();
    enumerate->add_option("--method", eo.methods, "sum, trinomial, closed-form, dp (comma-separated)")
        ->delimiter(',');

    SeriesOptions so;
    auto* series = app.add_subcommand("series", "Exact return probabilities and partial sums");
    series->add_option("--dim", so.dim, "Lattice dimension");
    series->add_option("--k-max", so.k_max, "Largest k (walk length 2k)")->required();
    series->add_option("--walk", so.walk, "simple or nb")->check(CLI::IsMember({"simple", "nb"}));

    SpectrumOptions po;
    auto* spectrum = app.add_subcommand("spectrum", "Torus spectra, spectral return probabilities, bound sweeps");
    spectrum->add_option("--n", po.n, "Torus side length");
    spectrum->add_option("--dim", po.dim, "Torus dimension");
    spectrum->add_option("--k-max", po.k_max, "Largest k");
    spectrum->add_flag("--eigenvalues", po.eigenvalues, "List eigenvalues of P");
    spectrum->add_flag("--sweep", po.sweep, "Eigenvalue-bound sweep report");
    spectrum->add_option("--r", po.degrees, "Degrees for --sweep")->delimiter(',');
    spectrum->add_option("--points", po.points, "Grid points for --sweep");
    spectrum->add_option("--c-r", po.c_r, "Bound constant for --sweep");

    SimulateOptions mo;
    auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo walks");
    simulate->add_option("--mode", mo.mode, "simple or nb")->check(CLI::IsMember({"simple", "nb"}));
    simulate->add_option("--dim", mo.dim, "Lattice dimension");
    simulate->add_option("--graph", mo.graph_file, "Edge-list file");
    simulate->add_option("--start", mo.start, "Start vertex on --graph");
    simulate->add_option("--trials", mo.trials, "Number of walks")->check(CLI::PositiveNumber);
    simulate->add_option("--steps", mo.steps, "Steps per walk")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", mo.seed, "64-bit seed")->required();

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Identity and oracle battery");
    verify->add_option("--suite", vo.suite, "sun, bounds, oracle, z2, trinomial, all");
    verify->add_option("--n-max", vo.n_max, "Largest n for identity suites");
    verify->add_option("--r", vo.degrees, "Degrees for the bound sweep")->delimiter(',');
    verify->add_option("--k-max", vo.k_max, "Largest k for bounds/oracle suites");
    verify->add_option("--points", vo.points, "Grid points for the bound sweep");
    verify->add_option("--c-r", vo.c_r, "Bound constant for the bound sweep");

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest_path, "Manifest JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*replay) return run_replay(manifest_path, out, err, depth);

    const Budgets budgets = Budgets::from_env();
    if (*enumerate) return emit(run_enumerate(eo, budgets), global, "enumerate", args, started, out);
    if (*series) return emit(run_series(so), global, "series", args, started, out);
    if (*spectrum) return emit(run_spectrum(po, budgets, global.workers), global, "spectrum", args, started, out);
    if (*simulate) return emit(run_simulate(mo, global.workers), global, "simulate", args, started, out);

    std::vector<std::string> failed;
    auto report = run_verify(vo, global.workers, failed);
    if (format_opt->count() == 0) global.format = "json";
    emit(report, global, "verify", args, started, out);
    if (!failed.empty()) {
        err << "verification failed:";
        for (const auto& f : failed) err << ' ' << f;
        err << '\n';
        return kExitVerificationFailed;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err, 0);
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCapability;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
}

}  // namespace nbwalk
