#include "lcdk/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcdk/closed_forms.hpp"
#include "lcdk/io.hpp"
#include "lcdk/localization.hpp"
#include "lcdk/predicates.hpp"
#include "lcdk/random.hpp"
#include "lcdk/sweeps.hpp"
#include "lcdk/verifiers.hpp"

namespace lcdk::cli {

namespace {

using io::json;

struct GlobalOpts {
    std::string backend = "rational";
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-12;
    std::string report_path;
    std::string format = "json";
    bool no_timestamp = false;
};

std::string timestamp_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit_report(const GlobalOpts& g, json j) {
    if (!g.no_timestamp) j["timestamp"] = timestamp_now();
    if (g.report_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        io::write_json_file(g.report_path, j);
    }
}

IntegerInterval parse_interval(const std::string& s) {
    size_t c = s.find(':');
    if (c == std::string::npos) throw CLI::ValidationError("--interval", "expected M:N");
    return IntegerInterval{std::stoll(s.substr(0, c)), std::stoll(s.substr(c + 1))};
}

// Accepts inline JSON or a path to a JSON file.
json json_arg(const std::string& s) {
    if (!s.empty() && (s.front() == '{' || s.front() == '[')) return json::parse(s);
    return io::load_json_file(s);
}

template <class T>
ReferenceMeasure<T> resolve_reference(const std::string& ref_arg, IntegerInterval fallback_window) {
    if (ref_arg.empty()) return ReferenceMeasure<T>::counting(fallback_window);
    return io::reference_from_json<T>(json_arg(ref_arg));
}

std::string strip_builtin(std::string s) {
    if (s.rfind("builtin:", 0) == 0) s.erase(0, 8);
    return s;
}

// {"lo", "hi", "values": [numbers]}; may be negative (constraint tables).
std::vector<double> value_table(const json& j, IntegerInterval expect) {
    IntegerInterval itv{j.at("lo").get<std::int64_t>(), j.at("hi").get<std::int64_t>()};
    if (itv != expect) throw std::invalid_argument("value table: interval must match --interval");
    std::vector<double> v = j.at("values").get<std::vector<double>>();
    if (static_cast<std::int64_t>(v.size()) != itv.length())
        throw std::invalid_argument("value table: wrong number of values");
    return v;
}

loc::LinearConstraint resolve_constraint(const std::string& arg, IntegerInterval itv) {
    std::string s = strip_builtin(arg);
    if (s.rfind("mean<=", 0) == 0) return loc::LinearConstraint::mean_at_most(std::stod(s.substr(6)), itv);
    if (s.rfind("table:", 0) == 0) return loc::LinearConstraint(itv, value_table(json_arg(s.substr(6)), itv));
    throw std::invalid_argument("constraint: expected mean<=C or table:FILE");
}

loc::ConvexFunctional resolve_functional(const std::string& arg, IntegerInterval itv) {
    std::string s = strip_builtin(arg);
    if (s.rfind("tail:", 0) == 0) return loc::ConvexFunctional::tail(std::stod(s.substr(5)));
    if (s.rfind("moment:", 0) == 0) return loc::ConvexFunctional::moment(std::stod(s.substr(7)));
    if (s.rfind("table:", 0) == 0)
        return loc::ConvexFunctional::expectation_table(itv, value_table(json_arg(s.substr(6)), itv));
    throw std::invalid_argument("functional: expected tail:T, moment:R or table:FILE");
}

json spec_to_json(const LogAffineSpec& spec) {
    auto clamp = [](double x) { return std::isfinite(x) ? x : std::copysign(1e308, x); };
    return {{"k", spec.k},                {"l", spec.l},           {"log_p", clamp(spec.log_p)},
            {"log_C", clamp(spec.log_C)}, {"p", clamp(spec.p())},  {"C", clamp(spec.C())},
            {"point_mass", spec.is_point_mass()}};
}

// --- check ------------------------------------------------------------------

int cmd_check(const GlobalOpts& g, const std::string& file, const std::string& ref_arg,
              const std::string& predicates) {
    auto seq = io::sequence_from_json(io::load_json_file(file));
    json out;
    bool lc = false, la = false, um = false;
    std::visit(
        [&]<class T>(const Sequence<T>& s) {
            auto gamma = resolve_reference<T>(ref_arg, s.interval);
            lc = is_log_concave(s, gamma);
            la = is_log_affine(s, gamma);
            um = is_unimodal(s);
            out["sequence"] = io::to_json(s);
        },
        seq);
    out["log_concave"] = lc;
    out["log_affine"] = la;
    out["unimodal"] = um;

    bool all = true;
    std::stringstream ss(predicates);
    std::string p;
    while (std::getline(ss, p, ',')) {
        if (p == "log-concave")
            all = all && lc;
        else if (p == "log-affine")
            all = all && la;
        else if (p == "unimodal")
            all = all && um;
        else
            throw std::invalid_argument("unknown predicate: " + p);
    }
    std::cout << "log-concave: " << (lc ? "true" : "false") << "\n"
              << "log-affine:  " << (la ? "true" : "false") << "\n"
              << "unimodal:    " << (um ? "true" : "false") << "\n";
    if (!g.report_path.empty()) emit_report(g, out);
    return all ? 0 : 1;
}

// --- geom -------------------------------------------------------------------

int cmd_geom(const GlobalOpts& g, const std::string& sub, double p, std::int64_t k, std::int64_t l,
             std::optional<double> t, std::optional<double> c) {
    json out{{"p", p}, {"k", k}, {"l", l}, {"op", sub}};
    double value = 0;
    if (sub == "constant") {
        value = geom::normalizing_constant(geom::TruncGeom<double>(p, k, l));
    } else if (sub == "mean") {
        value = geom::trunc_geom_mean(geom::TruncGeom<double>(p, k, l));
    } else if (sub == "tail") {
        if (!t) throw std::invalid_argument("geom tail: --t required");
        out["t"] = *t;
        value = geom::trunc_geom_tail(geom::TruncGeom<double>(p, k, l), *t);
    } else if (sub == "solve-p") {
        if (!c) throw std::invalid_argument("geom solve-p: --c required");
        out["c"] = *c;
        auto r = geom::solve_p_for_mean(k, l, *c);
        value = r.p;
        out["degeneracy"] = r.degeneracy == geom::SolveDegeneracy::None ? "none"
                            : r.degeneracy == geom::SolveDegeneracy::PointMassAtK ? "point-mass-at-k"
                                                                                  : "point-mass-at-l";
    } else {
        throw std::invalid_argument("geom: unknown subcommand " + sub);
    }
    out["value"] = value;
    std::cout << value << "\n";
    if (!g.report_path.empty()) emit_report(g, out);
    return 0;
}

// --- convolve ---------------------------------------------------------------

int cmd_convolve(const GlobalOpts& g, const std::string& file_a, const std::string& file_b,
                 const std::string& ref_arg) {
    auto a = io::sequence_from_json(io::load_json_file(file_a));
    auto b = io::sequence_from_json(io::load_json_file(file_b));
    if (a.index() != b.index()) throw std::invalid_argument("convolve: inputs must share a backend");
    json out;
    bool verdict = false;
    std::visit(
        [&]<class T>(const Sequence<T>& fa) {
            const auto& fb = std::get<Sequence<T>>(b);
            auto conv = convolve(fa, fb);
            auto gamma = resolve_reference<T>(ref_arg, conv.interval);
            verdict = is_log_concave(conv, gamma);
            out["convolution"] = io::to_json(conv);
        },
        a);
    out["log_concave"] = verdict;
    std::cout << "log-concave: " << (verdict ? "true" : "false") << "\n";
    emit_report(g, out);
    return verdict ? 0 : 1;
}

// --- sample -----------------------------------------------------------------

int cmd_sample(const GlobalOpts& g, std::int64_t count, const std::string& interval_arg,
               const std::string& ref_arg) {
    IntegerInterval itv = parse_interval(interval_arg);
    json out;
    out["samples"] = json::array();
    Rng rng(g.seed);
    if (g.backend == "rational") {
        auto gamma = resolve_reference<Rational>(ref_arg, itv);
        for (std::int64_t i = 0; i < count; ++i)
            out["samples"].push_back(io::to_json(random_log_concave(rng, itv, gamma).seq));
    } else {
        auto gamma = resolve_reference<double>(ref_arg, itv);
        for (std::int64_t i = 0; i < count; ++i)
            out["samples"].push_back(io::to_json(random_log_concave(rng, itv, gamma).seq));
    }
    out["seed"] = g.seed;
    out["count"] = count;
    emit_report(g, out);
    return 0;
}

// --- extremize ---------------------------------------------------------------

int cmd_extremize(const GlobalOpts& g, const std::string& interval_arg, const std::string& ref_arg,
                  const std::string& constraint_arg, const std::string& functional_arg, int grid_points,
                  std::int64_t oracle_samples) {
    IntegerInterval itv = parse_interval(interval_arg);
    auto gamma = resolve_reference<double>(ref_arg, itv);
    auto h = resolve_constraint(constraint_arg, itv);
    auto phi = resolve_functional(functional_arg, itv);
    loc::GridSpec grid;
    grid.points = grid_points;

    json out{{"interval", {itv.lo, itv.hi}},
             {"constraint", constraint_arg},
             {"functional", functional_arg},
             {"grid_points", grid_points},
             {"seed", g.seed}};
    try {
        auto result = loc::maximize_convex(phi, h, itv.lo, itv.hi, gamma, grid, g.seed);
        out["best_value"] = result.best_value;
        out["constraint_value"] = result.constraint_value;
        out["candidates_examined"] = result.candidates_examined;
        out["convexity_violations"] = result.convexity_violations;
        out["witness"] = spec_to_json(result.best.spec);
        out["witness_kind"] = result.best.kind == loc::CandidateKind::PointMass      ? "point-mass"
                              : result.best.kind == loc::CandidateKind::ConstraintRoot ? "constraint-root"
                                                                                       : "grid-feasible";
        out["witness_log_affine"] = is_log_affine(result.best.pmf.seq, gamma);
        auto profile = loc::lambda_profile(result.best.pmf, h);
        out["witness_lambda_sign_constant"] = loc::lambda_profile_sign_constant(profile);
        if (oracle_samples > 0) {
            auto oracle = loc::brute_force_max(phi, h, itv.lo, itv.hi, gamma, oracle_samples, g.seed);
            out["oracle_max"] = oracle.value;
            out["oracle_feasible"] = oracle.feasible;
            out["oracle_dominated"] = oracle.feasible == 0 || oracle.value <= result.best_value + 1e-9;
        }
        std::cout << "best value: " << result.best_value << "  witness support [" << result.best.spec.k << ", "
                  << result.best.spec.l << "]\n";
        emit_report(g, out);
        bool ok = !out.contains("oracle_dominated") || out["oracle_dominated"].get<bool>();
        return ok ? 0 : 1;
    } catch (const loc::InfeasibleError& e) {
        out["infeasible"] = true;
        out["error"] = e.what();
        std::cout << "infeasible constraint\n";
        emit_report(g, out);
        return 1;
    }
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const GlobalOpts& g, const std::string& name, const std::string& interval_arg, std::int64_t trials,
               bool exhaustive, const std::string& delta_arg) {
    verify::SweepConfig cfg;
    cfg.seed = g.seed;
    cfg.tolerance = g.tolerance;
    cfg.trials = trials;
    cfg.exhaustive = exhaustive;

    std::ofstream csv;
    if (g.format == "csv" && !g.report_path.empty()) {
        csv.open(g.report_path);
        csv << "instance,slack,pass\n";
        cfg.sink = [&csv](const std::string& label, double slack, bool pass) {
            csv << label << "," << slack << "," << (pass ? 1 : 0) << "\n";
        };
    }

    verify::VerificationReport rep;
    if (name == "four-functions") {
        cfg.interval = interval_arg.empty() ? IntegerInterval{0, 12} : parse_interval(interval_arg);
        rep = verify::sweep_four_functions(cfg);
    } else if (name == "convolution") {
        cfg.interval = interval_arg.empty() ? IntegerInterval{0, 30} : parse_interval(interval_arg);
        rep = verify::sweep_convolution(cfg);
    } else if (name == "prekopa-leindler") {
        cfg.interval = interval_arg.empty() ? IntegerInterval{0, 25} : parse_interval(interval_arg);
        rep = verify::sweep_prekopa_leindler(cfg);
    } else if (name == "dilation") {
        cfg.interval = interval_arg.empty() ? IntegerInterval{0, 12} : parse_interval(interval_arg);
        if (!exhaustive && cfg.interval.length() > 10) cfg.interval = {cfg.interval.lo, cfg.interval.lo + 9};
        rep = verify::sweep_dilation(cfg, 15, exhaustive ? 200 : std::min<std::int64_t>(trials, 50));
    } else if (name == "functional-dilation") {
        cfg.interval = interval_arg.empty() ? IntegerInterval{0, 20} : parse_interval(interval_arg);
        rep = verify::sweep_functional_dilation(cfg);
    } else if (name == "deviations") {
        rep = verify::sweep_deviations(cfg, exhaustive ? 200 : 60, exhaustive ? 500 : trials);
    } else if (name == "mean-deviation") {
        rep = verify::sweep_mean_deviation(cfg, exhaustive ? 200 : 60, exhaustive ? 500 : trials);
    } else if (name == "reverse-jensen") {
        rep = verify::sweep_reverse_jensen(cfg, exhaustive ? 200 : 60, exhaustive ? 500 : trials);
    } else {
        throw std::invalid_argument("verify: unknown check '" + name + "'");
    }
    if (!delta_arg.empty()) rep.config["delta"] = delta_arg;

    bool ok = rep.all_passed() && (rep.instances_checked == 0 || rep.worst_slack >= -g.tolerance);
    std::cout << rep.name << ": " << rep.passes << "/" << rep.instances_checked << " instances, worst slack "
              << (rep.instances_checked ? rep.worst_slack : 0.0) << (ok ? "  [pass]" : "  [FAIL]") << "\n";
    if (g.format != "csv") {
        emit_report(g, rep.to_json());
    } else if (csv.is_open()) {
        csv << "TOTAL," << rep.worst_slack << "," << (ok ? 1 : 0) << "\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"verification toolkit for discrete log-concave probability sequences"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--backend", g.backend, "scalar backend: rational|float")
        ->check(CLI::IsMember({"rational", "float"}));
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--tolerance", g.tolerance, "slack tolerance");
    app.add_option("--report", g.report_path, "write a report to this path");
    app.add_option("--format", g.format, "report format: json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp field from reports");

    // check
    auto* check = app.add_subcommand("check", "evaluate predicates on a sequence file");
    std::string check_file, check_ref, check_predicates = "log-concave,log-affine,unimodal";
    check->add_option("file", check_file, "sequence JSON file")->required();
    check->add_option("--reference", check_ref, "reference measure (inline JSON or path)");
    check->add_option("--predicates", check_predicates, "comma list deciding the exit code");

    // geom
    auto* geom_cmd = app.add_subcommand("geom", "truncated geometric closed forms");
    std::string geom_sub;
    double geom_p = 1;
    std::int64_t geom_k = 0, geom_l = 0;
    double geom_t = 0, geom_c = 0;
    bool has_t = false, has_c = false;
    geom_cmd->add_option("op", geom_sub, "constant|mean|tail|solve-p")->required();
    geom_cmd->add_option("--p", geom_p, "ratio parameter");
    geom_cmd->add_option("--k", geom_k, "left endpoint")->required();
    geom_cmd->add_option("--l", geom_l, "right endpoint")->required();
    geom_cmd->add_option("--t", geom_t, "tail threshold");
    geom_cmd->add_option("--c", geom_c, "target mean");

    // convolve
    auto* conv = app.add_subcommand("convolve", "convolve two sequence files and test log-concavity");
    std::string conv_a, conv_b, conv_ref;
    conv->add_option("a", conv_a)->required();
    conv->add_option("b", conv_b)->required();
    conv->add_option("--reference", conv_ref, "reference measure (inline JSON or path)");

    // sample
    auto* sample = app.add_subcommand("sample", "emit random log-concave laws");
    std::int64_t sample_count = 1;
    std::string sample_interval = "0:20", sample_ref;
    sample->add_option("--count", sample_count, "number of samples");
    sample->add_option("--interval", sample_interval, "window M:N");
    sample->add_option("--reference", sample_ref, "reference measure (inline JSON or path)");

    // extremize
    auto* ext = app.add_subcommand("extremize", "maximize a convex functional over constrained log-concave laws");
    std::string ext_interval, ext_ref, ext_constraint, ext_functional;
    int ext_grid = 512;
    std::int64_t ext_oracle = 0;
    ext->add_option("--interval", ext_interval, "window M:N")->required();
    ext->add_option("--reference", ext_ref, "reference measure (inline JSON or path)");
    ext->add_option("--constraint", ext_constraint, "mean<=C or table:FILE")->required();
    ext->add_option("--functional", ext_functional, "tail:T, moment:R or table:FILE")->required();
    ext->add_option("--grid", ext_grid, "ratio grid resolution");
    ext->add_option("--oracle", ext_oracle, "brute-force sample count for the dominance comparison");

    // verify
    auto* ver = app.add_subcommand("verify", "run an inequality sweep");
    std::string ver_name, ver_interval, ver_delta;
    std::int64_t ver_trials = 500;
    bool ver_exhaustive = false;
    ver->add_option("name", ver_name,
                    "four-functions|convolution|prekopa-leindler|dilation|functional-dilation|deviations|mean-"
                    "deviation|reverse-jensen")
        ->required();
    ver->add_option("--interval", ver_interval, "window M:N");
    ver->add_option("--trials", ver_trials, "randomized trial count");
    ver->add_flag("--exhaustive", ver_exhaustive, "run the full acceptance-scale sweep");
    ver->add_option("--delta", ver_delta, "dilation parameter override (annotated in the report)");

    std::vector<const char*> argv;
    argv.push_back("lcdk");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(g, check_file, check_ref, check_predicates);
        if (geom_cmd->parsed()) {
            has_t = geom_cmd->count("--t") > 0;
            has_c = geom_cmd->count("--c") > 0;
            return cmd_geom(g, geom_sub, geom_p, geom_k, geom_l,
                            has_t ? std::optional<double>(geom_t) : std::nullopt,
                            has_c ? std::optional<double>(geom_c) : std::nullopt);
        }
        if (conv->parsed()) return cmd_convolve(g, conv_a, conv_b, conv_ref);
        if (sample->parsed()) return cmd_sample(g, sample_count, sample_interval, sample_ref);
        if (ext->parsed())
            return cmd_extremize(g, ext_interval, ext_ref, ext_constraint, ext_functional, ext_grid, ext_oracle);
        if (ver->parsed()) return cmd_verify(g, ver_name, ver_interval, ver_trials, ver_exhaustive, ver_delta);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace lcdk::cli
