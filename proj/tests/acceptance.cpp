// Acceptance suite: every criterion runs at its stated tolerance and prints a
// single pass/fail line with its runtime budget. Exit code 0 only when all
// criteria pass.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lcdk/closed_forms.hpp"
#include "lcdk/localization.hpp"
#include "lcdk/predicates.hpp"
#include "lcdk/random.hpp"
#include "lcdk/sweeps.hpp"
#include "lcdk/verifiers.hpp"

using namespace lcdk;

namespace {

struct Criterion {
    int id;
    std::string label;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
bool closed_form_agreement(std::string& detail) {
    std::int64_t checked = 0, failed = 0;
    for (const auto& g : verify::geom_parameter_grid(200)) {
        geom::TruncGeom<double> tg(g.p, g.k, g.l);
        // direct-summation oracles
        double den = 0, num = 0;
        for (std::int64_t n = g.k; n <= g.l; ++n) {
            double w = std::pow(g.p, static_cast<double>(n));
            den += w;
            num += static_cast<double>(n) * w;
        }
        if (!rel_close(geom::normalizing_constant(tg), 1.0 / den, 1e-12)) ++failed;
        if (!rel_close(geom::trunc_geom_mean(tg), num / den, 1e-12)) ++failed;
        double span = static_cast<double>(g.l - g.k);
        for (double t : {static_cast<double>(g.k) - 0.5, static_cast<double>(g.k), g.k + span / 3.0,
                         g.k + span / 2.0, static_cast<double>(g.l) - 0.5, static_cast<double>(g.l)}) {
            double tail_oracle = 0;
            for (std::int64_t n = g.k; n <= g.l; ++n)
                if (static_cast<double>(n) > t) tail_oracle += std::pow(g.p, static_cast<double>(n));
            tail_oracle /= den;
            if (!rel_close(geom::trunc_geom_tail(tg, t), tail_oracle, 1e-12)) ++failed;
        }
        checked += 8;
    }
    detail = std::to_string(checked) + " values, " + std::to_string(failed) + " off";
    return failed == 0;
}

// ---------------------------------------------------------------- criterion 2
bool convolution_closure(std::string& detail) {
    Rng rng(2024);
    auto gamma = ReferenceMeasure<Rational>::counting({0, 58});
    std::int64_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        auto f = random_log_concave(rng, {0, 29}, gamma);
        auto g = random_log_concave(rng, {0, 29}, gamma);
        if (!is_log_concave(convolve(f.seq, g.seq), gamma)) ++bad;
    }
    std::int64_t series_bad = 0;
    for (int i = 0; i < 200; ++i) {
        Rational R(draw_int(rng, 1, 60), draw_int(rng, 1, 60));
        if (R == 1) R = Rational(61, 60);
        for (std::int64_t m = 0; m <= 12; ++m)
            if (!verify::geometric_series_inequality_holds(R, m)) ++series_bad;
    }
    detail = "1000 exact convolutions (" + std::to_string(bad) + " bad), 2600 series checks (" +
             std::to_string(series_bad) + " bad)";
    return bad == 0 && series_bad == 0;
}

// ---------------------------------------------------------------- criterion 3
bool localization_dominance(std::string& detail) {
    auto gamma = ReferenceMeasure<double>::counting({0, 20});
    Rng rng(30303);
    int bad_dominance = 0, bad_witness = 0;
    for (int inst = 0; inst < 50; ++inst) {
        double c = 0.25 + 19.5 * draw_u01(rng);
        auto h = loc::LinearConstraint::mean_at_most(c, {0, 20});
        loc::ConvexFunctional phi = (inst % 3 == 0)   ? loc::ConvexFunctional::tail(20.0 * draw_u01(rng))
                                    : (inst % 3 == 1) ? loc::ConvexFunctional::moment(1.0 + (inst % 4))
                                                      : loc::ConvexFunctional::upper_tail(20.0 * draw_u01(rng));
        auto res = loc::maximize_convex(phi, h, 0, 20, gamma, {}, rng(), 0);
        auto oracle = loc::brute_force_max(phi, h, 0, 20, gamma, 10000, rng());
        if (oracle.feasible > 0 && res.best_value < oracle.value - 1e-9) ++bad_dominance;
        if (!is_log_affine(res.best.pmf.seq, gamma)) ++bad_witness;
    }
    detail = "50 instances, " + std::to_string(bad_dominance) + " dominance misses, " + std::to_string(bad_witness) +
             " non-affine witnesses";
    return bad_dominance == 0 && bad_witness == 0;
}

// ---------------------------------------------------------------- criterion 4
bool tail_shape(std::string& detail) {
    auto gamma = ReferenceMeasure<double>::counting({0, 12});
    Rng rng(404);
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
        double c = 0.25 + 10.0 * draw_u01(rng);
        double t = c + 0.5 + (12.0 - c - 0.5) * draw_u01(rng);
        if (!loc::tail_extremizer_shape_check(c, t, 0, 12, gamma)) ++bad;
    }
    detail = "20 (c, t) pairs, " + std::to_string(bad) + " witnesses off the left endpoint";
    return bad == 0;
}

// ---------------------------------------------------------------- criterion 5
bool dilation_exhaustive(std::string& detail) {
    verify::SweepConfig cfg;
    cfg.interval = {0, 12};
    cfg.seed = 505;
    cfg.tolerance = 1e-12;
    auto rep = verify::sweep_dilation(cfg, 15, 200);
    detail = std::to_string(rep.instances_checked) + " instances, worst slack " + sci(rep.worst_slack);
    return rep.all_passed() && rep.worst_slack >= -1e-12;
}

// ---------------------------------------------------------------- criterion 6
bool prekopa_leindler(std::string& detail) {
    verify::SweepConfig cfg;
    cfg.interval = {0, 25};
    cfg.trials = 1000;
    cfg.seed = 606;
    cfg.tolerance = 1e-12;
    auto rep = verify::sweep_prekopa_leindler(cfg);
    detail = std::to_string(rep.instances_checked) + " instances (incl. " +
             rep.details["indicator_cases"].dump() + " indicator identities), worst slack " + sci(rep.worst_slack);
    return rep.all_passed() && rep.worst_slack >= -1e-12 && rep.details["indicator_failures"] == 0;
}

// ---------------------------------------------------------------- criterion 7
bool modulus_bound(std::string& detail) {
    std::vector<Rational> f200;
    for (std::int64_t n = 1; n <= 200; ++n) f200.push_back(Rational(n));
    bool ok = true;
    for (std::int64_t t : {2, 3, 4, 6, 8, 16})
        ok = ok && verify::modulus_of_regularity(f200, {1, 200}, Rational(1, t)) <= Rational(2, t);

    std::vector<Rational> f64(f200.begin(), f200.begin() + 64);
    auto fast = verify::modulus_of_regularity(f64, {1, 64}, Rational(1, 4));
    auto oracle = verify::modulus_of_regularity_naive(f64, {1, 64}, Rational(1, 4));
    ok = ok && fast == Rational(1, 3) && oracle == Rational(1, 3);
    detail = "delta(1/4) on [1,64] = " + format_rational(fast) + " (oracle " + format_rational(oracle) + ")";
    return ok;
}

// ---------------------------------------------------------------- criterion 8
bool deviation_corollaries(std::string& detail) {
    verify::SweepConfig cfg;
    cfg.seed = 808;
    cfg.tolerance = 1e-12;
    auto dev = verify::sweep_deviations(cfg, 200, 500);
    auto mean = verify::sweep_mean_deviation(cfg, 200, 500);
    detail = std::to_string(dev.instances_checked) + " median-bound + " + std::to_string(mean.instances_checked) +
             " mean-bound instances, worst slacks " + sci(dev.worst_slack) + " / " + sci(mean.worst_slack);
    return dev.all_passed() && mean.all_passed() && dev.worst_slack >= -1e-12 && mean.worst_slack >= -1e-12;
}

// ---------------------------------------------------------------- criterion 9
bool reverse_jensen(std::string& detail) {
    verify::SweepConfig cfg;
    cfg.seed = 909;
    cfg.tolerance = 0.0;  // the criterion demands worst slack >= 0
    auto rep = verify::sweep_reverse_jensen(cfg, 200, 500);
    detail = std::to_string(rep.instances_checked) + " instances, worst slack " + sci(rep.worst_slack);
    return rep.all_passed() && rep.worst_slack >= 0.0;
}

// --------------------------------------------------------------- criterion 10
bool predicate_equivalence(std::string& detail) {
    std::int64_t checked = 0, mismatches = 0;
    for (std::int64_t len = 1; len <= 6; ++len) {
        std::vector<std::int64_t> v(static_cast<size_t>(len), 0);
        while (true) {
            std::vector<Rational> vals(v.begin(), v.end());
            Sequence<Rational> f({0, len - 1}, std::move(vals));
            if (is_log_concave(f) != is_log_concave_gap_form(f)) ++mismatches;
            ++checked;
            std::int64_t i = 0;
            while (i < len && v[static_cast<size_t>(i)] == 3) v[static_cast<size_t>(i++)] = 0;
            if (i == len) break;
            ++v[static_cast<size_t>(i)];
        }
    }
    detail = std::to_string(checked) + " sequences, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "closed-form agreement with summation oracles", 10, closed_form_agreement},
        {2, "convolution closure, exact backend", 30, convolution_closure},
        {3, "localization dominance over brute force", 120, localization_dominance},
        {4, "tail extremizer shape", 30, tail_shape},
        {5, "dilation, exhaustive subsets of [0,12]", 300, dilation_exhaustive},
        {6, "discrete Prekopa-Leindler + sup-convolution identity", 60, prekopa_leindler},
        {7, "modulus of regularity bound and frozen value", 10, modulus_bound},
        {8, "deviation corollaries (median and mean)", 60, deviation_corollaries},
        {9, "reverse Jensen moment comparison", 30, reverse_jensen},
        {10, "predicate equivalence, exhaustive", 60, predicate_equivalence},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_budget = secs < c.budget_seconds;
        bool pass = ok && in_budget;
        if (!pass) ++failures;
        std::printf("criterion %2d [%s]: %s (%.2f s / budget %.0f s) -- %s\n", c.id, c.label.c_str(),
                    pass ? "PASS" : "FAIL", secs, c.budget_seconds, detail.c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
