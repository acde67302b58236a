#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lcdk/closed_forms.hpp"
#include "lcdk/localization.hpp"
#include "lcdk/verifiers.hpp"

namespace lcdk::verify {

// Optional per-instance sink for CSV export: (instance label, slack, pass).
using RowSink = std::function<void(const std::string&, double, bool)>;

struct SweepConfig {
    IntegerInterval interval{0, 20};
    std::int64_t trials = 500;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-12;
    bool exhaustive = false;
    RowSink sink;
};

namespace detail {

inline void sink_row(const SweepConfig& cfg, const std::string& label, double slack, bool pass) {
    if (cfg.sink) cfg.sink(label, slack, pass);
}

}  // namespace detail

// The truncated-geometric parameter grid used by the closed-form and deviation
// sweeps: p in {0.05 j : j = 1..19} + {1, 1.5, 2, 4, 10}, k in {0, 3},
// span l - k in {0..200}.
struct GeomGridPoint {
    double p;
    std::int64_t k;
    std::int64_t l;
};

inline std::vector<GeomGridPoint> geom_parameter_grid(std::int64_t max_span = 200) {
    std::vector<double> ps;
    for (int j = 1; j <= 19; ++j) ps.push_back(0.05 * j);
    for (double p : {1.0, 1.5, 2.0, 4.0, 10.0}) ps.push_back(p);
    std::vector<GeomGridPoint> out;
    for (double p : ps)
        for (std::int64_t k : {0, 3})
            for (std::int64_t span = 0; span <= max_span; ++span) out.push_back({p, k, k + span});
    return out;
}

inline ProbSequence<double> materialize_geom(const GeomGridPoint& g) {
    return log_affine_pmf(std::log(g.p), {g.k, g.l},
                          ReferenceMeasure<double>::counting({g.k, g.l}));
}

// --------------------------------------------------------------------------
// verify four-functions: a fixed instance family exercising the reduction.
// --------------------------------------------------------------------------
inline VerificationReport sweep_four_functions(const SweepConfig& cfg) {
    IntegerInterval itv = cfg.interval;
    auto gamma = ReferenceMeasure<double>::counting(itv);
    const auto len = static_cast<size_t>(itv.length());
    Rng rng(cfg.seed);

    VerificationReport rep;
    rep.name = "four-functions";
    rep.config = {{"interval", {itv.lo, itv.hi}}, {"trials", cfg.trials}, {"seed", cfg.seed}};

    auto run = [&](const FourFunctionsInstance& inst, const std::string& label, std::int64_t trials) {
        auto sub = four_functions_check(inst, gamma, itv, trials, rng());
        detail::sink_row(cfg, label, sub.worst_slack, sub.all_passed());
        rep.absorb(sub);
    };

    // equality instance: all four equal
    {
        FourFunctionsInstance inst;
        inst.f1 = inst.f2 = inst.f3 = inst.f4 = std::vector<double>(len, 1.0);
        run(inst, "equal", cfg.trials / 5 + 1);
    }
    // monotone instance: indicators of nested sets
    {
        FourFunctionsInstance inst;
        inst.f1.assign(len, 0.0);
        for (size_t i = len / 4; i < 3 * len / 4; ++i) inst.f1[i] = 1.0;
        inst.f2 = inst.f1;
        inst.f3.assign(len, 1.0);
        inst.f4.assign(len, 1.0);
        run(inst, "nested", cfg.trials / 5 + 1);
    }
    // dilation-style indicator instances with random A and delta, in both
    // orientations: the one that holds on the grid (and therefore must hold on
    // samples) and the reversed one, whose implication is usually vacuous
    for (int rep_i = 0; rep_i < 8; ++rep_i) {
        std::set<std::int64_t> A;
        for (std::int64_t n = itv.lo; n <= itv.hi; ++n)
            if (draw_u01(rng) < 0.5) A.insert(n);
        Rational delta(draw_int(rng, 1, 9), 10);
        auto a_delta = dilation_set(A, itv, delta);
        std::vector<double> ind_a(len, 0.0), ind_ad(len, 0.0);
        for (std::int64_t a : A) ind_a[static_cast<size_t>(a - itv.lo)] = 1.0;
        for (std::int64_t a : a_delta) ind_ad[static_cast<size_t>(a - itv.lo)] = 1.0;

        FourFunctionsInstance holds;  // mu(A_delta)^delta <= mu(A)
        holds.f1 = ind_ad;
        holds.f2.assign(len, 1.0);
        holds.f3.assign(len, 1.0);
        holds.f4 = ind_a;
        holds.alpha = to_double(delta);
        holds.beta = 1.0;
        run(holds, "dilation-indicators", cfg.trials);

        FourFunctionsInstance reversed;
        reversed.f1.assign(len, 1.0);
        reversed.f2 = ind_a;
        reversed.f3 = ind_ad;
        reversed.f4.assign(len, 1.0);
        reversed.alpha = to_double(delta);
        reversed.beta = 1.0;
        run(reversed, "dilation-indicators-reversed", cfg.trials / 4 + 1);
    }
    // random nonnegative quadruples: consistency must hold regardless of content
    for (int rep_i = 0; rep_i < 8; ++rep_i) {
        FourFunctionsInstance inst;
        for (auto* f : {&inst.f1, &inst.f2, &inst.f3, &inst.f4}) {
            f->resize(len);
            for (double& v : *f) v = draw_u01(rng);
        }
        inst.alpha = 0.25 + 2.0 * draw_u01(rng);
        inst.beta = 0.25 + 2.0 * draw_u01(rng);
        run(inst, "random-quadruple", cfg.trials / 2 + 1);
    }
    return rep;
}

// --------------------------------------------------------------------------
// verify convolution: exact closure sweep plus the geometric-series identity.
// --------------------------------------------------------------------------
inline VerificationReport sweep_convolution(const SweepConfig& cfg, std::int64_t rational_r_count = 200,
                                            std::int64_t max_m = 12) {
    auto gamma = ReferenceMeasure<Rational>::counting({0, 2 * std::max<std::int64_t>(cfg.interval.hi, 30)});
    auto rep = convolution_stability_reduction_check(gamma, cfg.trials, cfg.seed);
    detail::sink_row(cfg, "convolution-closure", rep.worst_slack, rep.all_passed());

    Rng rng(cfg.seed + 1);
    std::int64_t series_pass = 0, series_total = 0;
    for (std::int64_t i = 0; i < rational_r_count; ++i) {
        Rational R(draw_int(rng, 1, 40), draw_int(rng, 1, 40));
        if (R == 1) R += Rational(1, 41);
        for (std::int64_t m = 0; m <= max_m; ++m) {
            bool ok = geometric_series_inequality_holds(R, m);
            ++series_total;
            if (ok) ++series_pass;
            rep.record(ok ? 0.0 : -1.0, 0.0, {{"family", "geometric-series"}, {"R", format_rational(R)}, {"m", m}});
        }
    }
    rep.details["geometric_series_checked"] = series_total;
    rep.details["geometric_series_pass"] = series_pass;
    return rep;
}

// --------------------------------------------------------------------------
// verify prekopa-leindler: random triples plus the indicator closed form.
// --------------------------------------------------------------------------

// f#g of interval indicators is the indicator of
// [floor((1-t)a1 + t b1), ceil((1-t)a2 + t b2)]; checked exhaustively.
inline bool indicator_sup_convolution_matches(IntegerInterval a, IntegerInterval b, const Rational& t) {
    auto f = Sequence<double>::indicator(a);
    auto g = Sequence<double>::indicator(b);
    auto sc = sup_convolution(f, g, t);
    const auto num = boost::multiprecision::numerator(t).convert_to<std::int64_t>();
    const auto den = boost::multiprecision::denominator(t).convert_to<std::int64_t>();
    auto floor_div = [](std::int64_t x, std::int64_t y) { return x >= 0 ? x / y : -((-x + y - 1) / y); };
    auto ceil_div = [](std::int64_t x, std::int64_t y) { return x >= 0 ? (x + y - 1) / y : -(-x / y); };
    std::int64_t L1 = floor_div((den - num) * a.lo + num * b.lo, den);
    std::int64_t L2 = ceil_div((den - num) * a.hi + num * b.hi, den);
    for (std::int64_t z = sc.interval.lo; z <= sc.interval.hi; ++z) {
        double expect = (L1 <= z && z <= L2) ? 1.0 : 0.0;
        if (sc(z) != expect) return false;
    }
    return sc.interval.lo == L1 && sc.interval.hi == L2;
}

inline VerificationReport sweep_prekopa_leindler(const SweepConfig& cfg,
                                                 const std::vector<Rational>& t_set = {Rational(1, 4), Rational(1, 2),
                                                                                       Rational(3, 4)},
                                                 IntegerInterval indicator_window = {0, 15}) {
    VerificationReport rep;
    rep.name = "prekopa-leindler";
    rep.config = {{"interval", {cfg.interval.lo, cfg.interval.hi}}, {"trials", cfg.trials}, {"seed", cfg.seed}};

    auto gamma = ReferenceMeasure<double>::counting(cfg.interval);
    Rng rng(cfg.seed);
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        auto mu = random_log_concave(rng, cfg.interval, gamma);
        auto f = random_unimodal(rng, cfg.interval);
        auto g = random_unimodal(rng, cfg.interval);
        for (const Rational& t : t_set) {
            auto sub = prekopa_leindler_check(f, g, t, mu, false, cfg.tolerance);
            detail::sink_row(cfg, "pl-random-" + std::to_string(i), sub.worst_slack, sub.all_passed());
            rep.absorb(sub);
        }
    }

    std::int64_t indicator_fail = 0, indicator_total = 0;
    std::vector<Rational> t_closed = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3)};
    for (std::int64_t a1 = indicator_window.lo; a1 <= indicator_window.hi; ++a1)
        for (std::int64_t a2 = a1; a2 <= indicator_window.hi; ++a2)
            for (std::int64_t b1 = indicator_window.lo; b1 <= indicator_window.hi; ++b1)
                for (std::int64_t b2 = b1; b2 <= indicator_window.hi; ++b2)
                    for (const Rational& t : t_closed) {
                        bool ok = indicator_sup_convolution_matches({a1, a2}, {b1, b2}, t);
                        ++indicator_total;
                        if (!ok) ++indicator_fail;
                        rep.record(ok ? 0.0 : -1.0, 0.0,
                                   {{"family", "indicator-closed-form"}, {"a", {a1, a2}}, {"b", {b1, b2}}});
                    }
    rep.details = {{"indicator_cases", indicator_total}, {"indicator_failures", indicator_fail}};
    return rep;
}

// --------------------------------------------------------------------------
// verify dilation: exhaustive subsets of a small window.
// --------------------------------------------------------------------------
inline VerificationReport sweep_dilation(const SweepConfig& cfg, int affine_grid = 15, std::int64_t random_mus = 200) {
    IntegerInterval K = cfg.interval;
    const std::int64_t len = K.length();
    if (len > 16) throw std::invalid_argument("sweep_dilation: window too large for exhaustive subsets");
    auto gamma = ReferenceMeasure<double>::counting(K);

    VerificationReport rep;
    rep.name = "dilation";
    rep.config = {{"K", {K.lo, K.hi}},
                  {"affine_grid", affine_grid},
                  {"random_mus", random_mus},
                  {"seed", cfg.seed},
                  {"deltas", "j/10, j=1..9"},
                  {"truncation", "finite window; every law carries full mass inside K"}};

    // law set: log-affine across a ratio grid on the full window + random laws
    std::vector<ProbSequence<double>> mus;
    for (int i = 0; i < affine_grid; ++i) {
        double s = -4.0 + 8.0 * static_cast<double>(i) / (affine_grid - 1);
        mus.push_back(log_affine_pmf(s, K, gamma));
    }
    Rng rng(cfg.seed);
    for (std::int64_t i = 0; i < random_mus; ++i) {
        auto mu = random_log_concave(rng, K, gamma);
        mus.push_back(ProbSequence<double>(mu.seq.extended_to(K)));
    }

    // subset-sum table per law: mass[mask] in one DP pass
    const auto n_masks = static_cast<std::uint32_t>(1u << len);
    std::vector<std::vector<double>> mass(mus.size(), std::vector<double>(n_masks, 0.0));
    for (size_t mi = 0; mi < mus.size(); ++mi) {
        auto& tbl = mass[mi];
        for (std::uint32_t m = 1; m < n_masks; ++m) {
            std::uint32_t low_bit = m & (~m + 1);
            std::int64_t idx = K.lo + static_cast<std::int64_t>(std::countr_zero(low_bit));
            tbl[m] = tbl[m & (m - 1)] + mus[mi](idx);
        }
    }

    const std::uint32_t full = n_masks - 1;
    for (std::int64_t dj = 1; dj <= 9; ++dj) {
        const double d = static_cast<double>(dj) / 10.0;
        std::vector<double> muK_pow(mus.size());
        for (size_t mi = 0; mi < mus.size(); ++mi) muK_pow[mi] = std::pow(mass[mi][full], 1.0 - d);
        for (std::uint32_t a = 0; a < n_masks; ++a) {
            std::uint32_t ad = dilation_set_mask(a, len, dj, 10);
            for (size_t mi = 0; mi < mus.size(); ++mi) {
                double rhs = ad == 0 ? 0.0 : std::pow(mass[mi][ad], d) * muK_pow[mi];
                double slack = mass[mi][a] - rhs;
                if (slack < rep.worst_slack) rep.witness = {{"mask", a}, {"delta", dj}, {"mu", mi}};
                rep.record(slack, cfg.tolerance);
            }
            if (cfg.sink && a % 512 == 0)
                detail::sink_row(cfg, "dilation-mask-" + std::to_string(a) + "-d" + std::to_string(dj),
                                 rep.worst_slack, rep.all_passed());
        }
    }
    return rep;
}

// --------------------------------------------------------------------------
// verify functional-dilation: random instances + three-valued cross-check.
// --------------------------------------------------------------------------
inline VerificationReport sweep_functional_dilation(const SweepConfig& cfg) {
    IntegerInterval K = cfg.interval;
    auto gamma = ReferenceMeasure<double>::counting(K);
    Rng rng(cfg.seed);

    VerificationReport rep;
    rep.name = "functional-dilation";
    rep.config = {{"interval", {K.lo, K.hi}}, {"trials", cfg.trials}, {"seed", cfg.seed}};

    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        auto mu = ProbSequence<double>(random_log_concave(rng, K, gamma).seq.extended_to(K));
        std::vector<double> f(static_cast<size_t>(K.length()));
        for (double& v : f) v = 4.0 * draw_u01(rng) - 2.0;
        double lambda = 0.25 + 2.0 * draw_u01(rng);
        Rational eps(draw_int(rng, 1, 9), 10);
        auto sub = functional_dilation_check(mu, f, lambda, eps, cfg.tolerance);
        detail::sink_row(cfg, "fd-random-" + std::to_string(i), sub.worst_slack, sub.all_passed());
        rep.absorb(sub);
    }

    // Three-valued cross-check: a matched construction recovers the geometric
    // inequality. Levels chosen so the small-value sets seen from each level
    // are exactly the complement of A (from A_delta) or empty.
    std::int64_t matched = 0, matched_ok = 0;
    for (std::int64_t i = 0; i < cfg.trials / 5 + 1; ++i) {
        auto mu = ProbSequence<double>(random_log_concave(rng, K, gamma).seq.extended_to(K));
        std::set<std::int64_t> A;
        for (std::int64_t n = K.lo; n <= K.hi; ++n)
            if (draw_u01(rng) < 0.6) A.insert(n);
        if (A.empty()) continue;
        Rational delta(draw_int(rng, 1, 9), 10);
        auto a_delta = dilation_set(A, K, delta);

        const Rational eps(1, 4);
        const double lambda = 1.0;
        const double c_level = 0.5;    // eps < c < 1
        const double d_level = 0.1875; // eps*c < d <= eps
        std::vector<double> f(static_cast<size_t>(K.length()), d_level);
        for (std::int64_t a : A) f[static_cast<size_t>(a - K.lo)] = c_level;
        for (std::int64_t a : a_delta) f[static_cast<size_t>(a - K.lo)] = 1.0;

        Rational delta_f = modulus_of_regularity(f, K, eps);
        bool delta_bounded = a_delta.empty() || delta_f <= delta;
        auto fd = functional_dilation_check(mu, f, lambda, eps, cfg.tolerance);
        double geo_slack = dilation_slack(mu, A, K, delta);
        bool ok = delta_bounded && fd.all_passed() && geo_slack >= -cfg.tolerance;
        ++matched;
        if (ok) ++matched_ok;
        rep.record(ok ? 0.0 : -1.0, 0.0, {{"family", "three-valued"}, {"trial", i}});
    }
    rep.details = {{"matched_instances", matched}, {"matched_ok", matched_ok}};
    return rep;
}

// --------------------------------------------------------------------------
// verify deviations / mean-deviation / reverse-jensen over the geometric grid
// and random laws.
// --------------------------------------------------------------------------
inline VerificationReport sweep_deviations(const SweepConfig& cfg, std::int64_t max_span = 200,
                                           std::int64_t random_laws = 500) {
    VerificationReport rep;
    rep.name = "deviations";
    rep.config = {{"seed", cfg.seed}, {"max_span", max_span}, {"random_laws", random_laws}};
    const std::vector<double> t_grid = {1.5, 2.0, 4.0, 8.0};
    const std::vector<double> eps_grid = {0.1, 0.25, 0.5, 0.9};

    for (const auto& g : geom_parameter_grid(max_span)) {
        auto mu = materialize_geom(g);
        auto sub = identity_deviation_checks(mu, t_grid, eps_grid, cfg.tolerance);
        rep.absorb(sub);
    }
    detail::sink_row(cfg, "geom-grid", rep.worst_slack, rep.all_passed());

    auto gamma = ReferenceMeasure<double>::counting({1, 40});
    Rng rng(cfg.seed);
    for (std::int64_t i = 0; i < random_laws; ++i) {
        auto mu = random_log_concave(rng, {1, 40}, gamma);
        auto sub = identity_deviation_checks(mu, t_grid, eps_grid, cfg.tolerance);
        detail::sink_row(cfg, "random-" + std::to_string(i), sub.worst_slack, sub.all_passed());
        rep.absorb(sub);
    }

    // the |f|-median bounds on the same family, f = identity
    IntegerInterval K{1, 60};
    std::vector<double> identity;
    for (std::int64_t n = K.lo; n <= K.hi; ++n) identity.push_back(static_cast<double>(n));
    std::vector<Rational> t_rat = {Rational(3, 2), Rational(2), Rational(4), Rational(8)};
    std::vector<Rational> eps_rat = {Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(9, 10)};
    for (double s : {-0.9, -0.5, -0.2, -0.05, 0.0, 0.1, 0.4, 0.8}) {
        auto mu = log_affine_pmf(s, K, ReferenceMeasure<double>::counting(K));
        rep.absorb(median_deviation_checks(mu, identity, t_rat, eps_rat, cfg.tolerance));
    }
    detail::sink_row(cfg, "median-geom", rep.worst_slack, rep.all_passed());
    return rep;
}

inline VerificationReport sweep_mean_deviation(const SweepConfig& cfg, std::int64_t max_span = 200,
                                               std::int64_t random_laws = 500) {
    VerificationReport rep;
    rep.name = "mean-deviation";
    rep.config = {{"seed", cfg.seed}, {"max_span", max_span}, {"random_laws", random_laws}};
    const std::vector<double> t_grid = {0.0, 1.0, 2.5, 5.0, 10.0, 25.0, 60.0, 150.0};

    // closed-form fast path on the truncated-geometric grid
    for (const auto& g : geom_parameter_grid(max_span)) {
        geom::TruncGeom<double> tg(g.p, g.k, g.l);
        double c = geom::trunc_geom_mean(tg);
        for (double t : t_grid) {
            double slack = mean_tail_bound(t, c) - geom::trunc_geom_tail(tg, t);
            rep.record(slack, cfg.tolerance, {{"p", g.p}, {"k", g.k}, {"l", g.l}, {"t", t}});
        }
    }
    detail::sink_row(cfg, "geom-grid", rep.worst_slack, rep.all_passed());

    auto gamma = ReferenceMeasure<double>::counting({0, 40});
    Rng rng(cfg.seed);
    for (std::int64_t i = 0; i < random_laws; ++i) {
        auto mu = random_log_concave(rng, {0, 40}, gamma);
        auto sub = mean_deviation_check(mu, t_grid, cfg.tolerance);
        detail::sink_row(cfg, "random-" + std::to_string(i), sub.worst_slack, sub.all_passed());
        rep.absorb(sub);
    }
    return rep;
}

inline VerificationReport sweep_reverse_jensen(const SweepConfig& cfg, std::int64_t max_span = 200,
                                               std::int64_t random_laws = 500) {
    VerificationReport rep;
    rep.name = "reverse-jensen";
    rep.config = {{"seed", cfg.seed}, {"max_span", max_span}, {"random_laws", random_laws}};
    const std::vector<std::pair<double, double>> rs = {{1, 2}, {1, 3}, {2, 4}, {1, 8}};

    for (const auto& g : geom_parameter_grid(max_span)) {
        auto mu = materialize_geom(g);
        for (auto [r, s] : rs) rep.absorb(reverse_jensen_check(mu, r, s, cfg.tolerance));
    }
    detail::sink_row(cfg, "geom-grid", rep.worst_slack, rep.all_passed());

    auto gamma = ReferenceMeasure<double>::counting({0, 60});
    Rng rng(cfg.seed);
    for (std::int64_t i = 0; i < random_laws; ++i) {
        auto mu = random_log_concave(rng, {0, 60}, gamma);
        for (auto [r, s] : rs) {
            auto sub = reverse_jensen_check(mu, r, s, cfg.tolerance);
            detail::sink_row(cfg, "random-" + std::to_string(i), sub.worst_slack, sub.all_passed());
            rep.absorb(sub);
        }
    }
    return rep;
}

}  // namespace lcdk::verify
