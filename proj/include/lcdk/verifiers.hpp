#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcdk/interval.hpp"
#include "lcdk/log_affine.hpp"
#include "lcdk/predicates.hpp"
#include "lcdk/random.hpp"
#include "lcdk/rational.hpp"
#include "lcdk/reference.hpp"
#include "lcdk/report.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk::verify {

// ---------------------------------------------------------------------------
// Four functions
// ---------------------------------------------------------------------------

// Checks consistency of the reduction for
//   E[f1]^alpha E[f2]^beta <= E[f3]^alpha E[f4]^beta:
// if the inequality holds on the whole log-affine grid it must hold on random
// log-concave laws. Slack is computed in the log domain; E[f3] = 0 gets the
// epsilon shift so the right side stays finite.
struct FourFunctionsInstance {
    std::vector<double> f1, f2, f3, f4;  // indexed over `interval`
    double alpha = 1, beta = 1;
};

inline double four_functions_slack(const FourFunctionsInstance& inst, const ProbSequence<double>& mu,
                                   IntegerInterval interval, double eps_shift) {
    double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
    for (std::int64_t n = interval.lo; n <= interval.hi; ++n) {
        double w = mu(n);
        auto i = static_cast<size_t>(n - interval.lo);
        e1 += inst.f1[i] * w;
        e2 += inst.f2[i] * w;
        e3 += inst.f3[i] * w;
        e4 += inst.f4[i] * w;
    }
    if (e3 == 0) e3 = eps_shift;
    double lhs = inst.alpha * std::log(e1) + inst.beta * std::log(e2);
    double rhs = inst.alpha * std::log(e3) + inst.beta * std::log(e4);
    if (lhs == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
    return rhs - lhs;
}

inline VerificationReport four_functions_check(const FourFunctionsInstance& inst,
                                               const ReferenceMeasure<double>& gamma, IntegerInterval interval,
                                               std::int64_t trials, std::uint64_t seed = kDefaultSeed,
                                               int grid_points = 64, double tol = 1e-9, double eps_shift = 1e-12) {
    if (!gamma.support.contains(interval))
        throw std::invalid_argument("four_functions_check: interval outside reference window");
    for (const auto* f : {&inst.f1, &inst.f2, &inst.f3, &inst.f4}) {
        if (static_cast<std::int64_t>(f->size()) != interval.length())
            throw std::invalid_argument("four_functions_check: function length mismatch");
        for (double v : *f)
            if (v < 0) throw std::invalid_argument("four_functions_check: functions must be nonnegative");
    }
    if (!(inst.alpha > 0) || !(inst.beta > 0))
        throw std::invalid_argument("four_functions_check: exponents must be positive");

    VerificationReport rep;
    rep.name = "four-functions";
    rep.config = {{"interval", {interval.lo, interval.hi}}, {"trials", trials},     {"seed", seed},
                  {"grid_points", grid_points},             {"alpha", inst.alpha},  {"beta", inst.beta},
                  {"eps_shift", eps_shift}};

    double affine_worst = std::numeric_limits<double>::infinity();
    for (std::int64_t k = interval.lo; k <= interval.hi; ++k) {
        for (std::int64_t l = k; l <= interval.hi; ++l) {
            for (int i = 0; i < (k == l ? 1 : grid_points); ++i) {
                double s = k == l ? 0.0 : -40.0 + 80.0 * static_cast<double>(i) / (grid_points - 1);
                auto mu = log_affine_pmf(s, {k, l}, gamma);
                affine_worst = std::min(affine_worst, four_functions_slack(inst, mu, interval, eps_shift));
            }
        }
    }
    bool affine_pass = affine_worst >= -tol;

    double concave_worst = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    for (std::int64_t i = 0; i < trials; ++i) {
        auto mu = random_log_concave(rng, interval, gamma);
        concave_worst = std::min(concave_worst, four_functions_slack(inst, mu, interval, eps_shift));
    }
    bool concave_pass = concave_worst >= -tol;

    bool consistent = !affine_pass || concave_pass;
    rep.details = {{"affine_worst", std::clamp(affine_worst, -1e300, 1e300)},
                   {"affine_pass", affine_pass},
                   {"concave_worst", std::clamp(concave_worst, -1e300, 1e300)},
                   {"concave_pass", concave_pass},
                   {"consistent", consistent}};
    // One logical instance: the reduction itself. Slack 0/-1 encodes the implication.
    rep.record(consistent ? 0.0 : -1.0, tol, {{"affine_worst", std::clamp(affine_worst, -1e300, 1e300)},
                                              {"concave_worst", std::clamp(concave_worst, -1e300, 1e300)}});
    return rep;
}

// ---------------------------------------------------------------------------
// Convolution stability
// ---------------------------------------------------------------------------

// Samples pairs of log-affine (resp. log-concave) laws relative to gamma,
// convolves exactly, and tests relative log-concavity of the result. For the
// counting reference both families must pass without exception.
inline VerificationReport convolution_stability_reduction_check(const ReferenceMeasure<Rational>& gamma,
                                                                std::int64_t trials,
                                                                std::uint64_t seed = kDefaultSeed) {
    VerificationReport rep;
    rep.name = "convolution-stability";
    rep.config = {{"trials", trials}, {"seed", seed}};

    // Half-window so the convolution support stays inside the reference window.
    IntegerInterval w = gamma.support;
    IntegerInterval half{(w.lo + (w.lo > 0 ? 1 : 0)) / 2, (w.hi - (w.hi < 0 ? 1 : 0)) / 2};
    if (half.lo > half.hi) throw std::invalid_argument("convolution_stability: window too small");

    Rng rng(seed);
    std::int64_t affine_pass = 0, concave_pass = 0;
    auto random_support = [&] {
        std::int64_t a = draw_int(rng, half.lo, half.hi);
        std::int64_t b = draw_int(rng, half.lo, half.hi);
        return IntegerInterval{std::min(a, b), std::max(a, b)};
    };
    auto random_ratio = [&] { return Rational(draw_int(rng, 1, 12), draw_int(rng, 1, 12)); };

    for (std::int64_t i = 0; i < trials; ++i) {
        auto f = materialize_log_affine<Rational>(1, random_ratio(), random_support(), gamma);
        auto g = materialize_log_affine<Rational>(1, random_ratio(), random_support(), gamma);
        bool ok = is_log_concave(convolve(f, g), gamma);
        if (ok) ++affine_pass;
        rep.record(ok ? 0.0 : -1.0, 0.0, {{"family", "affine"}, {"trial", i}});
    }
    for (std::int64_t i = 0; i < trials; ++i) {
        auto f = random_log_concave(rng, half, gamma);
        auto g = random_log_concave(rng, half, gamma);
        bool ok = is_log_concave(convolve(f.seq, g.seq), gamma);
        if (ok) ++concave_pass;
        rep.record(ok ? 0.0 : -1.0, 0.0, {{"family", "concave"}, {"trial", i}});
    }
    rep.details = {{"affine_pairs", trials},   {"affine_pass", affine_pass},
                   {"concave_pairs", trials},  {"concave_pass", concave_pass},
                   {"closed_for_affine", affine_pass == trials}, {"closed_for_concave", concave_pass == trials}};
    return rep;
}

// (R^{m+1}-1)^2 >= (R^{m+2}-1)(R^m-1), exactly, for rational R > 0, R != 1.
inline bool geometric_series_inequality_holds(const Rational& R, std::int64_t m) {
    Rational a = rational_pow(R, m + 1) - 1;
    return a * a >= (rational_pow(R, m + 2) - 1) * (rational_pow(R, m) - 1);
}

// ---------------------------------------------------------------------------
// Sup-convolution and Prekopa-Leindler
// ---------------------------------------------------------------------------

// (f #_t g)(z) = max f(x)^{1-t} g(y)^t over |(1-t)x + t y - z| < 1 (strict).
// t is taken as an exact rational so the window test and the output interval
// are decided in integer arithmetic; only the value uses floating powers.
inline Sequence<double> sup_convolution(const Sequence<double>& f, const Sequence<double>& g, const Rational& t) {
    if (!(t > 0) || !(t < 1)) throw std::domain_error("sup_convolution: t must lie in (0,1)");
    const auto num = boost::multiprecision::numerator(t).convert_to<std::int64_t>();
    const auto den = boost::multiprecision::denominator(t).convert_to<std::int64_t>();
    const std::int64_t cnum = den - num;  // (1-t) = cnum/den
    const double td = to_double(t);

    auto floor_div = [](std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    auto ceil_div = [](std::int64_t a, std::int64_t b) { return a >= 0 ? (a + b - 1) / b : -(-a / b); };

    IntegerInterval out_itv{floor_div(cnum * f.interval.lo + num * g.interval.lo, den),
                            ceil_div(cnum * f.interval.hi + num * g.interval.hi, den)};
    std::vector<double> vals(out_itv.length(), 0.0);

    for (std::int64_t x = f.interval.lo; x <= f.interval.hi; ++x) {
        double fx = f.at(x);
        if (fx <= 0) continue;
        double fpow = std::pow(fx, 1.0 - td);
        for (std::int64_t y = g.interval.lo; y <= g.interval.hi; ++y) {
            double gy = g.at(y);
            if (gy <= 0) continue;
            double v = fpow * std::pow(gy, td);
            std::int64_t q = cnum * x + num * y;  // den * ((1-t)x + ty)
            // integers z with |q - den z| < den
            std::int64_t zlo = floor_div(q - den, den) + 1;
            std::int64_t zhi = ceil_div(q + den, den) - 1;
            for (std::int64_t z = zlo; z <= zhi; ++z) {
                if (!out_itv.contains(z)) continue;
                auto i = static_cast<size_t>(z - out_itv.lo);
                vals[i] = std::max(vals[i], v);
            }
        }
    }
    return Sequence<double>(out_itv, std::move(vals));
}

template <class T>
double integrate(const Sequence<double>& f, const ProbSequence<T>& mu) {
    double s = 0;
    for (std::int64_t n = mu.interval().lo; n <= mu.interval().hi; ++n) s += f(n) * to_double(mu(n));
    return s;
}

// slack = int f#g dmu - (int f dmu)^{1-t} (int g dmu)^t. Hypothesis violations
// (non-unimodal f or g, non-log-concave mu) throw rather than count as failures.
inline VerificationReport prekopa_leindler_check(const Sequence<double>& f, const Sequence<double>& g,
                                                 const Rational& t, const ProbSequence<double>& mu,
                                                 bool check_hypotheses = true, double tol = 1e-12) {
    if (check_hypotheses) {
        if (!is_unimodal(f) || !is_unimodal(g))
            throw std::invalid_argument("prekopa_leindler_check: f and g must be unimodal");
        if (!is_log_concave(mu.seq)) throw std::invalid_argument("prekopa_leindler_check: mu must be log-concave");
    }
    double td = to_double(t);
    double int_f = integrate(f, mu), int_g = integrate(g, mu);
    double lhs = integrate(sup_convolution(f, g, t), mu);
    double rhs = std::pow(int_f, 1.0 - td) * std::pow(int_g, td);
    VerificationReport rep;
    rep.name = "prekopa-leindler";
    rep.config = {{"t", format_rational(t)}};
    rep.record(lhs - rhs, tol, {{"lhs", lhs}, {"rhs", rhs}});
    return rep;
}

// ---------------------------------------------------------------------------
// Dilation
// ---------------------------------------------------------------------------

namespace detail {

// It suffices to test intervals anchored at z: an interval around z splits
// into two anchored halves and the density bound survives the union.
template <class Count>
bool anchored_density_ok(std::int64_t z, IntegerInterval K, std::int64_t dnum, std::int64_t dden, Count in_a) {
    // |A meet D| >= (1-delta)|D|  <=>  dden*|A meet D| >= (dden-dnum)*|D|
    for (std::int64_t y = K.lo; y <= K.hi; ++y) {
        if (y == z) continue;
        auto d = delta_interval(z, y);
        std::int64_t card = d->length();
        std::int64_t inside = in_a(d->lo, d->hi);
        if (dden * inside < (dden - dnum) * card) return false;
    }
    return true;
}

}  // namespace detail

// A_delta = points of A whose every anchored interval inside K is filled by A
// to fraction at least 1-delta. delta is exact rational; counts are integers,
// so membership is decided exactly.
inline std::set<std::int64_t> dilation_set(const std::set<std::int64_t>& A, IntegerInterval K, const Rational& delta) {
    if (!(delta > 0) || !(delta < 1)) throw std::domain_error("dilation_set: delta must lie in (0,1)");
    for (std::int64_t a : A)
        if (!K.contains(a)) throw std::invalid_argument("dilation_set: A must be contained in K");
    const auto dnum = boost::multiprecision::numerator(delta).convert_to<std::int64_t>();
    const auto dden = boost::multiprecision::denominator(delta).convert_to<std::int64_t>();

    // prefix[i] = |A meet [K.lo, K.lo+i-1]|
    std::vector<std::int64_t> prefix(static_cast<size_t>(K.length()) + 1, 0);
    for (std::int64_t n = K.lo; n <= K.hi; ++n)
        prefix[static_cast<size_t>(n - K.lo) + 1] = prefix[static_cast<size_t>(n - K.lo)] + (A.count(n) ? 1 : 0);
    auto in_a = [&](std::int64_t lo, std::int64_t hi) {
        return prefix[static_cast<size_t>(hi - K.lo) + 1] - prefix[static_cast<size_t>(lo - K.lo)];
    };

    std::set<std::int64_t> out;
    for (std::int64_t z : A)
        if (detail::anchored_density_ok(z, K, dnum, dden, in_a)) out.insert(z);
    return out;
}

// Bitmask variant for exhaustive sweeps over small K (bit i = K.lo + i).
inline std::uint32_t dilation_set_mask(std::uint32_t a_mask, std::int64_t len, std::int64_t dnum, std::int64_t dden) {
    std::vector<std::int64_t> prefix(static_cast<size_t>(len) + 1, 0);
    for (std::int64_t i = 0; i < len; ++i)
        prefix[static_cast<size_t>(i) + 1] = prefix[static_cast<size_t>(i)] + ((a_mask >> i) & 1u);
    auto in_a = [&](std::int64_t lo, std::int64_t hi) {
        return prefix[static_cast<size_t>(hi) + 1] - prefix[static_cast<size_t>(lo)];
    };
    std::uint32_t out = 0;
    for (std::int64_t z = 0; z < len; ++z) {
        if (!((a_mask >> z) & 1u)) continue;
        if (detail::anchored_density_ok(z, IntegerInterval{0, len - 1}, dnum, dden, in_a)) out |= (1u << z);
    }
    return out;
}

template <class T>
T measure_of(const ProbSequence<T>& mu, const std::set<std::int64_t>& A) {
    T s(0);
    for (std::int64_t a : A) s += mu(a);
    return s;
}

// slack = mu(A) - mu(A_delta)^delta mu(K)^{1-delta}, with 0^delta := 0 for an
// empty A_delta. On the rational backend the verdict is also decided exactly
// by clearing the fractional powers: mu(A)^den >= mu(A_delta)^num mu(K)^{den-num}.
template <class T>
double dilation_slack(const ProbSequence<T>& mu, const std::set<std::int64_t>& A, IntegerInterval K,
                      const Rational& delta, bool* exact_holds = nullptr) {
    if (!mu.interval().contains(K)) throw std::invalid_argument("dilation_slack: K must lie in the support window");
    auto a_delta = dilation_set(A, K, delta);
    T muA = measure_of(mu, A);
    T muK(0);
    for (std::int64_t n = K.lo; n <= K.hi; ++n) muK += mu(n);
    T muAd = measure_of(mu, a_delta);
    double d = to_double(delta);
    double rhs = a_delta.empty() ? 0.0 : std::pow(to_double(muAd), d) * std::pow(to_double(muK), 1.0 - d);
    if (exact_holds) {
        if constexpr (scalar_traits<T>::exact) {
            auto num = boost::multiprecision::numerator(delta).convert_to<std::int64_t>();
            auto den = boost::multiprecision::denominator(delta).convert_to<std::int64_t>();
            *exact_holds = rational_pow(muA, den) >= rational_pow(muAd, num) * rational_pow(muK, den - num);
        } else {
            *exact_holds = to_double(muA) - rhs >= -1e-12;
        }
    }
    return to_double(muA) - rhs;
}

template <class T>
VerificationReport dilation_check(const ProbSequence<T>& mu, const std::set<std::int64_t>& A, IntegerInterval K,
                                  const Rational& delta, double tol = 1e-12) {
    if (!is_log_concave(mu.seq)) throw std::invalid_argument("dilation_check: mu must be log-concave");
    VerificationReport rep;
    rep.name = "dilation";
    rep.config = {{"delta", format_rational(delta)}, {"K", {K.lo, K.hi}}};
    bool exact = false;
    double slack = dilation_slack(mu, A, K, delta, &exact);
    json inst = {{"A", json::array()}, {"exact_holds", exact}};
    for (std::int64_t a : A) inst["A"].push_back(a);
    rep.record(slack, tol, inst);
    return rep;
}

// Psi(x) = (1-x)^delta - (1-x) on [0,1]; vanishes at both ends, nonnegative,
// and subadditive on partitions of [0,1].
inline double psi(double x, double delta) {
    if (!(x >= 0) || !(x <= 1)) throw std::domain_error("psi: x must lie in [0,1]");
    if (!(delta > 0) || !(delta < 1)) throw std::domain_error("psi: delta must lie in (0,1)");
    return std::pow(1.0 - x, delta) - (1.0 - x);
}

// ---------------------------------------------------------------------------
// Modulus of regularity and functional dilation
// ---------------------------------------------------------------------------

// sup over ordered pairs x != y of the fraction of the anchored interval
// between them where |f| drops to at most eps |f(x)|. Counts and lengths are
// integers, so the result is an exact rational once the comparisons are fixed;
// with T = Rational the comparisons are exact too.
template <class T>
Rational modulus_of_regularity(const std::vector<T>& f, IntegerInterval K, const Rational& eps) {
    if (!(eps > 0) || !(eps < 1)) throw std::domain_error("modulus_of_regularity: eps must lie in (0,1)");
    if (static_cast<std::int64_t>(f.size()) != K.length())
        throw std::invalid_argument("modulus_of_regularity: value count mismatch");
    const std::int64_t len = K.length();
    auto abs_val = [&](std::int64_t i) {
        T v = f[static_cast<size_t>(i)];
        return v < T(0) ? T(-v) : v;
    };

    Rational best = 0;
    std::vector<std::int64_t> prefix(static_cast<size_t>(len) + 1, 0);
    for (std::int64_t xi = 0; xi < len; ++xi) {
        // small[z] = 1 when |f(z)| <= eps |f(x)|
        for (std::int64_t zi = 0; zi < len; ++zi) {
            bool small;
            if constexpr (scalar_traits<T>::exact) {
                small = abs_val(zi) * boost::multiprecision::denominator(eps) <=
                        Rational(boost::multiprecision::numerator(eps)) * abs_val(xi);
            } else {
                small = to_double(abs_val(zi)) <= to_double(eps) * to_double(abs_val(xi));
            }
            prefix[static_cast<size_t>(zi) + 1] = prefix[static_cast<size_t>(zi)] + (small ? 1 : 0);
        }
        for (std::int64_t yi = 0; yi < len; ++yi) {
            if (yi == xi) continue;
            auto d = delta_interval(xi, yi);
            std::int64_t count = prefix[static_cast<size_t>(d->hi) + 1] - prefix[static_cast<size_t>(d->lo)];
            Rational ratio(count, d->length());
            if (ratio > best) best = ratio;
        }
    }
    return best;
}

// O(len^3) transcription of the definition; oracle for the prefix-count version.
template <class T>
Rational modulus_of_regularity_naive(const std::vector<T>& f, IntegerInterval K, const Rational& eps) {
    const std::int64_t len = K.length();
    auto abs_val = [&](std::int64_t i) {
        T v = f[static_cast<size_t>(i)];
        return v < T(0) ? T(-v) : v;
    };
    Rational best = 0;
    for (std::int64_t xi = 0; xi < len; ++xi)
        for (std::int64_t yi = 0; yi < len; ++yi) {
            if (xi == yi) continue;
            auto d = delta_interval(xi, yi);
            std::int64_t count = 0;
            for (std::int64_t zi = d->lo; zi <= d->hi; ++zi) {
                bool small;
                if constexpr (scalar_traits<T>::exact)
                    small = Rational(abs_val(zi)) <= eps * Rational(abs_val(xi));
                else
                    small = to_double(abs_val(zi)) <= to_double(eps) * to_double(abs_val(xi));
                if (small) ++count;
            }
            Rational ratio(count, d->length());
            if (ratio > best) best = ratio;
        }
    return best;
}

// mu(|f| > lambda eps) >= mu(|f| >= lambda)^{delta_f(eps)}; the superlevel-set
// strictness follows the inequality exactly, and an empty superlevel set uses
// the 0^delta := 0 convention.
inline VerificationReport functional_dilation_check(const ProbSequence<double>& mu, const std::vector<double>& f,
                                                    double lambda, const Rational& eps, double tol = 1e-12) {
    if (!is_log_concave(mu.seq)) throw std::invalid_argument("functional_dilation_check: mu must be log-concave");
    IntegerInterval K = mu.interval();
    if (static_cast<std::int64_t>(f.size()) != K.length())
        throw std::invalid_argument("functional_dilation_check: value count mismatch");
    if (!(lambda > 0)) throw std::invalid_argument("functional_dilation_check: lambda must be positive");

    Rational delta = modulus_of_regularity(f, K, eps);
    double d = to_double(delta);
    double le = lambda * to_double(eps);
    double mu_above = 0, mu_super = 0;
    bool super_nonempty = false;
    for (std::int64_t n = K.lo; n <= K.hi; ++n) {
        double av = std::fabs(f[static_cast<size_t>(n - K.lo)]);
        if (av > le) mu_above += mu(n);
        if (av >= lambda) {
            mu_super += mu(n);
            super_nonempty = true;
        }
    }
    double rhs = super_nonempty ? std::pow(mu_super, d) : 0.0;
    VerificationReport rep;
    rep.name = "functional-dilation";
    rep.config = {{"lambda", lambda}, {"eps", format_rational(eps)}, {"delta", format_rational(delta)}};
    rep.record(mu_above - rhs, tol, {{"mu_above", mu_above}, {"mu_super", mu_super}, {"delta", to_double(delta)}});
    return rep;
}

// ---------------------------------------------------------------------------
// Deviations
// ---------------------------------------------------------------------------

namespace detail {

// Distribution of |f| under mu as sorted (value, mass) pairs.
inline std::vector<std::pair<double, double>> abs_value_law(const ProbSequence<double>& mu,
                                                            const std::vector<double>& f) {
    std::map<double, double> m;
    IntegerInterval K = mu.interval();
    for (std::int64_t n = K.lo; n <= K.hi; ++n) m[std::fabs(f[static_cast<size_t>(n - K.lo)])] += mu(n);
    return {m.begin(), m.end()};
}

// Attained values that are valid medians of the law.
inline std::vector<double> valid_medians(const std::vector<std::pair<double, double>>& law) {
    std::vector<double> out;
    double below = 0;
    for (const auto& [v, w] : law) {
        double upto = below + w;
        double from = 1.0 - below;
        if (upto >= 0.5 && from >= 0.5) out.push_back(v);
        below = upto;
    }
    return out;
}

}  // namespace detail

// mu(|f| >= m t) <= 2^{-1/delta_f(1/t)} and
// mu(|f| <= m eps) <= 1 - 2^{-delta_f(eps)} <= delta_f(eps) log 2,
// checked for every valid median m of |f|. delta = 0 turns the large-deviation
// bound into 0, which forces the left side to vanish.
inline VerificationReport median_deviation_checks(const ProbSequence<double>& mu, const std::vector<double>& f,
                                                  const std::vector<Rational>& t_grid,
                                                  const std::vector<Rational>& eps_grid, double tol = 1e-12) {
    if (!is_log_concave(mu.seq)) throw std::invalid_argument("median_deviation_checks: mu must be log-concave");
    IntegerInterval K = mu.interval();
    if (static_cast<std::int64_t>(f.size()) != K.length())
        throw std::invalid_argument("median_deviation_checks: value count mismatch");

    auto law = detail::abs_value_law(mu, f);
    auto medians = detail::valid_medians(law);
    auto mass_ge = [&](double v) {
        double s = 0;
        for (const auto& [x, w] : law)
            if (x >= v) s += w;
        return s;
    };
    auto mass_le = [&](double v) {
        double s = 0;
        for (const auto& [x, w] : law)
            if (x <= v) s += w;
        return s;
    };

    VerificationReport rep;
    rep.name = "median-deviations";
    for (double m : medians) {
        for (const Rational& t : t_grid) {
            if (!(t > 1)) throw std::invalid_argument("median_deviation_checks: t must exceed 1");
            Rational delta = modulus_of_regularity(f, K, 1 / t);
            double lhs = mass_ge(m * to_double(t));
            double bound = delta == 0 ? 0.0 : std::pow(2.0, -1.0 / to_double(delta));
            rep.record(bound - lhs, tol,
                       {{"bound", "large"}, {"median", m}, {"t", format_rational(t)}, {"delta", to_double(delta)}});
        }
        for (const Rational& eps : eps_grid) {
            Rational delta = modulus_of_regularity(f, K, eps);
            double lhs = mass_le(m * to_double(eps));
            double mid = -std::expm1(-to_double(delta) * std::log(2.0));  // 1 - 2^{-delta}
            rep.record(mid - lhs, tol, {{"bound", "small"}, {"median", m}, {"eps", format_rational(eps)}});
            rep.record(to_double(delta) * std::log(2.0) - mid, tol,
                       {{"bound", "small-chain"}, {"eps", format_rational(eps)}});
        }
    }
    return rep;
}

// Bound formulas shared by the checkers and the transcription sanity tests.
inline double median_large_deviation_bound(double t) { return std::exp(-t * std::log(2.0) / 2.0); }
inline double median_small_deviation_bound(double eps) { return 2.0 * std::log(2.0) * eps; }
inline double median_rate_bound(double u, double med) {
    return std::exp(-u * std::log(2.0) / (2.0 * (1.0 + med)));
}
inline double mean_tail_bound(double t, double mean) { return std::exp(1.0 - 2.0 * t / (5.0 * (mean + 1.0))); }

// Identity-function deviation bounds:
//   P(X > Med t)   <= e^{-t ln2 / 2}         (support in N \ {0}),
//   P(X <= Med e)  <= 2 ln2 e                (support in N \ {0}),
//   P(X >= u)      <= e^{-u ln2 / (2(1+Med))} (support in N, u = Med t, t > 1).
// The rate bound fails below the median (a point mass at 10 has P(X >= 1) = 1
// while the bound is already < 1), so it is evaluated on u = Med t, the regime
// its derivation covers. Bounds are applied for every valid median where their
// support condition holds.
inline VerificationReport identity_deviation_checks(const ProbSequence<double>& mu, const std::vector<double>& t_grid,
                                                    const std::vector<double>& eps_grid, double tol = 1e-12) {
    if (!is_log_concave(mu.seq)) throw std::invalid_argument("identity_deviation_checks: mu must be log-concave");
    auto sb = mu.seq.support_bounds();
    if (!sb) throw std::invalid_argument("identity_deviation_checks: empty support");
    if (sb->lo < 0) throw std::invalid_argument("identity_deviation_checks: support must lie in the naturals");

    VerificationReport rep;
    rep.name = "identity-deviations";
    IntegerInterval med = mu.median_range();

    for (std::int64_t m = med.lo; m <= med.hi; ++m) {
        if (sb->lo >= 1) {
            for (double t : t_grid) {
                if (!(t > 1)) continue;
                double lhs = mu.tail(static_cast<double>(m) * t);
                rep.record(median_large_deviation_bound(t) - lhs, tol,
                           {{"bound", "median-large"}, {"t", t}, {"median", m}});
            }
            for (double e : eps_grid) {
                if (!(e > 0) || !(e < 1)) continue;
                double lhs = to_double(mu.cdf(static_cast<std::int64_t>(std::floor(static_cast<double>(m) * e))));
                rep.record(median_small_deviation_bound(e) - lhs, tol,
                           {{"bound", "median-small"}, {"eps", e}, {"median", m}});
            }
        }
        for (double t : t_grid) {
            if (!(t > 1)) continue;
            double u = static_cast<double>(m) * t;
            double lhs = mu.upper_tail(u);
            double bound = median_rate_bound(u, static_cast<double>(m));
            rep.record(bound - lhs, tol, {{"bound", "median-rate"}, {"u", u}, {"median", m}});
        }
    }
    return rep;
}

// P(X > t) <= e * e^{-2t / (5 (E[X]+1))} for log-concave X on the naturals.
inline VerificationReport mean_deviation_check(const ProbSequence<double>& mu, const std::vector<double>& t_grid,
                                               double tol = 1e-12) {
    if (!is_log_concave(mu.seq)) throw std::invalid_argument("mean_deviation_check: mu must be log-concave");
    auto sb = mu.seq.support_bounds();
    if (sb && sb->lo < 0) throw std::invalid_argument("mean_deviation_check: support must lie in the naturals");
    VerificationReport rep;
    rep.name = "mean-deviation";
    double c = mu.mean();
    for (double t : t_grid) {
        if (!(t >= 0)) continue;
        rep.record(mean_tail_bound(t, c) - mu.tail(t), tol, {{"t", t}, {"mean", c}});
    }
    return rep;
}

// E[X^s]^{1/s} <= 5 s (s e)^{1/s} (E[X^r]^{1/r} + 1) / 2 for 1 <= r <= s.
inline VerificationReport reverse_jensen_check(const ProbSequence<double>& mu, double r, double s,
                                               double tol = 1e-12) {
    if (!(r >= 1) || !(s >= r)) throw std::invalid_argument("reverse_jensen_check: need 1 <= r <= s");
    if (!is_log_concave(mu.seq)) throw std::invalid_argument("reverse_jensen_check: mu must be log-concave");
    auto sb = mu.seq.support_bounds();
    if (sb && sb->lo < 0) throw std::invalid_argument("reverse_jensen_check: support must lie in the naturals");
    VerificationReport rep;
    rep.name = "reverse-jensen";
    rep.config = {{"r", r}, {"s", s}};
    double lhs = std::pow(mu.moment(s), 1.0 / s);
    double rhs = 5.0 * s * std::pow(s * std::exp(1.0), 1.0 / s) * (std::pow(mu.moment(r), 1.0 / r) + 1.0) / 2.0;
    rep.record(rhs - lhs, tol, {{"lhs", lhs}, {"rhs", rhs}});
    return rep;
}

}  // namespace lcdk::verify
