#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcdk/interval.hpp"
#include "lcdk/log_affine.hpp"
#include "lcdk/predicates.hpp"
#include "lcdk/random.hpp"
#include "lcdk/reference.hpp"
#include "lcdk/report.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk::loc {

// h on the full working interval; the feasible class is E[h(X)] >= 0.
struct LinearConstraint {
    IntegerInterval domain;
    std::vector<double> h;

    LinearConstraint(IntegerInterval d, std::vector<double> values) : domain(d), h(std::move(values)) {
        if (static_cast<std::int64_t>(h.size()) != domain.length())
            throw std::invalid_argument("LinearConstraint: value count does not match domain");
    }

    double at(std::int64_t n) const {
        if (!domain.contains(n)) throw std::out_of_range("LinearConstraint::at");
        return h[static_cast<size_t>(n - domain.lo)];
    }

    // E[X] <= c encoded as h(n) = c - n.
    static LinearConstraint mean_at_most(double c, IntegerInterval d) {
        std::vector<double> v(d.length());
        for (std::int64_t n = d.lo; n <= d.hi; ++n) v[static_cast<size_t>(n - d.lo)] = c - static_cast<double>(n);
        return LinearConstraint(d, std::move(v));
    }

    static LinearConstraint vacuous(IntegerInterval d) {
        return LinearConstraint(d, std::vector<double>(d.length(), 0.0));
    }

    double expectation(const ProbSequence<double>& mu) const {
        double s = 0;
        for (std::int64_t n = mu.interval().lo; n <= mu.interval().hi; ++n) s += at(n) * mu(n);
        return s;
    }
};

// Convexity is the caller's contract; the engine spot-checks it on random
// mixtures and records violations rather than failing.
struct ConvexFunctional {
    std::function<double(const ProbSequence<double>&)> eval;
    bool declared_convex = true;
    std::string name = "functional";

    static ConvexFunctional tail(double t) {
        return {[t](const ProbSequence<double>& mu) { return mu.tail(t); }, true, "tail>" + std::to_string(t)};
    }
    static ConvexFunctional upper_tail(double t) {
        return {[t](const ProbSequence<double>& mu) { return mu.upper_tail(t); }, true, "tail>=" + std::to_string(t)};
    }
    static ConvexFunctional moment(double r) {
        return {[r](const ProbSequence<double>& mu) { return mu.moment(r); }, true, "moment:" + std::to_string(r)};
    }
    // E[g(X)] for a value table on the working interval.
    static ConvexFunctional expectation_table(IntegerInterval d, std::vector<double> g) {
        LinearConstraint tbl(d, std::move(g));
        return {[tbl](const ProbSequence<double>& mu) { return tbl.expectation(mu); }, true, "table"};
    }
};

struct GridSpec {
    int points = 512;
    double log_p_min = -40.0;
    double log_p_max = 40.0;
    double root_tolerance = 1e-12;
};

enum class CandidateKind { PointMass, GridFeasible, ConstraintRoot };

struct Candidate {
    LogAffineSpec spec;
    ProbSequence<double> pmf;
    double constraint_value = 0;
    CandidateKind kind = CandidateKind::GridFeasible;
};

namespace detail {

// E_p[h] over the normalized log-affine law on [k, l], shifted exponents.
inline double constraint_expectation(double log_p, IntegerInterval supp, const ReferenceMeasure<double>& gamma,
                                     const LinearConstraint& h) {
    double top = -1e300;
    const std::int64_t len = supp.length();
    std::vector<double> le(static_cast<size_t>(len));
    for (std::int64_t n = supp.lo; n <= supp.hi; ++n) {
        double v = static_cast<double>(n - supp.lo) * log_p + std::log(gamma.at(n));
        le[static_cast<size_t>(n - supp.lo)] = v;
        top = std::max(top, v);
    }
    double num = 0, den = 0;
    for (std::int64_t n = supp.lo; n <= supp.hi; ++n) {
        double w = std::exp(le[static_cast<size_t>(n - supp.lo)] - top);
        num += h.at(n) * w;
        den += w;
    }
    return num / den;
}

}  // namespace detail

// Log-affine candidates over every support pair [k, l] in [M, N]:
//   - point masses at k with h(k) >= 0,
//   - grid points with E_p[h] >= 0 (the constraint may be slack at a maximizer
//     of the unconstrained class),
//   - roots of p -> E_p[h] located by sign scanning plus bisection.
// Every candidate satisfies E[h] >= -root_tolerance. Enumeration order is
// deterministic: k, then l, then log p ascending.
inline std::vector<Candidate> enumerate_extremal_candidates(const LinearConstraint& h, std::int64_t M, std::int64_t N,
                                                            const ReferenceMeasure<double>& gamma,
                                                            const GridSpec& grid = {}) {
    if (M > N) throw std::invalid_argument("enumerate_extremal_candidates: M > N");
    IntegerInterval domain{M, N};
    if (!gamma.support.contains(domain))
        throw std::invalid_argument("enumerate_extremal_candidates: interval outside reference window");
    if (h.domain != domain) throw std::invalid_argument("enumerate_extremal_candidates: constraint domain mismatch");
    if (grid.points < 2) throw std::invalid_argument("enumerate_extremal_candidates: grid needs >= 2 points");

    std::vector<Candidate> out;
    std::vector<double> s_grid(static_cast<size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i)
        s_grid[static_cast<size_t>(i)] =
            grid.log_p_min + (grid.log_p_max - grid.log_p_min) * static_cast<double>(i) / (grid.points - 1);

    for (std::int64_t k = M; k <= N; ++k) {
        if (h.at(k) >= 0) {
            Candidate c{LogAffineSpec{0.0, k, k, 0.0}, ProbSequence<double>(Sequence<double>::point_mass(k)),
                        h.at(k), CandidateKind::PointMass};
            c.spec.log_C = -std::log(gamma.at(k));
            out.push_back(std::move(c));
        }
        for (std::int64_t l = k + 1; l <= N; ++l) {
            IntegerInterval supp{k, l};
            auto phi = [&](double s) { return detail::constraint_expectation(s, supp, gamma, h); };

            std::vector<double> vals(s_grid.size());
            for (size_t i = 0; i < s_grid.size(); ++i) vals[i] = phi(s_grid[i]);

            auto push = [&](double s, double eh, CandidateKind kind) {
                LogAffineSpec spec;
                ProbSequence<double> pmf = log_affine_pmf(s, supp, gamma, &spec);
                out.push_back(Candidate{spec, std::move(pmf), eh, kind});
            };

            for (size_t i = 0; i < s_grid.size(); ++i) {
                if (vals[i] >= 0) push(s_grid[i], vals[i], CandidateKind::GridFeasible);
                if (i + 1 < s_grid.size() && vals[i] * vals[i + 1] < 0) {
                    double a = s_grid[i], b = s_grid[i + 1];
                    double fa = vals[i];
                    double s_root = (a + b) / 2, f_root = phi(s_root);
                    for (int it = 0; it < 200 && std::fabs(f_root) > grid.root_tolerance; ++it) {
                        if ((fa < 0) == (f_root < 0)) {
                            a = s_root;
                            fa = f_root;
                        } else {
                            b = s_root;
                        }
                        s_root = (a + b) / 2;
                        f_root = phi(s_root);
                    }
                    if (f_root < -grid.root_tolerance) {
                        // fall back to the bracket end on the feasible side
                        s_root = (fa >= 0) ? a : b;
                        f_root = phi(s_root);
                    }
                    push(s_root, f_root, CandidateKind::ConstraintRoot);
                }
            }
        }
    }
    return out;
}

struct ExtremalSearchResult {
    double best_value;
    Candidate best;
    double constraint_value;
    std::int64_t candidates_examined;
    int convexity_violations;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline ProbSequence<double> mix(const ProbSequence<double>& a, const ProbSequence<double>& b, double lambda) {
    IntegerInterval itv = hull(a.interval(), b.interval());
    std::vector<double> v(itv.length());
    for (std::int64_t n = itv.lo; n <= itv.hi; ++n)
        v[static_cast<size_t>(n - itv.lo)] = lambda * a(n) + (1.0 - lambda) * b(n);
    return ProbSequence<double>(Sequence<double>(itv, std::move(v)));
}

inline int spot_check_convexity(const ConvexFunctional& phi, IntegerInterval domain,
                                const ReferenceMeasure<double>& gamma, std::uint64_t seed, int triples) {
    Rng rng(seed);
    int violations = 0;
    for (int i = 0; i < triples; ++i) {
        auto mu = random_log_concave(rng, domain, gamma);
        auto nu = random_log_concave(rng, domain, gamma);
        double lambda = draw_u01(rng);
        double lhs = phi.eval(mix(mu, nu, lambda));
        double rhs = lambda * phi.eval(mu) + (1.0 - lambda) * phi.eval(nu);
        if (lhs > rhs + 1e-9 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)})) ++violations;
    }
    return violations;
}

}  // namespace detail

// Maximum of a convex functional over the log-affine candidate family. This
// upper-bounds the supremum over the full constrained log-concave class up to
// grid and root tolerances. Ties keep the first candidate in enumeration order.
inline ExtremalSearchResult maximize_convex(const ConvexFunctional& phi, const LinearConstraint& h, std::int64_t M,
                                            std::int64_t N, const ReferenceMeasure<double>& gamma,
                                            const GridSpec& grid = {}, std::uint64_t spot_check_seed = kDefaultSeed,
                                            int spot_check_triples = 16) {
    auto candidates = enumerate_extremal_candidates(h, M, N, gamma, grid);
    if (candidates.empty()) throw InfeasibleError("maximize_convex: constraint admits no log-affine candidate");

    ExtremalSearchResult result{-std::numeric_limits<double>::infinity(), candidates.front(), 0,
                                static_cast<std::int64_t>(candidates.size()), 0};
    for (const Candidate& c : candidates) {
        double v = phi.eval(c.pmf);
        if (v > result.best_value) {
            result.best_value = v;
            result.best = c;
        }
    }
    result.constraint_value = result.best.constraint_value;
    if (spot_check_triples > 0)
        result.convexity_violations =
            detail::spot_check_convexity(phi, IntegerInterval{M, N}, gamma, spot_check_seed, spot_check_triples);
    return result;
}

struct BruteForceResult {
    double value = -std::numeric_limits<double>::infinity();
    std::int64_t feasible = 0;
    std::int64_t samples = 0;
};

// Monte Carlo lower bound: max of phi over random feasible log-concave laws.
// Deterministic for a fixed seed. value is -inf when nothing was feasible.
inline BruteForceResult brute_force_max(const ConvexFunctional& phi, const LinearConstraint& h, std::int64_t M,
                                        std::int64_t N, const ReferenceMeasure<double>& gamma, std::int64_t samples,
                                        std::uint64_t seed) {
    IntegerInterval domain{M, N};
    if (!gamma.support.contains(domain))
        throw std::invalid_argument("brute_force_max: interval outside reference window");
    Rng rng(seed);
    BruteForceResult r;
    r.samples = samples;
    for (std::int64_t i = 0; i < samples; ++i) {
        auto mu = random_log_concave(rng, domain, gamma);
        if (h.expectation(mu) < 0) continue;
        ++r.feasible;
        r.value = std::max(r.value, phi.eval(mu));
    }
    return r;
}

// Partial sums x -> sum_{n=M}^{x} h(n) p(n). A certificate for extremal
// witnesses: over their support the profile never strictly changes sign.
inline std::vector<double> lambda_profile(const ProbSequence<double>& mu, const LinearConstraint& h) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(mu.interval().length()));
    double acc = 0;
    for (std::int64_t n = mu.interval().lo; n <= mu.interval().hi; ++n) {
        acc += h.at(n) * mu(n);
        out.push_back(acc);
    }
    return out;
}

inline bool lambda_profile_sign_constant(const std::vector<double>& profile, double tol = 1e-9) {
    bool pos = false, neg = false;
    for (double v : profile) {
        if (v > tol) pos = true;
        if (v < -tol) neg = true;
    }
    return !(pos && neg);
}

// If sum f * nu >= 0 and sum g * nu >= 0 for every log-affine nu on the grid,
// the same must hold for random log-concave laws; a counterexample would
// falsify the implementation. When the grid itself contains a violator the
// implication is vacuous, which the report notes.
inline verify::VerificationReport two_constraint_localization_check(const LinearConstraint& f,
                                                                    const LinearConstraint& g, std::int64_t M,
                                                                    std::int64_t N,
                                                                    const ReferenceMeasure<double>& gamma,
                                                                    std::int64_t trials,
                                                                    std::uint64_t seed = kDefaultSeed,
                                                                    const GridSpec& grid = {}, double tol = 1e-9) {
    verify::VerificationReport rep;
    rep.name = "two-constraint-localization";
    rep.config = {{"M", M}, {"N", N}, {"trials", trials}, {"seed", seed}, {"grid_points", grid.points}};

    bool grid_hypothesis = true;
    double grid_worst = std::numeric_limits<double>::infinity();
    auto candidates = enumerate_extremal_candidates(LinearConstraint::vacuous({M, N}), M, N, gamma, grid);
    for (const Candidate& c : candidates) {
        double ef = f.expectation(c.pmf), eg = g.expectation(c.pmf);
        grid_worst = std::min(grid_worst, std::min(ef, eg));
        if (ef < -tol || eg < -tol) grid_hypothesis = false;
    }
    rep.details = {{"grid_hypothesis_holds", grid_hypothesis},
                   {"grid_candidates", candidates.size()},
                   {"grid_worst", grid_worst}};
    if (!grid_hypothesis) return rep;  // vacuous: nothing to verify on samples

    Rng rng(seed);
    for (std::int64_t i = 0; i < trials; ++i) {
        auto mu = random_log_concave(rng, IntegerInterval{M, N}, gamma);
        double slack = std::min(f.expectation(mu), g.expectation(mu));
        verify::json inst = {{"trial", i}, {"support", {mu.interval().lo, mu.interval().hi}}};
        rep.record(slack, tol, inst);
    }
    return rep;
}

// The tail functional P(X >= t) under E[X] <= c is maximized by a law whose
// support starts at the left end of the window. Verifies that on the witness.
inline bool tail_extremizer_shape_check(double c, double t, std::int64_t M, std::int64_t N,
                                        const ReferenceMeasure<double>& gamma, const GridSpec& grid = {},
                                        ExtremalSearchResult* result_out = nullptr) {
    if (!(static_cast<double>(M) <= c) || !(c < t))
        throw std::invalid_argument("tail_extremizer_shape_check: need M <= c < t");
    auto h = LinearConstraint::mean_at_most(c, {M, N});
    auto result = maximize_convex(ConvexFunctional::upper_tail(t), h, M, N, gamma, grid, kDefaultSeed, 0);
    bool ok = result.best.spec.k == M;
    if (result_out) *result_out = result;
    return ok;
}

}  // namespace lcdk::loc
