#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "lcdk/rational.hpp"

namespace lcdk::geom {

// Truncated geometric family: p.m.f. proportional to p^n on [k, l].
// p == 1 is the uniform case and is handled as a first-class value.
template <class T>
struct TruncGeom {
    T p;
    std::int64_t k;
    std::int64_t l;

    TruncGeom(T p_, std::int64_t k_, std::int64_t l_) : p(p_), k(k_), l(l_) {
        if (!(p > T(0))) throw std::invalid_argument("TruncGeom: ratio must be positive");
        if (k > l) throw std::invalid_argument("TruncGeom: k > l");
    }
};

namespace detail {

// Float paths go through log1p/expm1 so quantities near p = 1 and long
// supports keep full relative precision and nothing overflows below
// exponent ~700.
inline double log_ratio(double p) { return std::log1p(p - 1.0); }

}  // namespace detail

// C with sum_{n=k}^{l} C p^n = 1.
inline double normalizing_constant(const TruncGeom<double>& g) {
    if (g.p == 1.0) return 1.0 / static_cast<double>(g.l - g.k + 1);
    const double m = static_cast<double>(g.l - g.k + 1);
    const double lp = detail::log_ratio(g.p);
    if (lp > 0)
        return std::exp((-static_cast<double>(g.k) - m) * lp) * (g.p - 1.0) / (-std::expm1(-m * lp));
    return std::exp(-static_cast<double>(g.k) * lp) * (1.0 - g.p) / (-std::expm1(m * lp));
}

inline Rational normalizing_constant(const TruncGeom<Rational>& g) {
    if (g.p == 1) return Rational(1, g.l - g.k + 1);
    Rational sum = 0, pw = rational_pow(g.p, g.k);
    for (std::int64_t n = g.k; n <= g.l; ++n) {
        sum += pw;
        pw *= g.p;
    }
    return 1 / sum;
}

// sum_{n=0}^{N} n p^n = p (1 - p^{N+1}) / (1-p)^2 - (N+1) p^{N+1} / (1-p).
// Undefined at p = 1 (callers use N(N+1)/2 there).
inline double partial_weighted_sum(double p, std::int64_t N) {
    if (!(p > 0)) throw std::invalid_argument("partial_weighted_sum: p must be positive");
    if (p == 1.0) throw std::domain_error("partial_weighted_sum: p = 1 is excluded");
    if (N < 0) throw std::invalid_argument("partial_weighted_sum: N must be >= 0");
    const double lp = detail::log_ratio(p);
    const double u = std::expm1((static_cast<double>(N) + 1.0) * lp);  // p^{N+1} - 1
    const double q = 1.0 - p;
    return -p * u / (q * q) - (static_cast<double>(N) + 1.0) * (u + 1.0) / q;
}

inline Rational partial_weighted_sum(const Rational& p, std::int64_t N) {
    if (!(p > 0)) throw std::invalid_argument("partial_weighted_sum: p must be positive");
    if (p == 1) throw std::domain_error("partial_weighted_sum: p = 1 is excluded");
    if (N < 0) throw std::invalid_argument("partial_weighted_sum: N must be >= 0");
    Rational pN1 = rational_pow(p, N + 1);
    Rational q = 1 - p;
    return p * (1 - pN1) / (q * q) - Rational(N + 1) * pN1 / q;
}

// E[X] = k + p/(1-p) - (l-k+1) p^{l-k+1} / (1 - p^{l-k+1}); k + (l-k)/2 at p = 1.
inline double trunc_geom_mean(const TruncGeom<double>& g) {
    const double kd = static_cast<double>(g.k);
    if (g.p == 1.0) return kd + static_cast<double>(g.l - g.k) / 2.0;
    const double m = static_cast<double>(g.l - g.k + 1);
    const double lp = detail::log_ratio(g.p);
    // The closed form subtracts two terms of size ~1/|log p|, which loses
    // precision near p = 1; direct summation is exact enough there and costs O(m).
    if (std::fabs(lp) < 1e-3) {
        double num = 0, den = 0;
        for (std::int64_t j = 0; j <= g.l - g.k; ++j) {
            double w = std::exp(static_cast<double>(j) * lp);
            num += static_cast<double>(j) * w;
            den += w;
        }
        return kd + num / den;
    }
    if (lp > 0) return kd + g.p / (1.0 - g.p) + m / (-std::expm1(-m * lp));
    const double u = std::expm1(m * lp);  // p^m - 1
    return kd + g.p / (1.0 - g.p) + m * (u + 1.0) / u;
}

inline Rational trunc_geom_mean(const TruncGeom<Rational>& g) {
    if (g.p == 1) return Rational(g.k) + Rational(g.l - g.k, 2);
    std::int64_t m = g.l - g.k + 1;
    Rational pm = rational_pow(g.p, m);
    return Rational(g.k) + g.p / (1 - g.p) - Rational(m) * pm / (1 - pm);
}

// P(X > t): 1 below the support, 0 from l on, and otherwise
// p^{floor(t)+1-k} (1 - p^{l-floor(t)}) / (1 - p^{l-k+1}).
inline double trunc_geom_tail(const TruncGeom<double>& g, double t) {
    if (t < static_cast<double>(g.k)) return 1.0;
    if (t >= static_cast<double>(g.l)) return 0.0;
    const auto j = static_cast<std::int64_t>(std::floor(t));
    const double m = static_cast<double>(g.l - g.k + 1);
    if (g.p == 1.0) return static_cast<double>(g.l - j) / m;
    const double lp = detail::log_ratio(g.p);
    const double b = static_cast<double>(g.l - j);
    if (lp > 0) return std::expm1(-b * lp) / std::expm1(-m * lp);
    return std::exp(static_cast<double>(j + 1 - g.k) * lp) * std::expm1(b * lp) / std::expm1(m * lp);
}

inline Rational trunc_geom_tail(const TruncGeom<Rational>& g, double t) {
    if (t < static_cast<double>(g.k)) return 1;
    if (t >= static_cast<double>(g.l)) return 0;
    const auto j = static_cast<std::int64_t>(std::floor(t));
    if (g.p == 1) return Rational(g.l - j, g.l - g.k + 1);
    Rational pb = rational_pow(g.p, g.l - j);
    Rational pm = rational_pow(g.p, g.l - g.k + 1);
    return rational_pow(g.p, j + 1 - g.k) * (1 - pb) / (1 - pm);
}

enum class SolveDegeneracy { None, PointMassAtK, PointMassAtL };

struct SolveResult {
    double p = 1.0;
    SolveDegeneracy degeneracy = SolveDegeneracy::None;
};

// Inverts the mean over p by bisection on log p in [-60, 60]; the mean is a
// nondecreasing function of p. c must lie in [k, l]; hitting an endpoint is a
// point mass and is reported as such.
inline SolveResult solve_p_for_mean(std::int64_t k, std::int64_t l, double c) {
    if (k > l) throw std::invalid_argument("solve_p_for_mean: k > l");
    const double kd = static_cast<double>(k), ld = static_cast<double>(l);
    if (c < kd || c > ld) throw std::domain_error("solve_p_for_mean: target mean outside [k, l]");
    if (c == kd && k != l) return {0.0, SolveDegeneracy::PointMassAtK};
    if (c == ld && k != l) return {std::numeric_limits<double>::infinity(), SolveDegeneracy::PointMassAtL};
    if (k == l) return {1.0, SolveDegeneracy::None};
    if (c == (kd + ld) / 2.0) return {1.0, SolveDegeneracy::None};

    const double tol = 1e-12 * std::max(1.0, std::fabs(c));
    double slo = -60.0, shi = 60.0;
    double best_s = 0.0, best_err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
        double s = (slo + shi) / 2.0;
        double m = trunc_geom_mean(TruncGeom<double>(std::exp(s), k, l));
        double err = std::fabs(m - c);
        if (err < best_err) {
            best_err = err;
            best_s = s;
        }
        if (err <= tol) break;
        (m < c ? slo : shi) = s;
    }
    return {std::exp(best_s), SolveDegeneracy::None};
}

}  // namespace lcdk::geom
