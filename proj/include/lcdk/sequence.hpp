#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lcdk/interval.hpp"
#include "lcdk/rational.hpp"

namespace lcdk {

// Nonnegative values on a closed integer interval, one per lattice point.
// T is the scalar backend: Rational (exact) or double.
template <class T>
struct Sequence {
    IntegerInterval interval;
    std::vector<T> values;

    Sequence(IntegerInterval itv, std::vector<T> vals) : interval(itv), values(std::move(vals)) {
        if (static_cast<std::int64_t>(values.size()) != interval.length())
            throw std::invalid_argument("Sequence: value count does not match interval length");
        for (const T& v : values)
            if (v < T(0)) throw std::invalid_argument("Sequence: negative value");
    }

    static Sequence zero(IntegerInterval itv) { return Sequence(itv, std::vector<T>(itv.length(), T(0))); }

    static Sequence indicator(IntegerInterval itv) { return Sequence(itv, std::vector<T>(itv.length(), T(1))); }

    static Sequence point_mass(std::int64_t n) { return Sequence({n, n}, {T(1)}); }

    const T& at(std::int64_t n) const {
        if (!interval.contains(n)) throw std::out_of_range("Sequence::at: index outside interval");
        return values[static_cast<size_t>(n - interval.lo)];
    }

    // Value at n, zero outside the interval.
    T operator()(std::int64_t n) const {
        return interval.contains(n) ? values[static_cast<size_t>(n - interval.lo)] : T(0);
    }

    T total_mass() const {
        T s(0);
        for (const T& v : values) s += v;
        return s;
    }

    // Smallest and largest index with a positive value, or nullopt for the zero sequence.
    std::optional<IntegerInterval> support_bounds() const {
        std::int64_t lo = 0, hi = -1;
        bool found = false;
        for (std::int64_t n = interval.lo; n <= interval.hi; ++n) {
            if ((*this)(n) > T(0)) {
                if (!found) lo = n;
                hi = n;
                found = true;
            }
        }
        if (!found) return std::nullopt;
        return IntegerInterval{lo, hi};
    }

    bool has_contiguous_support() const {
        auto sb = support_bounds();
        if (!sb) return true;  // empty support counts as contiguous
        for (std::int64_t n = sb->lo; n <= sb->hi; ++n)
            if (!((*this)(n) > T(0))) return false;
        return true;
    }

    Sequence extended_to(IntegerInterval itv) const {
        if (!itv.contains(interval)) throw std::invalid_argument("Sequence::extended_to: target does not cover interval");
        std::vector<T> vals(itv.length(), T(0));
        for (std::int64_t n = interval.lo; n <= interval.hi; ++n)
            vals[static_cast<size_t>(n - itv.lo)] = at(n);
        return Sequence(itv, std::move(vals));
    }

    bool operator==(const Sequence&) const = default;
};

template <class T>
Sequence<T> pointwise_min(const Sequence<T>& f, const Sequence<T>& g) {
    IntegerInterval itv = hull(f.interval, g.interval);
    std::vector<T> vals(itv.length());
    for (std::int64_t n = itv.lo; n <= itv.hi; ++n)
        vals[static_cast<size_t>(n - itv.lo)] = std::min(f(n), g(n));
    return Sequence<T>(itv, std::move(vals));
}

// max(0, f - g), on the hull of the two intervals.
template <class T>
Sequence<T> positive_part_diff(const Sequence<T>& f, const Sequence<T>& g) {
    IntegerInterval itv = hull(f.interval, g.interval);
    std::vector<T> vals(itv.length());
    for (std::int64_t n = itv.lo; n <= itv.hi; ++n) {
        T d = f(n) - g(n);
        vals[static_cast<size_t>(n - itv.lo)] = d > T(0) ? d : T(0);
    }
    return Sequence<T>(itv, std::move(vals));
}

// (f*g)(n) = sum_k f(k) g(n-k) on [lo_f+lo_g, hi_f+hi_g]. Total mass multiplies.
template <class T>
Sequence<T> convolve(const Sequence<T>& f, const Sequence<T>& g) {
    IntegerInterval itv{f.interval.lo + g.interval.lo, f.interval.hi + g.interval.hi};
    std::vector<T> vals(itv.length(), T(0));
    for (std::int64_t i = f.interval.lo; i <= f.interval.hi; ++i) {
        const T& fi = f.at(i);
        if (fi == T(0)) continue;
        for (std::int64_t j = g.interval.lo; j <= g.interval.hi; ++j)
            vals[static_cast<size_t>(i + j - itv.lo)] += fi * g.at(j);
    }
    return Sequence<T>(itv, std::move(vals));
}

// Probability mass function: a Sequence whose values sum to one
// (exactly on the rational backend, within tolerance on the float backend).
template <class T>
struct ProbSequence {
    Sequence<T> seq;

    explicit ProbSequence(Sequence<T> s) : seq(std::move(s)) {
        T total = seq.total_mass();
        if constexpr (scalar_traits<T>::exact) {
            if (total != T(1)) throw std::invalid_argument("ProbSequence: mass is not exactly 1");
        } else {
            if (std::fabs(to_double(total) - 1.0) > 1e-9)
                throw std::invalid_argument("ProbSequence: mass differs from 1 beyond tolerance");
        }
    }

    const IntegerInterval& interval() const { return seq.interval; }
    T operator()(std::int64_t n) const { return seq(n); }

    T mean() const {
        T s(0);
        for (std::int64_t n = seq.interval.lo; n <= seq.interval.hi; ++n) s += T(n) * seq.at(n);
        return s;
    }

    // E[X^r]. Non-integer r requires nonnegative support; the rational backend
    // only supports integer r.
    T moment(double r) const {
        if (r < 1) throw std::domain_error("moment: order must be >= 1");
        bool integral = (r == std::floor(r)) && r < 1e9;
        auto support = seq.support_bounds();
        std::int64_t min_support = support ? support->lo : 0;
        if (!integral && min_support < 0)
            throw std::domain_error("moment: non-integer order requires nonnegative support");
        if constexpr (scalar_traits<T>::exact) {
            if (!integral) throw std::domain_error("moment: non-integer order unsupported on the exact backend");
            T s(0);
            auto e = static_cast<std::int64_t>(r);
            for (std::int64_t n = seq.interval.lo; n <= seq.interval.hi; ++n)
                s += rational_pow(Rational(n), e) * seq.at(n);
            return s;
        } else {
            double s = 0;
            for (std::int64_t n = seq.interval.lo; n <= seq.interval.hi; ++n)
                s += std::pow(static_cast<double>(n), r) * seq.at(n);
            return s;
        }
    }

    // P(X > t).
    T tail(double t) const {
        T s(0);
        for (std::int64_t n = seq.interval.lo; n <= seq.interval.hi; ++n)
            if (static_cast<double>(n) > t) s += seq.at(n);
        return s;
    }

    // P(X >= t).
    T upper_tail(double t) const {
        T s(0);
        for (std::int64_t n = seq.interval.lo; n <= seq.interval.hi; ++n)
            if (static_cast<double>(n) >= t) s += seq.at(n);
        return s;
    }

    T cdf(std::int64_t m) const {
        T s(0);
        for (std::int64_t n = seq.interval.lo; n <= std::min(m, seq.interval.hi); ++n) s += seq.at(n);
        return s;
    }

    // Smallest m with P(X <= m) >= 1/2 and P(X >= m) >= 1/2.
    std::int64_t median() const { return median_range().lo; }

    // All valid medians form an interval: P(X <= m) >= 1/2 is upward closed in m
    // and P(X >= m) >= 1/2 is downward closed.
    IntegerInterval median_range() const {
        const T half = T(1) / T(2);
        std::int64_t lo = seq.interval.hi + 1, hi = seq.interval.lo - 1;
        T below(0);
        for (std::int64_t m = seq.interval.lo; m <= seq.interval.hi; ++m) {
            T upto = below + seq.at(m);        // P(X <= m)
            T from = T(1) - below;             // P(X >= m)
            if (upto >= half && from >= half) {
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            below = upto;
        }
        if (lo > hi) throw std::logic_error("median_range: no valid median found");
        return {lo, hi};
    }
};

template <class T>
ProbSequence<T> normalize(const Sequence<T>& f) {
    T total = f.total_mass();
    if (!(total > T(0))) throw std::domain_error("normalize: zero total mass");
    std::vector<T> vals(f.values);
    for (T& v : vals) v = v / total;
    return ProbSequence<T>(Sequence<T>(f.interval, std::move(vals)));
}

}  // namespace lcdk
