#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcdk/interval.hpp"
#include "lcdk/rational.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk {

// Positive reference mass q on a contiguous window. Log-concavity of f relative
// to the reference only uses ratios q(n)^2 / (q(n-1) q(n+1)), so masses are kept
// up to an arbitrary positive constant (the float backend rescales for range).
template <class T>
struct ReferenceMeasure {
    enum class Kind { Counting, Poisson, Binomial, QGauss, Custom };

    Kind kind = Kind::Counting;
    IntegerInterval support{0, 0};
    Rational param = 0;      // Poisson lambda / QGauss q
    std::int64_t order = 0;  // Binomial m
    std::vector<T> mass;

    const T& at(std::int64_t n) const {
        if (!support.contains(n)) throw std::out_of_range("ReferenceMeasure::at: outside support");
        return mass[static_cast<size_t>(n - support.lo)];
    }

    // Float masses would violate positivity if the window's dynamic range
    // exceeds the exponent budget (~e^709 after the shift).
    void require_positive_mass() const {
        for (const T& v : mass)
            if (!(v > T(0)))
                throw std::invalid_argument(
                    "ReferenceMeasure: window too wide for the float backend; use the rational backend");
    }

    static ReferenceMeasure counting(IntegerInterval itv) {
        ReferenceMeasure r;
        r.kind = Kind::Counting;
        r.support = itv;
        r.mass.assign(itv.length(), T(1));
        return r;
    }

    // Truncated Poisson window: mass proportional to lambda^n / n!.
    static ReferenceMeasure poisson(const Rational& lambda, IntegerInterval itv) {
        if (lambda <= 0) throw std::invalid_argument("ReferenceMeasure::poisson: lambda must be positive");
        if (itv.lo < 0) throw std::invalid_argument("ReferenceMeasure::poisson: support must lie in the naturals");
        ReferenceMeasure r;
        r.kind = Kind::Poisson;
        r.support = itv;
        r.param = lambda;
        if constexpr (scalar_traits<T>::exact) {
            Rational fact = 1;
            for (std::int64_t i = 2; i <= itv.lo; ++i) fact *= i;
            Rational m = rational_pow(lambda, itv.lo) / fact;
            for (std::int64_t n = itv.lo; n <= itv.hi; ++n) {
                r.mass.push_back(m);
                m = m * lambda / Rational(n + 1);
            }
        } else {
            double ll = std::log(to_double(lambda));
            std::vector<double> le(itv.length());
            double top = -1e300;
            for (std::int64_t n = itv.lo; n <= itv.hi; ++n) {
                double v = static_cast<double>(n) * ll - std::lgamma(static_cast<double>(n) + 1.0);
                le[static_cast<size_t>(n - itv.lo)] = v;
                top = std::max(top, v);
            }
            for (double v : le) r.mass.push_back(std::exp(v - top));
            r.require_positive_mass();
        }
        return r;
    }

    // Binomial(m) window: mass proportional to C(m, n).
    static ReferenceMeasure binomial(std::int64_t m, IntegerInterval itv) {
        if (m < 1) throw std::invalid_argument("ReferenceMeasure::binomial: order must be positive");
        if (itv.lo < 0 || itv.hi > m)
            throw std::invalid_argument("ReferenceMeasure::binomial: support must lie in [0, m]");
        ReferenceMeasure r;
        r.kind = Kind::Binomial;
        r.support = itv;
        r.order = m;
        Rational c = 1;
        for (std::int64_t i = 0; i < itv.lo; ++i) c = c * Rational(m - i) / Rational(i + 1);
        for (std::int64_t n = itv.lo; n <= itv.hi; ++n) {
            if constexpr (scalar_traits<T>::exact)
                r.mass.push_back(c);
            else
                r.mass.push_back(to_double(c));
            c = c * Rational(m - n) / Rational(n + 1);
        }
        return r;
    }

    // q-Gaussian window: mass proportional to q^{-n(n-1)/2}. This differs from
    // q^{-n^2/2} by the geometric factor q^{-n/2}, which three-point ratios
    // cancel, so it carves out the same relative log-concavity class while
    // staying rational for rational q.
    static ReferenceMeasure qgauss(const Rational& q, IntegerInterval itv) {
        if (q <= 0) throw std::invalid_argument("ReferenceMeasure::qgauss: q must be positive");
        ReferenceMeasure r;
        r.kind = Kind::QGauss;
        r.support = itv;
        r.param = q;
        if constexpr (scalar_traits<T>::exact) {
            for (std::int64_t n = itv.lo; n <= itv.hi; ++n)
                r.mass.push_back(rational_pow(q, -(n * (n - 1) / 2)));
        } else {
            double lq = std::log(to_double(q));
            std::vector<double> le(itv.length());
            double top = -1e300;
            for (std::int64_t n = itv.lo; n <= itv.hi; ++n) {
                double v = -static_cast<double>(n * (n - 1) / 2) * lq;
                le[static_cast<size_t>(n - itv.lo)] = v;
                top = std::max(top, v);
            }
            for (double v : le) r.mass.push_back(std::exp(v - top));
            r.require_positive_mass();
        }
        return r;
    }

    static ReferenceMeasure custom(const Sequence<T>& q) {
        for (const T& v : q.values)
            if (!(v > T(0))) throw std::invalid_argument("ReferenceMeasure::custom: mass must be positive everywhere");
        ReferenceMeasure r;
        r.kind = Kind::Custom;
        r.support = q.interval;
        r.mass = q.values;
        return r;
    }

    // Same measure kind over a larger window (used when convolutions outgrow
    // the original window). Binomial windows cannot grow past [0, m].
    ReferenceMeasure extended_to(IntegerInterval itv) const {
        if (!itv.contains(support)) throw std::invalid_argument("ReferenceMeasure::extended_to: window must grow");
        switch (kind) {
            case Kind::Counting: return counting(itv);
            case Kind::Poisson: return poisson(param, itv);
            case Kind::Binomial: return binomial(order, itv);
            case Kind::QGauss: return qgauss(param, itv);
            case Kind::Custom:
                throw std::invalid_argument("ReferenceMeasure::extended_to: custom measures do not extend");
        }
        throw std::logic_error("ReferenceMeasure::extended_to: bad kind");
    }
};

}  // namespace lcdk
