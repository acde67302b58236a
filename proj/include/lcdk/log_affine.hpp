#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lcdk/rational.hpp"
#include "lcdk/reference.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk {

// C * p^n * q(n) on [k, l], zero elsewhere.
template <class T>
Sequence<T> materialize_log_affine(const T& C, const T& p, IntegerInterval supp,
                                   const ReferenceMeasure<T>& gamma) {
    if (!(C > T(0)) || !(p > T(0)))
        throw std::invalid_argument("materialize_log_affine: C and p must be positive");
    if (!gamma.support.contains(supp))
        throw std::invalid_argument("materialize_log_affine: support not contained in reference window");
    std::vector<T> vals(supp.length());
    if constexpr (scalar_traits<T>::exact) {
        T pw = rational_pow(p, supp.lo);
        for (std::int64_t n = supp.lo; n <= supp.hi; ++n) {
            vals[static_cast<size_t>(n - supp.lo)] = C * pw * gamma.at(n);
            pw *= p;
        }
    } else {
        for (std::int64_t n = supp.lo; n <= supp.hi; ++n)
            vals[static_cast<size_t>(n - supp.lo)] = C * std::pow(p, static_cast<double>(n)) * gamma.at(n);
    }
    return Sequence<T>(supp, std::move(vals));
}

// Normalized log-affine law in log parametrization. Stored as logs so extreme
// ratios (|log p| up to ~40 over long supports) stay representable; C and p are
// recovered by exponentiation where they fit.
struct LogAffineSpec {
    double log_p = 0;
    std::int64_t k = 0;
    std::int64_t l = 0;
    double log_C = 0;

    double p() const { return std::exp(log_p); }
    double C() const { return std::exp(log_C); }
    IntegerInterval support() const { return {k, l}; }
    bool is_point_mass() const { return k == l; }
};

// Normalized p.m.f. of the law with mass proportional to exp(n log_p) q(n) on
// [k, l]. Evaluated with a shifted exponent so no intermediate overflows.
inline ProbSequence<double> log_affine_pmf(double log_p, IntegerInterval supp,
                                           const ReferenceMeasure<double>& gamma, LogAffineSpec* spec_out = nullptr) {
    if (!gamma.support.contains(supp))
        throw std::invalid_argument("log_affine_pmf: support not contained in reference window");
    const std::int64_t len = supp.length();
    std::vector<double> le(len);
    double top = -1e300;
    for (std::int64_t n = supp.lo; n <= supp.hi; ++n) {
        double v = static_cast<double>(n - supp.lo) * log_p + std::log(gamma.at(n));
        le[static_cast<size_t>(n - supp.lo)] = v;
        top = std::max(top, v);
    }
    double total = 0;
    std::vector<double> vals(len);
    for (std::int64_t i = 0; i < len; ++i) {
        vals[static_cast<size_t>(i)] = std::exp(le[static_cast<size_t>(i)] - top);
        total += vals[static_cast<size_t>(i)];
    }
    for (double& v : vals) v /= total;
    ProbSequence<double> pmf{Sequence<double>(supp, std::move(vals))};
    if (spec_out) {
        spec_out->log_p = log_p;
        spec_out->k = supp.lo;
        spec_out->l = supp.hi;
        // f(k) = C p^k q(k)  =>  log C = log f(k) - k log p - log q(k)
        spec_out->log_C = std::log(pmf(supp.lo)) - static_cast<double>(supp.lo) * log_p - std::log(gamma.at(supp.lo));
    }
    return pmf;
}

}  // namespace lcdk
