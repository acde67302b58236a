#pragma once

#include <cstdint>
#include <stdexcept>

#include "lcdk/rational.hpp"
#include "lcdk/reference.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk {

namespace detail {

// Precondition shared by the relative predicates: the positivity region of f
// must sit inside the reference window.
template <class T>
std::optional<IntegerInterval> support_within_reference(const Sequence<T>& f, const ReferenceMeasure<T>& gamma) {
    auto sb = f.support_bounds();
    if (sb && !gamma.support.contains(*sb))
        throw std::invalid_argument("predicate: support not contained in reference support");
    return sb;
}

}  // namespace detail

// f is log-concave relative to gamma: {f > 0} is contiguous and, on the
// interior of the support,
//   f(n)^2 q(n-1) q(n+1) >= f(n-1) f(n+1) q(n)^2.
// The cross-multiplied form never divides, so zero values need no special
// case; outside the (contiguous) support one factor on each side vanishes.
template <class T>
bool is_log_concave(const Sequence<T>& f, const ReferenceMeasure<T>& gamma) {
    auto sb = detail::support_within_reference(f, gamma);
    if (!f.has_contiguous_support()) return false;
    if (!sb) return true;
    for (std::int64_t n = sb->lo + 1; n <= sb->hi - 1; ++n) {
        T lhs = f.at(n) * f.at(n) * gamma.at(n - 1) * gamma.at(n + 1);
        T rhs = f.at(n - 1) * f.at(n + 1) * gamma.at(n) * gamma.at(n);
        if (!scalar_traits<T>::ge(lhs, rhs)) return false;
    }
    return true;
}

template <class T>
bool is_log_concave(const Sequence<T>& f) {
    return is_log_concave(f, ReferenceMeasure<T>::counting(f.interval));
}

// Four-point characterization: f(k+m) f(k+p) >= f(k) f(k+m+p) for all
// k, m, p >= 0 in range. Offsets are taken from the interval's left end, so
// sequences anywhere on the integers are handled by translation.
template <class T>
bool is_log_concave_gap_form(const Sequence<T>& f) {
    const std::int64_t len = f.interval.length();
    auto g = [&](std::int64_t j) -> const T& { return f.values[static_cast<size_t>(j)]; };
    for (std::int64_t k = 0; k < len; ++k)
        for (std::int64_t m = 0; k + m < len; ++m)
            for (std::int64_t p = 0; k + m + p < len; ++p) {
                T lhs = g(k + m) * g(k + p);
                T rhs = g(k) * g(k + m + p);
                if (!scalar_traits<T>::ge(lhs, rhs)) return false;
            }
    return true;
}

// Equality case of the three-point relation on the (contiguous) support.
template <class T>
bool is_log_affine(const Sequence<T>& f, const ReferenceMeasure<T>& gamma) {
    auto sb = detail::support_within_reference(f, gamma);
    if (!f.has_contiguous_support()) return false;
    if (!sb) return true;
    for (std::int64_t n = sb->lo + 1; n <= sb->hi - 1; ++n) {
        T lhs = f.at(n) * f.at(n) * gamma.at(n - 1) * gamma.at(n + 1);
        T rhs = f.at(n - 1) * f.at(n + 1) * gamma.at(n) * gamma.at(n);
        if (!scalar_traits<T>::eq(lhs, rhs)) return false;
    }
    return true;
}

template <class T>
bool is_log_affine(const Sequence<T>& f) {
    return is_log_affine(f, ReferenceMeasure<T>::counting(f.interval));
}

// Nondecreasing then nonincreasing. Equivalent to
// f(k) >= min(f(m), f(n)) for all m <= k <= n.
template <class T>
bool is_unimodal(const Sequence<T>& f) {
    const std::int64_t len = f.interval.length();
    std::int64_t i = 0;
    while (i + 1 < len && !(f.values[static_cast<size_t>(i + 1)] < f.values[static_cast<size_t>(i)])) ++i;
    while (i + 1 < len && !(f.values[static_cast<size_t>(i + 1)] > f.values[static_cast<size_t>(i)])) ++i;
    return i + 1 == len;
}

}  // namespace lcdk
