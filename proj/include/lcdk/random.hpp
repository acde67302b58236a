#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lcdk/rational.hpp"
#include "lcdk/reference.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk {

using Rng = std::mt19937_64;

constexpr std::uint64_t kDefaultSeed = 20240601;

// Uniform in [0, 1) with 53 bits; avoids the implementation-defined behaviour
// of std::uniform_real_distribution.
inline double draw_u01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::int64_t draw_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(rng() % span);
}

inline double draw_exponential(Rng& rng, double rate = 1.0) {
    return -std::log1p(-draw_u01(rng)) / rate;
}

inline double draw_laplace(Rng& rng, double scale = 1.0) {
    double e = draw_exponential(rng, 1.0 / scale);
    return (rng() & 1) ? e : -e;
}

namespace detail {

// Log-ratios of the density relative to the reference: a nonincreasing slope
// sequence, so the exponentiated weights are log-concave by construction.
inline std::vector<double> draw_log_ratios(Rng& rng, std::int64_t steps) {
    std::vector<double> r(static_cast<size_t>(steps));
    double slope = steps > 0 ? draw_laplace(rng) : 0.0;
    for (std::int64_t i = 0; i < steps; ++i) {
        r[static_cast<size_t>(i)] = slope;
        slope -= draw_exponential(rng);
    }
    return r;
}

// Monotone quantization of exp(x) onto positive dyadic rationals. Monotone maps
// keep the ratio sequence nonincreasing, so exact log-concavity survives.
inline Rational quantized_ratio(double log_ratio) {
    constexpr double kClamp = 30.0;
    constexpr double kScale = 65536.0;  // 2^16
    double x = std::exp(std::min(std::max(log_ratio, -kClamp), kClamp));
    auto num = static_cast<std::int64_t>(std::llround(x * kScale));
    if (num < 1) num = 1;
    return Rational(num, static_cast<std::int64_t>(kScale));
}

}  // namespace detail

// Random law that is log-concave relative to gamma, supported on a random
// contiguous sub-window of `itv`. Both backends produce sequences that pass
// is_log_concave exactly under their own comparison policy; the rational
// backend quantizes the ratios so the three-point inequality holds exactly.
template <class T>
ProbSequence<T> random_log_concave(Rng& rng, IntegerInterval itv, const ReferenceMeasure<T>& gamma) {
    if (!gamma.support.contains(itv))
        throw std::invalid_argument("random_log_concave: interval not contained in reference window");
    std::int64_t a = draw_int(rng, itv.lo, itv.hi);
    std::int64_t b = draw_int(rng, itv.lo, itv.hi);
    IntegerInterval supp{std::min(a, b), std::max(a, b)};
    const std::int64_t len = supp.length();
    std::vector<double> log_ratios = detail::draw_log_ratios(rng, len - 1);

    std::vector<T> vals(static_cast<size_t>(len));
    if constexpr (scalar_traits<T>::exact) {
        Rational r = 1;
        vals[0] = gamma.at(supp.lo);
        for (std::int64_t i = 1; i < len; ++i) {
            r *= detail::quantized_ratio(log_ratios[static_cast<size_t>(i - 1)]);
            vals[static_cast<size_t>(i)] = r * gamma.at(supp.lo + i);
        }
    } else {
        std::vector<double> w(static_cast<size_t>(len), 0.0);
        double top = 0.0, acc = 0.0;
        for (std::int64_t i = 1; i < len; ++i) {
            acc += log_ratios[static_cast<size_t>(i - 1)];
            w[static_cast<size_t>(i)] = acc;
            top = std::max(top, acc);
        }
        for (std::int64_t i = 0; i < len; ++i)
            vals[static_cast<size_t>(i)] = std::exp(w[static_cast<size_t>(i)] - top) * gamma.at(supp.lo + i);
    }
    return normalize(Sequence<T>(supp, std::move(vals)));
}

template <class T>
ProbSequence<T> random_log_concave(std::uint64_t seed, IntegerInterval itv, const ReferenceMeasure<T>& gamma) {
    Rng rng(seed);
    return random_log_concave(rng, itv, gamma);
}

// Random unimodal sequence with values in (0, 1], peak value 1.
inline Sequence<double> random_unimodal(Rng& rng, IntegerInterval itv) {
    const std::int64_t len = itv.length();
    std::vector<double> vals(static_cast<size_t>(len));
    std::int64_t peak = draw_int(rng, 0, len - 1);
    vals[static_cast<size_t>(peak)] = 1.0;
    for (std::int64_t i = peak - 1; i >= 0; --i)
        vals[static_cast<size_t>(i)] = vals[static_cast<size_t>(i + 1)] * (1.0 - draw_u01(rng));
    for (std::int64_t i = peak + 1; i < len; ++i)
        vals[static_cast<size_t>(i)] = vals[static_cast<size_t>(i - 1)] * (1.0 - draw_u01(rng));
    return Sequence<double>(itv, std::move(vals));
}

}  // namespace lcdk
