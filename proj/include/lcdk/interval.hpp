#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lcdk {

// Closed integer interval [lo, hi], both ends inclusive. lo <= hi always holds.
struct IntegerInterval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    IntegerInterval() = default;
    IntegerInterval(std::int64_t lo_, std::int64_t hi_) : lo(lo_), hi(hi_) {
        if (lo > hi)
            throw std::invalid_argument("IntegerInterval: lo > hi (" + std::to_string(lo_) + " > " +
                                        std::to_string(hi_) + ")");
    }

    std::int64_t length() const { return hi - lo + 1; }
    bool contains(std::int64_t n) const { return lo <= n && n <= hi; }
    bool contains(const IntegerInterval& o) const { return lo <= o.lo && o.hi <= hi; }

    bool operator==(const IntegerInterval&) const = default;
};

inline IntegerInterval hull(const IntegerInterval& a, const IntegerInterval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline std::optional<IntegerInterval> intersect(const IntegerInterval& a, const IntegerInterval& b) {
    std::int64_t lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return IntegerInterval{lo, hi};
}

// The half-open interval between x and y, excluding x itself:
// [y, x-1] when y <= x, [x+1, y] when y > x, empty when y == x.
// Cardinality is always |y - x|.
inline std::optional<IntegerInterval> delta_interval(std::int64_t x, std::int64_t y) {
    if (y == x) return std::nullopt;
    if (y < x) return IntegerInterval{y, x - 1};
    return IntegerInterval{x + 1, y};
}

}  // namespace lcdk
