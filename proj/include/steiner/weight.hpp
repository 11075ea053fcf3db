#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "steiner/error.hpp"

namespace steiner {

/// Exact edge/tree weight. Rational input weights are scaled to integers at
/// parse time, so every comparison downstream is exact.
///
/// The maximum representable value is reserved as +infinity ("no tree").
class Weight {
public:
    using rep = std::uint64_t;

    constexpr Weight() = default;
    constexpr explicit Weight(rep value) : value_(value) {}

    static constexpr Weight infinity() { return Weight(kInfinity); }
    static constexpr Weight zero() { return Weight(0); }

    constexpr bool is_infinite() const { return value_ == kInfinity; }
    constexpr bool is_finite() const { return value_ != kInfinity; }
    constexpr rep value() const { return value_; }

    /// Infinity absorbs; finite overflow throws instead of wrapping.
    friend constexpr Weight operator+(Weight a, Weight b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        if (a.value_ > kInfinity - 1 - b.value_) throw OverflowError("weight addition overflow");
        return Weight(a.value_ + b.value_);
    }

    constexpr Weight& operator+=(Weight other) { return *this = *this + other; }

    /// Multiplication by a positive integer factor, checked.
    constexpr Weight scaled(rep factor) const {
        if (is_infinite()) return *this;
        if (factor != 0 && value_ > (kInfinity - 1) / factor) throw OverflowError("weight scaling overflow");
        return Weight(value_ * factor);
    }

    friend constexpr auto operator<=>(Weight, Weight) = default;

    std::string to_string() const { return is_infinite() ? std::string("inf") : std::to_string(value_); }

    friend std::ostream& operator<<(std::ostream& os, Weight w) { return os << w.to_string(); }

private:
    static constexpr rep kInfinity = std::numeric_limits<rep>::max();
    rep value_ = 0;
};

}  // namespace steiner
