#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace ff {

// Natural number extended with a distinguished infinity. Addition saturates.
class ExtNat {
public:
    using value_type = std::uint64_t;

    constexpr ExtNat() = default;
    constexpr ExtNat(value_type v) : value_(v == kInf ? kInf - 1 : v) {}

    static constexpr ExtNat infinity() {
        ExtNat r;
        r.value_ = kInf;
        return r;
    }

    constexpr bool is_infinite() const { return value_ == kInf; }
    constexpr bool is_finite() const { return value_ != kInf; }

    // Only meaningful when finite.
    constexpr value_type value() const { return value_; }

    friend constexpr ExtNat operator+(ExtNat a, ExtNat b) {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        value_type sum = a.value_ + b.value_;
        if (sum < a.value_ || sum >= kInf)
            return infinity();
        return ExtNat(sum);
    }
    constexpr ExtNat &operator+=(ExtNat o) { return *this = *this + o; }

    friend constexpr bool operator==(ExtNat, ExtNat) = default;
    friend constexpr auto operator<=>(ExtNat a, ExtNat b) {
        return a.value_ <=> b.value_;
    }

    friend std::ostream &operator<<(std::ostream &os, ExtNat v) {
        if (v.is_infinite())
            return os << "inf";
        return os << v.value_;
    }

private:
    static constexpr value_type kInf = std::numeric_limits<value_type>::max();
    value_type value_ = 0;
};

} // namespace ff
