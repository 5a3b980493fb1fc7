#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace narayana {

/// Element of N ∪ {inf}. The infinite value arises exactly as the
/// valuation of zero; finite values v satisfy p^v | x and p^{v+1} ∤ x.
class valuation {
public:
    constexpr valuation() = default;
    constexpr valuation(std::uint64_t v) : v_(v) {}

    static constexpr valuation infinity() {
        valuation v;
        v.v_ = inf_;
        return v;
    }

    constexpr bool is_infinite() const { return v_ == inf_; }

    /// Finite value; throws if infinite.
    constexpr std::uint64_t finite() const {
        if (is_infinite()) throw std::logic_error("valuation: value is infinite");
        return v_;
    }

    // inf_ is the largest representable value, so default ordering puts
    // infinity above every finite valuation.
    friend constexpr bool operator==(valuation a, valuation b) = default;
    friend constexpr auto operator<=>(valuation a, valuation b) = default;

    /// Valuations add along products; infinity absorbs.
    friend constexpr valuation operator+(valuation a, valuation b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return valuation(a.v_ + b.v_);
    }

    std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

    friend std::ostream& operator<<(std::ostream& os, valuation v) { return os << v.str(); }

private:
    static constexpr std::uint64_t inf_ = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t v_ = 0;
};

} // namespace narayana
