#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace qassert {

/// Rotation angle, kept symbolic when written as pi/2^k so adder rotations
/// stay bit-reproducible through parse/emit round trips.
struct Angle {
    bool exact = false;    // pi / 2^k form
    bool negative = false; // sign of the exact form
    int k = 0;             // exponent of the exact form
    double value = 0.0;    // radians, decimal form

    double radians() const {
        if (!exact) return value;
        const double mag = std::ldexp(M_PI, -k); // pi / 2^k, exact scaling
        return negative ? -mag : mag;
    }

    Angle negated() const {
        Angle a = *this;
        if (a.exact) {
            a.negative = !a.negative;
        } else {
            a.value = -a.value;
        }
        return a;
    }

    Angle half() const {
        Angle a = *this;
        if (a.exact) {
            a.k += 1;
        } else {
            a.value *= 0.5;
        }
        return a;
    }

    bool positive() const { return exact ? !negative : value > 0.0; }

    std::string str() const;

    static Angle pi_over_pow2(int k, bool negative = false) {
        Angle a;
        a.exact = true;
        a.negative = negative;
        a.k = k;
        return a;
    }
    static Angle decimal(double radians) {
        Angle a;
        a.value = radians;
        return a;
    }

    /// Accepts "pi", "-pi", "pi/2^k", "-pi/2^k" and signed decimals.
    static std::optional<Angle> parse(std::string_view text);
};

} // namespace qassert
