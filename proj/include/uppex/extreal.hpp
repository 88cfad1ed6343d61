#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "uppex/errors.hpp"

namespace uppex {

// Extended real scalar for upper-expectation arithmetic.
//
// Finite values are plain doubles; +inf and -inf are first-class values with
// the asymmetric conventions this code base relies on everywhere:
//
//   addition:        +inf absorbs, so (+inf) + (-inf) = (-inf) + (+inf) = +inf
//   multiplication:  0 * (+-inf) = 0; otherwise signs multiply as usual
//
// NaN is never a valid value and every entry point intercepts it before any
// IEEE arithmetic could produce one.
class ExtReal {
public:
    ExtReal() : v_(0.0) {}

    // Implicit on purpose: doubles (including IEEE +-inf) are welcome,
    // NaN is not.
    ExtReal(double v) : v_(v) {
        if (std::isnan(v)) throw contract_error("ExtReal: NaN is not a valid extended real");
    }

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
    bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

    // Raw double; +-inf map to IEEE infinities.
    double raw() const { return v_; }

    // Finite value accessor; throws when the value is infinite.
    double finite() const {
        if (!is_finite()) throw contract_error("ExtReal: expected a finite value");
        return v_;
    }

    ExtReal operator-() const {
        return ExtReal(-v_); // negating +-inf is fine, no NaN possible
    }

    // Total order -inf < finite < +inf falls out of IEEE comparisons
    // because NaN is excluded by construction.
    friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

private:
    double v_;
};

// Sum with +inf dominating: if either operand is +inf the sum is +inf,
// else if either is -inf the sum is -inf, else the ordinary sum.
inline ExtReal ext_add(ExtReal a, ExtReal b) {
    if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
    if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
    return ExtReal(a.raw() + b.raw());
}

// Product with 0 * (+-inf) = 0 and sign rules otherwise.
inline ExtReal ext_mul(ExtReal lam, ExtReal a) {
    if (lam.raw() == 0.0 || a.raw() == 0.0) return ExtReal(0.0);
    if (lam.is_finite() && a.is_finite()) return ExtReal(lam.raw() * a.raw());
    const bool neg = (lam.raw() < 0.0) != (a.raw() < 0.0);
    return neg ? ExtReal::neg_inf() : ExtReal::pos_inf();
}

inline ExtReal operator+(ExtReal a, ExtReal b) { return ext_add(a, b); }
inline ExtReal operator*(ExtReal a, ExtReal b) { return ext_mul(a, b); }

inline ExtReal ext_min(ExtReal a, ExtReal b) { return a <= b ? a : b; }
inline ExtReal ext_max(ExtReal a, ExtReal b) { return a >= b ? a : b; }

// Fixed textual form used across JSON documents and the CLI: infinities are
// the strings "inf" / "-inf", finite values print with 12 significant digits.
std::string to_text(ExtReal v);

inline std::ostream& operator<<(std::ostream& os, ExtReal v) { return os << to_text(v); }

} // namespace uppex
