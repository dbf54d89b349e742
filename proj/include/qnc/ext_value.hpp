#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qnc {

using Rational = mpq_class;

/// Parses `p/q`, `p` or a negative variant; rejects zero denominators.
Rational parse_rational(std::string_view text);

/// Always `p/q`, even for integers.
std::string format_rational_pq(const Rational& q);

/// Nonnegative exact rational extended by a single point at infinity.
///
/// Conventions: 0*inf = 0, x*inf = inf for x > 0, x + inf = inf, inf^0 = 1,
/// inf^n = inf for n >= 1, x/0 = inf for x > 0, x/inf = 0 for finite x.
/// 0/0 and inf/inf throw arithmetic_error.
class ExtValue {
public:
    ExtValue() = default;
    ExtValue(int v) : ExtValue(static_cast<long>(v)) {}
    ExtValue(long v);
    ExtValue(Rational v);

    static ExtValue infinity();

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    bool is_zero() const { return !infinite_ && sgn(value_) == 0; }
    bool is_positive() const { return infinite_ || sgn(value_) > 0; }

    /// Throws arithmetic_error when infinite.
    const Rational& finite() const;

    ExtValue pow(unsigned long n) const;

    friend ExtValue operator+(const ExtValue& a, const ExtValue& b);
    friend ExtValue operator*(const ExtValue& a, const ExtValue& b);
    friend ExtValue operator/(const ExtValue& a, const ExtValue& b);
    ExtValue& operator+=(const ExtValue& b) { return *this = *this + b; }
    ExtValue& operator*=(const ExtValue& b) { return *this = *this * b; }

    friend bool operator==(const ExtValue& a, const ExtValue& b);
    friend std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b);

    /// `inf`, or the reduced rational (`3`, `1/2`).
    std::string str() const;

    /// Accepts `inf` and everything parse_rational accepts; the value must be >= 0.
    static ExtValue parse(std::string_view text);

private:
    Rational value_{0};
    bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtValue& v);

} // namespace qnc
