#include "qnc/ext_value.hpp"

#include <cctype>
#include <ostream>

#include "qnc/errors.hpp"

namespace qnc {

namespace {

bool is_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den))
        throw input_error("malformed rational '" + std::string(text) + "'");
    mpz_class p(std::string(num), 10);
    mpz_class q(std::string(den), 10);
    if (q == 0)
        throw input_error("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string format_rational_pq(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

ExtValue::ExtValue(long v) : ExtValue(Rational(v)) {}

ExtValue::ExtValue(Rational v) : value_(std::move(v))
{
    value_.canonicalize();
    if (sgn(value_) < 0)
        throw arithmetic_error("ExtValue must be nonnegative, got " + value_.get_str());
}

ExtValue ExtValue::infinity()
{
    ExtValue v;
    v.infinite_ = true;
    return v;
}

const Rational& ExtValue::finite() const
{
    if (infinite_)
        throw arithmetic_error("finite() called on inf");
    return value_;
}

ExtValue ExtValue::pow(unsigned long n) const
{
    if (n == 0)
        return ExtValue(1);
    if (infinite_)
        return infinity();
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), value_.get_num_mpz_t(), n);
    mpz_pow_ui(r.get_den_mpz_t(), value_.get_den_mpz_t(), n);
    return ExtValue(std::move(r));
}

ExtValue operator+(const ExtValue& a, const ExtValue& b)
{
    if (a.infinite_ || b.infinite_)
        return ExtValue::infinity();
    return ExtValue(Rational(a.value_ + b.value_));
}

ExtValue operator*(const ExtValue& a, const ExtValue& b)
{
    if (a.is_zero() || b.is_zero())
        return ExtValue();
    if (a.infinite_ || b.infinite_)
        return ExtValue::infinity();
    return ExtValue(Rational(a.value_ * b.value_));
}

ExtValue operator/(const ExtValue& a, const ExtValue& b)
{
    if (a.is_zero() && b.is_zero())
        throw arithmetic_error("0/0 is undefined");
    if (a.infinite_ && b.infinite_)
        throw arithmetic_error("inf/inf is undefined");
    if (b.is_zero() || a.infinite_)
        return ExtValue::infinity();
    if (b.infinite_)
        return ExtValue();
    return ExtValue(Rational(a.value_ / b.value_));
}

bool operator==(const ExtValue& a, const ExtValue& b)
{
    if (a.infinite_ || b.infinite_)
        return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b)
{
    if (a.infinite_ || b.infinite_) {
        if (a.infinite_ == b.infinite_)
            return std::strong_ordering::equal;
        return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string ExtValue::str() const
{
    return infinite_ ? std::string("inf") : value_.get_str();
}

ExtValue ExtValue::parse(std::string_view text)
{
    if (text == "inf")
        return infinity();
    Rational r = parse_rational(text);
    if (sgn(r) < 0)
        throw input_error("expected a nonnegative value, got '" + std::string(text) + "'");
    return ExtValue(std::move(r));
}

std::ostream& operator<<(std::ostream& os, const ExtValue& v)
{
    return os << v.str();
}

} // namespace qnc
