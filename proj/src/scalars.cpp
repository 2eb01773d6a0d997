#include "kd/scalars.hpp"

#include <charconv>

namespace kd {

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::int64_t p)
{
    if (p >= (std::int64_t{1} << 31))
        throw FieldError("characteristic too large: " + std::to_string(p));
    if (!is_prime(p))
        throw FieldError("characteristic is not prime: " + std::to_string(p));
    return Field(Kind::prime, p);
}

Field Field::rationals() { return Field(Kind::rationals, 0); }

Field Field::parse(std::string_view text)
{
    if (text == "q" || text == "Q")
        return rationals();
    if (text.substr(0, 3) == "gf:") {
        auto digits = text.substr(3);
        std::int64_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw FieldError("bad field spec: " + std::string(text));
        return prime(p);
    }
    throw FieldError("bad field spec: " + std::string(text) + " (expected gf:<p> or q)");
}

std::string Field::name() const
{
    return kind_ == Kind::rationals ? "q" : "gf:" + std::to_string(p_);
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }
Scalar Field::sign(bool negative) const { return from_int(negative ? -1 : 1); }

Scalar Field::from_int(std::int64_t v) const
{
    Scalar s;
    s.mod_ = p_;
    if (p_) {
        v %= p_;
        s.res_ = v < 0 ? v + p_ : v;
    } else {
        s.q_ = v;
    }
    return s;
}

Scalar Field::from_rational(const Rational& q) const
{
    if (!p_) {
        Scalar s;
        s.q_ = q;
        return s;
    }
    using boost::multiprecision::cpp_int;
    cpp_int n = numerator(q) % p_, d = denominator(q) % p_;
    if (d == 0)
        throw FieldError("denominator vanishes in " + name());
    return from_int(n.convert_to<std::int64_t>()) / from_int(d.convert_to<std::int64_t>());
}

// A default-constructed Scalar is a rational zero; it adopts the other
// operand's field so accumulators can start empty.
static Field field_of(const Scalar& s)
{
    return s.modulus() ? Field::prime(s.modulus()) : Field::rationals();
}

Scalar Scalar::operator+(const Scalar& o) const
{
    if (mod_ != o.mod_) {
        if (mod_ == 0 && is_zero())
            return o;
        if (o.mod_ == 0 && o.is_zero())
            return *this;
        throw FieldError("mixed fields");
    }
    Scalar r = *this;
    if (mod_) {
        r.res_ += o.res_;
        if (r.res_ >= mod_)
            r.res_ -= mod_;
    } else {
        r.q_ += o.q_;
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const
{
    if (mod_ != o.mod_)
        return *this + (-o);
    Scalar r = *this;
    if (mod_) {
        r.res_ -= o.res_;
        if (r.res_ < 0)
            r.res_ += mod_;
    } else {
        r.q_ -= o.q_;
    }
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const
{
    if (mod_ != o.mod_) {
        if ((mod_ == 0 && is_zero()) || (o.mod_ == 0 && o.is_zero()))
            return field_of(mod_ ? *this : o).zero();
        throw FieldError("mixed fields");
    }
    Scalar r = *this;
    if (mod_)
        r.res_ = res_ * o.res_ % mod_;
    else
        r.q_ *= o.q_;
    return r;
}

Scalar Scalar::operator-() const
{
    Scalar r = *this;
    if (mod_)
        r.res_ = res_ ? mod_ - res_ : 0;
    else
        r.q_ = -q_;
    return r;
}

Scalar Scalar::inv() const
{
    if (is_zero())
        throw FieldError("inverse of zero");
    Scalar r = *this;
    if (!mod_) {
        r.q_ = 1 / q_;
        return r;
    }
    // extended Euclid
    std::int64_t a = res_, m = mod_, x0 = 1, x1 = 0;
    while (m) {
        std::int64_t q = a / m;
        std::swap(a -= q * m, m);
        std::swap(x0 -= q * x1, x1);
    }
    r.res_ = (x0 % mod_ + mod_) % mod_;
    return r;
}

bool Scalar::operator==(const Scalar& o) const
{
    if (mod_ != o.mod_)
        return is_zero() && o.is_zero();
    return (mod_ ? res_ == o.res_ : q_ == o.q_);
}

std::string Scalar::str() const
{
    if (mod_)
        return std::to_string(res_);
    if (denominator(q_) == 1)
        return numerator(q_).str();
    return numerator(q_).str() + "/" + denominator(q_).str();
}

}  // namespace kd
