#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kd {

using Rational = boost::multiprecision::cpp_rational;

class Scalar;

// The ground field: GF(p) for a prime p < 2^31, or the rationals.
class Field {
public:
    enum class Kind { prime, rationals };

    Field() : Field(prime(101)) {}
    static Field prime(std::int64_t p);
    static Field rationals();
    // "gf:<p>" or "q"
    static Field parse(std::string_view text);

    Kind kind() const { return kind_; }
    std::int64_t characteristic() const { return p_; }
    std::string name() const;

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(std::int64_t v) const;
    Scalar from_rational(const Rational& q) const;
    Scalar sign(bool negative) const;

    bool operator==(const Field& o) const { return kind_ == o.kind_ && p_ == o.p_; }

private:
    Field(Kind k, std::int64_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::int64_t p_;
};

// A field element that carries its modulus, so arithmetic needs no context.
// mod_ == 0 means rational.
class Scalar {
public:
    Scalar() = default;

    bool is_zero() const { return mod_ ? res_ == 0 : q_ == 0; }
    bool is_one() const { return mod_ ? res_ == 1 : q_ == 1; }
    std::int64_t modulus() const { return mod_; }
    std::int64_t residue() const { return res_; }
    const Rational& rational() const { return q_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const { return *this * o.inv(); }
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inv() const;
    Scalar negated_if(bool neg) const { return neg ? -*this : *this; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // canonical: residue 0..p-1, or n or n/d with d > 0
    std::string str() const;

private:
    friend class Field;
    std::int64_t mod_ = 0;
    std::int64_t res_ = 0;
    Rational q_;
};

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_prime(std::int64_t n);

}  // namespace kd
