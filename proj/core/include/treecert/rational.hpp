// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace treecert {

// Expression templates are disabled so that `auto` always holds a value.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

/// Parses a number exactly. Accepted forms: optional sign, digits with an
/// optional fractional part, optional exponent ("-12", "8.25", ".5", "1e-3",
/// "2.5E+2"), or a fraction "p/q". Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// Exact text form that parse_rational reads back: a plain decimal when the
/// value has a terminating expansion, "p/q" otherwise.
std::string to_string(const Rational& q);

Integer numerator_of(const Rational& q);
Integer denominator_of(const Rational& q);

/// A rational or one of the two infinities; used for interval endpoints.
class ExtendedRational {
  public:
    enum class Kind { MinusInfinity, Finite, PlusInfinity };

    ExtendedRational(Rational value) : kind_(Kind::Finite), value_(std::move(value)) {}
    ExtendedRational(int value) : ExtendedRational(Rational(value)) {}

    static ExtendedRational minus_infinity() { return ExtendedRational(Kind::MinusInfinity); }
    static ExtendedRational plus_infinity() { return ExtendedRational(Kind::PlusInfinity); }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
    [[nodiscard]] bool is_minus_infinity() const { return kind_ == Kind::MinusInfinity; }
    [[nodiscard]] bool is_plus_infinity() const { return kind_ == Kind::PlusInfinity; }

    // Only meaningful when finite.
    [[nodiscard]] const Rational& value() const { return value_; }

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
    }
    friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b);
    friend bool operator<=(const ExtendedRational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const ExtendedRational& b);

  private:
    explicit ExtendedRational(Kind kind) : kind_(kind) {}

    Kind kind_;
    Rational value_;
};

/// "-inf", "inf" or to_string of the finite value.
std::string to_string(const ExtendedRational& q);

/// Like parse_rational, but also accepts "-inf", "inf" and "+inf".
ExtendedRational parse_extended_rational(std::string_view text);

} // namespace treecert
