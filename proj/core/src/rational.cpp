// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/rational.hpp"

#include <cctype>

#include "treecert/errors.hpp"

namespace treecert {

namespace {

[[noreturn]] void bad_number(std::string_view text) {
    throw InputError("not an exact number: \"" + std::string(text) + "\"");
}

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (const char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

Integer pow10(unsigned long exponent) {
    Integer result = 1;
    Integer base = 10;
    while (exponent > 0) {
        if (exponent & 1U) {
            result *= base;
        }
        base *= base;
        exponent >>= 1U;
    }
    return result;
}

// Integer's string constructor reads a leading 0 as an octal prefix.
Integer decimal_integer(std::string_view digits) {
    const auto first = digits.find_first_not_of('0');
    return first == std::string_view::npos ? Integer(0) : Integer(std::string(digits.substr(first)));
}

Rational parse_fraction(std::string_view text, std::size_t slash) {
    std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
        negative = num.front() == '-';
        num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) {
        bad_number(text);
    }
    const Integer d = decimal_integer(den);
    if (d == 0) {
        bad_number(text);
    }
    Rational q(decimal_integer(num), d);
    return negative ? Rational(-q) : q;
}

} // namespace

Rational parse_rational(std::string_view text) {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        return parse_fraction(text, slash);
    }
    std::string_view rest = text;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }

    std::string_view mantissa = rest;
    long exponent = 0;
    if (const auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = rest.substr(0, e);
        std::string_view exp_text = rest.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6) {
            bad_number(text);
        }
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) {
            exponent = -exponent;
        }
    }

    std::string_view int_part = mantissa;
    std::string_view frac_part;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        int_part = mantissa.substr(0, dot);
        frac_part = mantissa.substr(dot + 1);
        if (!frac_part.empty() && !all_digits(frac_part)) {
            bad_number(text);
        }
    }
    if (!int_part.empty() && !all_digits(int_part)) {
        bad_number(text);
    }
    if (int_part.empty() && frac_part.empty()) {
        bad_number(text);
    }

    std::string digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
    const Integer value = decimal_integer(digits);
    Rational q = exponent >= 0 ? Rational(value * pow10(static_cast<unsigned long>(exponent)))
                               : Rational(value, pow10(static_cast<unsigned long>(-exponent)));
    return negative ? Rational(-q) : q;
}

Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

std::string to_string(const Rational& q) {
    const Integer num = numerator_of(q);
    Integer den = denominator_of(q);
    if (den == 1) {
        return num.str();
    }
    // Terminating iff den = 2^a 5^b.
    unsigned twos = 0;
    unsigned fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) {
        return num.str() + "/" + denominator_of(q).str();
    }
    const unsigned places = std::max(twos, fives);
    const Integer scaled = abs(num) * pow10(places) / denominator_of(q);
    std::string digits = scaled.str();
    if (digits.size() <= places) {
        digits.insert(0, places + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - places, ".");
    return (num < 0 ? "-" : "") + digits;
}

bool operator<=(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.is_minus_infinity() || b.is_plus_infinity()) {
        return true;
    }
    if (a.is_plus_infinity() || b.is_minus_infinity()) {
        return false;
    }
    return a.value() <= b.value();
}

bool operator<=(const ExtendedRational& a, const Rational& b) {
    return a.is_minus_infinity() || (a.is_finite() && a.value() <= b);
}

bool operator<=(const Rational& a, const ExtendedRational& b) {
    return b.is_plus_infinity() || (b.is_finite() && a <= b.value());
}

std::string to_string(const ExtendedRational& q) {
    switch (q.kind()) {
    case ExtendedRational::Kind::MinusInfinity: return "-inf";
    case ExtendedRational::Kind::PlusInfinity: return "inf";
    case ExtendedRational::Kind::Finite: break;
    }
    return to_string(q.value());
}

ExtendedRational parse_extended_rational(std::string_view text) {
    if (text == "-inf") {
        return ExtendedRational::minus_infinity();
    }
    if (text == "inf" || text == "+inf") {
        return ExtendedRational::plus_infinity();
    }
    return parse_rational(text);
}

} // namespace treecert
