// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/linear.hpp"

#include <algorithm>

namespace treecert {

std::string Var::name() const {
    switch (kind) {
    case Kind::Initial: return "x_" + std::to_string(index);
    case Kind::Attacked: return "xp_" + std::to_string(index);
    case Kind::Counter: return "r_" + std::to_string(index);
    case Kind::Budget: return "B";
    case Kind::Scratch: return "t_" + std::to_string(index);
    }
    return "?";
}

AffineExpr AffineExpr::term(Var v, const Rational& coeff) {
    AffineExpr e;
    if (coeff != 0) {
        e.coeffs_.emplace(v, coeff);
    }
    return e;
}

Rational AffineExpr::coeff(Var v) const {
    const auto it = coeffs_.find(v);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

Rational AffineExpr::evaluate(const Valuation& point) const {
    Rational sum = constant_;
    for (const auto& [v, c] : coeffs_) {
        sum += c * point.at(v);
    }
    return sum;
}

AffineExpr AffineExpr::substitute(Var v, const AffineExpr& replacement) const {
    const auto it = coeffs_.find(v);
    if (it == coeffs_.end()) {
        return *this;
    }
    AffineExpr out = *this;
    const Rational c = it->second;
    out.coeffs_.erase(v);
    out += replacement * c;
    return out;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
    for (const auto& [v, c] : other.coeffs_) {
        auto [it, inserted] = coeffs_.emplace(v, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                coeffs_.erase(it);
            }
        }
    }
    constant_ += other.constant_;
    return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) { return *this += -AffineExpr(other); }

AffineExpr& AffineExpr::operator*=(const Rational& factor) {
    if (factor == 0) {
        coeffs_.clear();
        constant_ = 0;
        return *this;
    }
    for (auto& [v, c] : coeffs_) {
        c *= factor;
    }
    constant_ *= factor;
    return *this;
}

bool operator<(const AffineExpr& a, const AffineExpr& b) {
    auto ia = a.coeffs_.begin();
    auto ib = b.coeffs_.begin();
    for (; ia != a.coeffs_.end() && ib != b.coeffs_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) {
            return ia->first < ib->first;
        }
        if (ia->second != ib->second) {
            return ia->second < ib->second;
        }
    }
    if (ia != a.coeffs_.end() || ib != b.coeffs_.end()) {
        return ib != b.coeffs_.end();
    }
    return a.constant_ < b.constant_;
}

namespace {

void append_term(std::string& out, const Rational& c, const std::string& name) {
    const Rational mag = abs(c);
    if (out.empty()) {
        if (c < 0) {
            out += "-";
        }
    } else {
        out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) {
        out += to_string(mag) + " ";
    }
    out += name;
}

} // namespace

std::string AffineExpr::to_string() const {
    std::string out;
    for (const auto& [v, c] : coeffs_) {
        append_term(out, c, v.name());
    }
    if (constant_ != 0 || out.empty()) {
        if (out.empty()) {
            out = treecert::to_string(constant_);
        } else {
            out += (constant_ < 0 ? " - " : " + ") + treecert::to_string(abs(constant_));
        }
    }
    return out;
}

LinearConstraint::LinearConstraint(AffineExpr expr, Relation relation) : expr_(std::move(expr)), relation_(relation) {
    // Scale to coprime integers.
    Integer lcm_den = denominator_of(expr_.constant());
    for (const auto& [v, c] : expr_.terms()) {
        lcm_den = boost::multiprecision::lcm(lcm_den, denominator_of(c));
    }
    Integer g = abs(numerator_of(expr_.constant()) * (lcm_den / denominator_of(expr_.constant())));
    for (const auto& [v, c] : expr_.terms()) {
        g = boost::multiprecision::gcd(g, abs(numerator_of(c) * (lcm_den / denominator_of(c))));
    }
    if (g == 0) {
        // 0 <= 0 or 0 = 0.
        return;
    }
    Rational scale(lcm_den, g);
    if (relation_ == Relation::Equal) {
        const bool negative =
            expr_.terms().empty() ? expr_.constant() < 0 : expr_.terms().begin()->second < 0;
        if (negative) {
            scale = -scale;
        }
    }
    expr_ *= scale;
}

bool LinearConstraint::is_tautology() const {
    if (!expr_.is_constant()) {
        return false;
    }
    return relation_ == Relation::Equal ? expr_.constant() == 0 : expr_.constant() <= 0;
}

bool LinearConstraint::is_contradiction() const { return expr_.is_constant() && !is_tautology(); }

bool LinearConstraint::satisfied_by(const Valuation& point) const {
    const Rational value = expr_.evaluate(point);
    return relation_ == Relation::Equal ? value == 0 : value <= 0;
}

std::vector<LinearConstraint> LinearConstraint::as_inequalities() const {
    if (relation_ == Relation::LessEq) {
        return {*this};
    }
    return {LinearConstraint(expr_, Relation::LessEq), LinearConstraint(-expr_, Relation::LessEq)};
}

std::string LinearConstraint::to_string() const {
    // A leading negative coefficient reads better as a lower bound.
    const bool flip = relation_ == Relation::LessEq && !expr_.terms().empty() && expr_.terms().begin()->second < 0;
    const Rational sign = flip ? -1 : 1;
    std::string lhs;
    for (const auto& [v, c] : expr_.terms()) {
        append_term(lhs, Rational(sign * c), v.name());
    }
    if (lhs.empty()) {
        lhs = "0";
    }
    const char* rel = relation_ == Relation::Equal ? " = " : (flip ? " >= " : " <= ");
    return lhs + rel + treecert::to_string(Rational(-sign * expr_.constant()));
}

bool operator<(const LinearConstraint& a, const LinearConstraint& b) {
    if (a.relation_ != b.relation_) {
        return a.relation_ > b.relation_; // equalities first
    }
    return a.expr_ < b.expr_;
}

} // namespace treecert
