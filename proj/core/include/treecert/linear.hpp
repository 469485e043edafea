// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "treecert/rational.hpp"

namespace treecert {

/// Program variable of the attacker/tree encoding.
///
/// Initial(i) is the unattacked value x_i, Attacked(i) its value x'_i after
/// the attack, Counter(j) counts applications of rule j, and Budget is the
/// budget left. Scratch variables are private to the domain implementation.
struct Var {
    enum class Kind : std::uint8_t { Initial, Attacked, Counter, Budget, Scratch };

    Kind kind = Kind::Initial;
    std::uint32_t index = 0;

    static Var initial(std::size_t i) { return {Kind::Initial, static_cast<std::uint32_t>(i)}; }
    static Var attacked(std::size_t i) { return {Kind::Attacked, static_cast<std::uint32_t>(i)}; }
    static Var counter(std::size_t j) { return {Kind::Counter, static_cast<std::uint32_t>(j)}; }
    static Var budget() { return {Kind::Budget, 0}; }
    static Var scratch(std::size_t i) { return {Kind::Scratch, static_cast<std::uint32_t>(i)}; }

    /// x_i, xp_i, r_j, B, or t_i for scratch variables.
    [[nodiscard]] std::string name() const;

    friend auto operator<=>(const Var&, const Var&) = default;
};

using Valuation = std::map<Var, Rational>;

/// sum(c_v * v) + constant. Zero coefficients are never stored.
class AffineExpr {
  public:
    AffineExpr() = default;
    AffineExpr(Rational constant) : constant_(std::move(constant)) {}
    AffineExpr(int constant) : constant_(constant) {}
    AffineExpr(Var v) { coeffs_.emplace(v, Rational(1)); }

    static AffineExpr term(Var v, const Rational& coeff);

    [[nodiscard]] const std::map<Var, Rational>& terms() const { return coeffs_; }
    [[nodiscard]] const Rational& constant() const { return constant_; }
    [[nodiscard]] Rational coeff(Var v) const;
    [[nodiscard]] bool mentions(Var v) const { return coeffs_.contains(v); }
    [[nodiscard]] bool is_constant() const { return coeffs_.empty(); }

    /// Throws std::out_of_range when a mentioned variable has no value.
    [[nodiscard]] Rational evaluate(const Valuation& point) const;

    /// Replaces v by `replacement` everywhere.
    [[nodiscard]] AffineExpr substitute(Var v, const AffineExpr& replacement) const;

    AffineExpr& operator+=(const AffineExpr& other);
    AffineExpr& operator-=(const AffineExpr& other);
    AffineExpr& operator*=(const Rational& factor);

    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    friend AffineExpr operator*(AffineExpr a, const Rational& k) { return a *= k; }
    friend AffineExpr operator*(const Rational& k, AffineExpr a) { return a *= k; }
    friend AffineExpr operator-(AffineExpr a) { return a *= Rational(-1); }

    friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
    friend bool operator<(const AffineExpr& a, const AffineExpr& b);

    [[nodiscard]] std::string to_string() const;

  private:
    std::map<Var, Rational> coeffs_;
    Rational constant_;
};

enum class Relation : std::uint8_t { LessEq, Equal };

/// expr <= 0 or expr = 0, kept canonical: coefficients and constant are
/// coprime integers, and an equality's first coefficient is positive.
class LinearConstraint {
  public:
    LinearConstraint(AffineExpr expr, Relation relation);

    static LinearConstraint le(const AffineExpr& lhs, const AffineExpr& rhs) { return {lhs - rhs, Relation::LessEq}; }
    static LinearConstraint ge(const AffineExpr& lhs, const AffineExpr& rhs) { return {rhs - lhs, Relation::LessEq}; }
    static LinearConstraint eq(const AffineExpr& lhs, const AffineExpr& rhs) { return {lhs - rhs, Relation::Equal}; }

    [[nodiscard]] const AffineExpr& expr() const { return expr_; }
    [[nodiscard]] Relation relation() const { return relation_; }
    [[nodiscard]] bool is_equality() const { return relation_ == Relation::Equal; }

    /// Constraint without variables that always holds / never holds.
    [[nodiscard]] bool is_tautology() const;
    [[nodiscard]] bool is_contradiction() const;

    [[nodiscard]] bool satisfied_by(const Valuation& point) const;

    /// For an equality, the pair {expr <= 0, -expr <= 0}; otherwise itself.
    [[nodiscard]] std::vector<LinearConstraint> as_inequalities() const;

    /// "5 r_0 + 4 r_1 <= 10": variables on the left, constant on the right.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
    friend bool operator<(const LinearConstraint& a, const LinearConstraint& b);

  private:
    AffineExpr expr_;
    Relation relation_;
};

} // namespace treecert
