// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/polyhedron.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <map>

#include "double_description.hpp"
#include "fourier_motzkin.hpp"
#include "simplex.hpp"

namespace treecert {

namespace {

std::atomic<std::size_t> g_prune_cap{64};

fm::Options fm_options() { return {g_prune_cap.load(std::memory_order_relaxed)}; }

// Dense column layout for a set of variables.
class Space {
  public:
    void add(const AffineExpr& e) {
        for (const auto& [v, c] : e.terms()) {
            add(v);
        }
    }
    void add(std::span<const LinearConstraint> cs) {
        for (const LinearConstraint& c : cs) {
            add(c.expr());
        }
    }
    void add(Var v) {
        if (index_.emplace(v, vars_.size()).second) {
            vars_.push_back(v);
        }
    }

    [[nodiscard]] std::size_t size() const { return vars_.size(); }
    [[nodiscard]] std::size_t column(Var v) const { return index_.at(v); }
    [[nodiscard]] Var var(std::size_t col) const { return vars_[col]; }

    // Canonical constraints have coprime integer coefficients.
    [[nodiscard]] fm::Row row(const LinearConstraint& c) const {
        fm::Row r;
        r.coef.assign(size(), Integer(0));
        for (const auto& [v, k] : c.expr().terms()) {
            assert(denominator_of(k) == 1);
            r.coef[column(v)] = numerator_of(k);
        }
        r.constant = numerator_of(c.expr().constant());
        r.kind = c.is_equality() ? fm::Kind::Eq : fm::Kind::Le;
        return r;
    }

    [[nodiscard]] std::vector<fm::Row> rows(std::span<const LinearConstraint> cs) const {
        std::vector<fm::Row> out;
        out.reserve(cs.size());
        for (const LinearConstraint& c : cs) {
            out.push_back(row(c));
        }
        return out;
    }

    [[nodiscard]] LinearConstraint constraint(const fm::Row& r) const {
        AffineExpr e(Rational(r.constant));
        for (std::size_t i = 0; i < r.coef.size(); ++i) {
            if (r.coef[i] != 0) {
                e += AffineExpr::term(vars_[i], Rational(r.coef[i]));
            }
        }
        assert(r.kind != fm::Kind::Lt);
        return {std::move(e), r.kind == fm::Kind::Eq ? Relation::Equal : Relation::LessEq};
    }

  private:
    std::vector<Var> vars_;
    std::map<Var, std::size_t> index_;
};

void sort_unique(std::vector<LinearConstraint>& cs) {
    std::erase_if(cs, [](const LinearConstraint& c) { return c.is_tautology(); });
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
}

Var greatest_var(const AffineExpr& e) { return e.terms().rbegin()->first; }

// Equalities of the affine hull of gamma(a) u gamma(b), both normalized and
// non-empty: the orthogonal complement of their joint directions.
std::vector<LinearConstraint> affine_hull_equalities(const std::vector<LinearConstraint>& a,
                                                     const std::vector<LinearConstraint>& b) {
    Space space;
    space.add(a);
    space.add(b);
    const std::size_t n = space.size();
    using Dense = std::vector<Rational>;

    const auto describe = [&](const std::vector<LinearConstraint>& cs, Dense& point, std::vector<Dense>& dirs) {
        std::map<std::size_t, AffineExpr> pivots;
        for (const LinearConstraint& c : cs) {
            if (c.is_equality()) {
                const Var p = greatest_var(c.expr());
                const Rational k = c.expr().coeff(p);
                pivots.emplace(space.column(p), (c.expr() - AffineExpr::term(p, k)) * Rational(-1 / k));
            }
        }
        point.assign(n, Rational(0));
        for (const auto& [col, def] : pivots) {
            point[col] = def.constant();
        }
        for (std::size_t f = 0; f < n; ++f) {
            if (pivots.contains(f)) {
                continue;
            }
            Dense d(n, Rational(0));
            d[f] = 1;
            for (const auto& [col, def] : pivots) {
                d[col] = def.coeff(space.var(f));
            }
            dirs.push_back(std::move(d));
        }
    };
    Dense p1;
    Dense p2;
    std::vector<Dense> m;
    describe(a, p1, m);
    describe(b, p2, m);
    Dense shift(n);
    for (std::size_t i = 0; i < n; ++i) {
        shift[i] = p2[i] - p1[i];
    }
    m.push_back(std::move(shift));

    // Reduced row echelon form of m; the null space is read off the free columns.
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m.size(); ++col) {
        std::size_t r = rank;
        while (r < m.size() && m[r][col] == 0) {
            ++r;
        }
        if (r == m.size()) {
            continue;
        }
        std::swap(m[rank], m[r]);
        const Rational inv = 1 / m[rank][col];
        for (Rational& v : m[rank]) {
            v *= inv;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i != rank && m[i][col] != 0) {
                const Rational f = m[i][col];
                for (std::size_t j = 0; j < n; ++j) {
                    m[i][j] -= f * m[rank][j];
                }
            }
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(n, false);
    for (const std::size_t c : pivot_cols) {
        is_pivot[c] = true;
    }
    std::vector<LinearConstraint> out;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        Dense normal(n, Rational(0));
        normal[f] = 1;
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
            normal[pivot_cols[r]] = -m[r][f];
        }
        AffineExpr e;
        Rational at_point = 0;
        for (std::size_t i = 0; i < n; ++i) {
            e += AffineExpr::term(space.var(i), normal[i]);
            at_point += normal[i] * p1[i];
        }
        out.push_back(LinearConstraint::eq(e, at_point));
    }
    return out;
}

} // namespace

void Polyhedron::set_prune_cap(std::size_t cap) { g_prune_cap.store(cap, std::memory_order_relaxed); }
std::size_t Polyhedron::prune_cap() { return g_prune_cap.load(std::memory_order_relaxed); }

Polyhedron Polyhedron::bottom() {
    Polyhedron p;
    p.bottom_ = true;
    return p;
}

std::set<Var> Polyhedron::variables() const {
    std::set<Var> out;
    for (const LinearConstraint& c : constraints_) {
        for (const auto& [v, k] : c.expr().terms()) {
            out.insert(v);
        }
    }
    return out;
}

bool Polyhedron::is_feasible() const {
    if (bottom_) {
        return false;
    }
    if (constraints_.empty()) {
        return true;
    }
    Space space;
    space.add(constraints_);
    return lp::feasible(space.rows(constraints_), space.size());
}

bool Polyhedron::entails(const LinearConstraint& c) const {
    if (bottom_ || c.is_tautology()) {
        return true;
    }
    if (c.is_contradiction()) {
        return false;
    }
    if (std::binary_search(constraints_.begin(), constraints_.end(), c)) {
        return true;
    }
    if (c.is_equality()) {
        const auto halves = c.as_inequalities();
        return entails(halves[0]) && entails(halves[1]);
    }
    for (const LinearConstraint& eq : constraints_) {
        if (eq.is_equality()) {
            const auto halves = eq.as_inequalities();
            if (halves[0] == c || halves[1] == c) {
                return true;
            }
        }
    }
    Space space;
    space.add(constraints_);
    space.add(c.expr());
    return lp::entails(space.rows(constraints_), space.size(), space.row(c));
}

bool Polyhedron::entails(const Polyhedron& other) const {
    if (bottom_) {
        return true;
    }
    if (other.bottom_) {
        return false;
    }
    return std::all_of(other.constraints_.begin(), other.constraints_.end(),
                       [this](const LinearConstraint& c) { return entails(c); });
}

bool Polyhedron::contains(const Valuation& point) const {
    if (bottom_) {
        return false;
    }
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [&](const LinearConstraint& c) { return c.satisfied_by(point); });
}

Polyhedron Polyhedron::meet(std::span<const LinearConstraint> constraints) const {
    if (bottom_) {
        return *this;
    }
    std::vector<LinearConstraint> all = constraints_;
    for (const LinearConstraint& c : constraints) {
        if (c.is_contradiction()) {
            return bottom();
        }
        all.push_back(c);
    }
    sort_unique(all);
    if (all.size() == constraints_.size()) {
        return *this;
    }
    Polyhedron result(std::move(all));
    if (!result.is_feasible()) {
        return bottom();
    }
    return result;
}

Polyhedron Polyhedron::meet(const Polyhedron& other) const {
    if (other.bottom_) {
        return other;
    }
    return meet(other.constraints_);
}

Polyhedron Polyhedron::project(std::span<const Var> vars) const {
    if (bottom_) {
        return *this;
    }
    Space space;
    space.add(constraints_);
    std::vector<bool> drop(space.size(), false);
    bool any = false;
    for (const Var v : vars) {
        const std::set<Var> present = variables();
        if (present.contains(v)) {
            drop[space.column(v)] = true;
            any = true;
        }
    }
    if (!any) {
        return *this;
    }
    auto rows = fm::eliminate(space.rows(constraints_), drop, fm_options());
    if (!rows) {
        return bottom();
    }
    std::vector<LinearConstraint> out;
    out.reserve(rows->size());
    for (const fm::Row& r : *rows) {
        out.push_back(space.constraint(r));
    }
    sort_unique(out);
    return Polyhedron(std::move(out));
}

Polyhedron Polyhedron::project_onto(const std::set<Var>& keep) const {
    std::vector<Var> drop;
    for (const Var v : variables()) {
        if (!keep.contains(v)) {
            drop.push_back(v);
        }
    }
    return project(drop);
}

Polyhedron Polyhedron::rename(Var from, Var to) const {
    std::vector<LinearConstraint> out;
    out.reserve(constraints_.size());
    for (const LinearConstraint& c : constraints_) {
        out.emplace_back(c.expr().substitute(from, AffineExpr(to)), c.relation());
    }
    sort_unique(out);
    return Polyhedron(std::move(out));
}

Polyhedron Polyhedron::assign_affine(Var v, const AffineExpr& e) const {
    if (bottom_) {
        return *this;
    }
    const Rational alpha = e.coeff(v);
    if (alpha != 0) {
        // Invertible: old v = (v - rest) / alpha.
        const AffineExpr rest = e - AffineExpr::term(v, alpha);
        const AffineExpr old_v = (AffineExpr(v) - rest) * Rational(1 / alpha);
        std::vector<LinearConstraint> out;
        out.reserve(constraints_.size());
        for (const LinearConstraint& c : constraints_) {
            out.emplace_back(c.expr().substitute(v, old_v), c.relation());
        }
        sort_unique(out);
        return Polyhedron(std::move(out));
    }
    Polyhedron p = project(v);
    p.constraints_.push_back(LinearConstraint::eq(v, e));
    sort_unique(p.constraints_);
    return p;
}

Polyhedron Polyhedron::assign_interval(Var v, const AffineExpr& low, const AffineExpr& high) const {
    if (bottom_) {
        return *this;
    }
    if (!low.mentions(v) && !high.mentions(v)) {
        return project(v).meet({LinearConstraint::ge(v, low), LinearConstraint::le(v, high)});
    }
    const Var fresh = Var::scratch(0);
    const Polyhedron bounded = meet({LinearConstraint::ge(fresh, low), LinearConstraint::le(fresh, high)});
    if (bounded.is_bottom()) {
        return bounded;
    }
    return bounded.project(v).rename(fresh, v);
}

Polyhedron Polyhedron::weak_join(const Polyhedron& other) const {
    if (bottom_) {
        return other;
    }
    if (other.bottom_) {
        return *this;
    }
    const Polyhedron a = normalized();
    const Polyhedron b = other.normalized();
    std::vector<LinearConstraint> kept = affine_hull_equalities(a.constraints_, b.constraints_);
    for (const auto& [from, judge] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        for (const LinearConstraint& c : from->constraints_) {
            for (const LinearConstraint& half : c.as_inequalities()) {
                if (judge->entails(half)) {
                    kept.push_back(half);
                }
            }
        }
    }
    sort_unique(kept);
    return Polyhedron(std::move(kept)).normalized();
}

Polyhedron Polyhedron::join(const Polyhedron& other) const {
    if (bottom_) {
        return other;
    }
    if (other.bottom_) {
        return *this;
    }
    if (other.entails(*this)) {
        return *this;
    }
    if (entails(other)) {
        return other;
    }
    const Polyhedron a = normalized();
    const Polyhedron b = other.normalized();
    return a.hull_of_normalized(b);
}

Polyhedron Polyhedron::hull_of_normalized(const Polyhedron& other) const {
    // Homogenize each operand as the cone {(x, t) : A x + b t <= 0, t >= 0},
    // take generators of both, and read the hull off the polar of their union.
    Space space;
    space.add(constraints_);
    space.add(other.constraints_);
    const std::size_t n = space.size();

    const auto cone = [&](const std::vector<LinearConstraint>& cs) {
        std::vector<dd::Constraint> rows;
        for (const LinearConstraint& c : cs) {
            const fm::Row r = space.row(c);
            dd::Constraint h{r.coef, c.is_equality()};
            h.coef.push_back(r.constant);
            rows.push_back(std::move(h));
        }
        dd::Constraint positive{dd::Vec(n + 1, Integer(0)), false};
        positive.coef[n] = -1;
        rows.push_back(std::move(positive));
        return dd::generators(rows, n + 1);
    };

    std::vector<dd::Constraint> polar;
    for (const std::vector<LinearConstraint>* cs : {&constraints_, &other.constraints_}) {
        dd::Generators g = cone(*cs);
        for (dd::Vec& r : g.rays) {
            polar.push_back({std::move(r), false});
        }
        for (dd::Vec& l : g.lines) {
            polar.push_back({std::move(l), true});
        }
    }
    const dd::Generators facets = dd::generators(polar, n + 1);

    std::vector<LinearConstraint> out;
    const auto emit = [&](const dd::Vec& y, bool equality) {
        fm::Row r;
        r.coef.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        r.constant = y[n];
        r.kind = equality ? fm::Kind::Eq : fm::Kind::Le;
        out.push_back(space.constraint(r));
    };
    for (const dd::Vec& y : facets.rays) {
        emit(y, false);
    }
    for (const dd::Vec& y : facets.lines) {
        emit(y, true);
    }
    sort_unique(out);
    // Extreme rays of the polar are exactly the facets, and its lines are all
    // the implied equalities, so only the rewriting step is left.
    return Polyhedron(std::move(out)).canonical(false);
}

Polyhedron Polyhedron::widen(const Polyhedron& newer) const {
    if (bottom_) {
        return newer;
    }
    if (newer.bottom_) {
        return *this;
    }
    const Polyhedron old = normalized();
    std::vector<LinearConstraint> kept;
    for (const LinearConstraint& c : old.constraints_) {
        for (const LinearConstraint& half : c.as_inequalities()) {
            if (newer.entails(half)) {
                kept.push_back(half);
            }
        }
    }
    sort_unique(kept);
    return Polyhedron(std::move(kept)).normalized();
}

Polyhedron Polyhedron::normalized() const { return canonical(true); }

Polyhedron Polyhedron::canonical(bool search_implied) const {
    if (bottom_ || constraints_.empty()) {
        return *this;
    }
    std::vector<AffineExpr> equalities;
    std::vector<AffineExpr> inequalities;
    for (const LinearConstraint& c : constraints_) {
        if (c.is_equality()) {
            equalities.push_back(c.expr());
        } else if (search_implied && entails(LinearConstraint(-c.expr(), Relation::LessEq))) {
            equalities.push_back(c.expr());
        } else {
            inequalities.push_back(c.expr());
        }
    }

    // Reduced echelon form, pivoting on the greatest variable of each row.
    std::map<Var, AffineExpr> pivots;
    for (AffineExpr e : equalities) {
        for (const auto& [p, def] : pivots) {
            e = e.substitute(p, def);
        }
        if (e.is_constant()) {
            continue;
        }
        const Var p = greatest_var(e);
        const Rational alpha = e.coeff(p);
        const AffineExpr def = (e - AffineExpr::term(p, alpha)) * Rational(-1 / alpha);
        for (auto& [q, dq] : pivots) {
            dq = dq.substitute(p, def);
        }
        pivots.emplace(p, def);
    }

    std::vector<LinearConstraint> out;
    for (const auto& [p, def] : pivots) {
        out.push_back(LinearConstraint::eq(p, def));
    }

    // Parallel inequalities: keep the smallest bound.
    std::map<std::map<Var, Rational>, std::pair<Rational, LinearConstraint>> by_direction;
    for (AffineExpr e : inequalities) {
        for (const auto& [p, def] : pivots) {
            e = e.substitute(p, def);
        }
        LinearConstraint c(std::move(e), Relation::LessEq);
        if (c.is_tautology()) {
            continue;
        }
        Integer g = 0;
        for (const auto& [v, k] : c.expr().terms()) {
            g = boost::multiprecision::gcd(g, numerator_of(abs(k)));
        }
        std::map<Var, Rational> direction;
        for (const auto& [v, k] : c.expr().terms()) {
            direction.emplace(v, k / Rational(g));
        }
        const Rational bound = -c.expr().constant() / Rational(g);
        const auto it = by_direction.find(direction);
        if (it == by_direction.end()) {
            by_direction.emplace(std::move(direction), std::pair{bound, c});
        } else if (bound < it->second.first) {
            it->second = {bound, c};
        }
    }
    std::vector<LinearConstraint> ineqs;
    for (auto& [dir, entry] : by_direction) {
        ineqs.push_back(std::move(entry.second));
    }
    std::sort(ineqs.begin(), ineqs.end());

    // Inequalities no longer mention pivots, so redundancy is decided among them alone.
    if (search_implied && ineqs.size() > 1) {
        Space space;
        space.add(ineqs);
        std::vector<fm::Row> rows = space.rows(ineqs);
        std::vector<bool> alive(rows.size(), true);
        for (std::size_t i = rows.size(); i-- > 0;) {
            std::vector<fm::Row> others;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                if (k != i && alive[k]) {
                    others.push_back(rows[k]);
                }
            }
            if (lp::entails(others, space.size(), rows[i])) {
                alive[i] = false;
            }
        }
        for (std::size_t i = 0; i < ineqs.size(); ++i) {
            if (alive[i]) {
                out.push_back(ineqs[i]);
            }
        }
    } else {
        out.insert(out.end(), ineqs.begin(), ineqs.end());
    }
    sort_unique(out);
    return Polyhedron(std::move(out));
}

std::pair<std::optional<Rational>, std::optional<Rational>> Polyhedron::bounds(const AffineExpr& e) const {
    if (bottom_) {
        return {};
    }
    if (e.is_constant()) {
        return {e.constant(), e.constant()};
    }
    // Integer direction d = k * (e - constant) with k > 0.
    const LinearConstraint scaled(e - e.constant(), Relation::LessEq);
    const Rational k = scaled.expr().terms().begin()->second / e.terms().begin()->second;
    Space space;
    space.add(constraints_);
    space.add(e);
    const std::vector<fm::Row> rows = space.rows(constraints_);
    fm::Row d = space.row(scaled);
    const lp::Result hi = lp::maximize(rows, space.size(), d.coef);
    if (hi.status == lp::Status::Infeasible) {
        return {};
    }
    for (Integer& c : d.coef) {
        c = -c;
    }
    const lp::Result lo = lp::maximize(rows, space.size(), d.coef);
    std::optional<Rational> low;
    std::optional<Rational> high;
    if (lo.status == lp::Status::Optimal) {
        low = -lo.value / k + e.constant();
    }
    if (hi.status == lp::Status::Optimal) {
        high = hi.value / k + e.constant();
    }
    return {low, high};
}

std::string Polyhedron::to_string() const {
    if (bottom_) {
        return "bottom\n";
    }
    const Polyhedron n = normalized();
    if (n.constraints_.empty()) {
        return "top\n";
    }
    std::string out;
    for (const LinearConstraint& c : n.constraints_) {
        out += c.to_string();
        out += "\n";
    }
    return out;
}

Polyhedron abstract_instance(std::span<const Rational> x) {
    std::vector<LinearConstraint> cs;
    cs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        cs.push_back(LinearConstraint::eq(Var::initial(i), AffineExpr(x[i])));
    }
    return Polyhedron::of(cs);
}

} // namespace treecert
