// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "simplex.hpp"

#include <cassert>
#include <optional>
#include <vector>

namespace treecert::lp {

namespace {

// Dense tableau. Column layout: x+ (n), x- (n), one slack per Le row, one
// artificial per row that needs one, then the right-hand side.
class Tableau {
  public:
    Tableau(std::span<const fm::Row> rows, std::size_t n) : n_(n) {
        std::size_t slacks = 0;
        for (const fm::Row& r : rows) {
            slacks += r.kind != fm::Kind::Eq ? 1 : 0;
        }
        const std::size_t m = rows.size();
        // Upper bound on artificial count is m; unused columns stay zero.
        first_artificial_ = 2 * n + slacks;
        cols_ = first_artificial_ + m;
        t_.assign(m, std::vector<Rational>(cols_ + 1));
        basis_.assign(m, 0);
        std::size_t slack = 2 * n;
        std::size_t artificial = first_artificial_;
        for (std::size_t i = 0; i < m; ++i) {
            const fm::Row& r = rows[i];
            const bool flip = r.constant > 0; // rhs = -constant must be >= 0
            const Rational sign = flip ? -1 : 1;
            for (std::size_t j = 0; j < n; ++j) {
                if (r.coef[j] != 0) {
                    t_[i][j] = sign * Rational(r.coef[j]);
                    t_[i][n + j] = -t_[i][j];
                }
            }
            t_[i][cols_] = sign * Rational(-r.constant);
            std::optional<std::size_t> basic;
            if (r.kind != fm::Kind::Eq) {
                t_[i][slack] = sign;
                if (!flip) {
                    basic = slack;
                }
                ++slack;
            }
            if (!basic) {
                t_[i][artificial] = 1;
                basic = artificial;
                ++artificial;
            }
            basis_[i] = *basic;
        }
        used_cols_ = artificial;
    }

    // Phase 1. False when infeasible.
    bool make_feasible() {
        std::vector<Rational> cost(cols_, Rational(0));
        bool any = false;
        for (std::size_t j = first_artificial_; j < used_cols_; ++j) {
            cost[j] = -1;
            any = true;
        }
        if (!any) {
            return true;
        }
        set_objective(cost);
        const bool bounded = optimize(used_cols_);
        assert(bounded);
        (void)bounded;
        if (objective_value() < 0) {
            return false;
        }
        drive_out_artificials();
        return true;
    }

    // Phase 2 on the free variables. False when unbounded.
    bool maximize(std::span<const Integer> objective) {
        std::vector<Rational> cost(cols_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            cost[j] = Rational(objective[j]);
            cost[n_ + j] = -cost[j];
        }
        set_objective(cost);
        return optimize(first_artificial_);
    }

    [[nodiscard]] Rational objective_value() const { return -d_[cols_]; }

  private:
    void set_objective(const std::vector<Rational>& cost) {
        d_.assign(cols_ + 1, Rational(0));
        for (std::size_t j = 0; j < cols_; ++j) {
            d_[j] = cost[j];
        }
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const Rational& cb = cost[basis_[i]];
            if (cb == 0) {
                continue;
            }
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (t_[i][j] != 0) {
                    d_[j] -= cb * t_[i][j];
                }
            }
        }
    }

    // Bland's rule over columns [0, limit). False when unbounded.
    bool optimize(std::size_t limit) {
        while (true) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < limit; ++j) {
                if (d_[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (!enter) {
                return true;
            }
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < t_.size(); ++i) {
                const Rational& a = t_[i][*enter];
                if (a <= 0) {
                    continue;
                }
                const Rational ratio = t_[i][cols_] / a;
                if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) {
                return false;
            }
            pivot(*leave, *enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        std::vector<Rational>& pr = t_[row];
        const Rational inv = 1 / pr[col];
        for (Rational& v : pr) {
            if (v != 0) {
                v *= inv;
            }
        }
        const auto eliminate = [&](std::vector<Rational>& target) {
            const Rational f = target[col];
            if (f == 0) {
                return;
            }
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (pr[j] != 0) {
                    target[j] -= f * pr[j];
                }
            }
        };
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i != row) {
                eliminate(t_[i]);
            }
        }
        eliminate(d_);
        basis_[row] = col;
    }

    void drive_out_artificials() {
        for (std::size_t i = t_.size(); i-- > 0;) {
            if (basis_[i] < first_artificial_) {
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (t_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col) {
                pivot(i, *col);
            } else {
                // Redundant equality.
                t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    std::size_t n_;
    std::size_t first_artificial_ = 0;
    std::size_t cols_ = 0;
    std::size_t used_cols_ = 0;
    std::vector<std::vector<Rational>> t_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> d_;
};

} // namespace

Result maximize(std::span<const fm::Row> rows, std::size_t num_vars, std::span<const Integer> objective) {
    Tableau t(rows, num_vars);
    if (!t.make_feasible()) {
        return {Status::Infeasible, Rational(0)};
    }
    if (!t.maximize(objective)) {
        return {Status::Unbounded, Rational(0)};
    }
    return {Status::Optimal, t.objective_value()};
}

bool feasible(std::span<const fm::Row> rows, std::size_t num_vars) {
    bool strict = false;
    for (const fm::Row& r : rows) {
        strict = strict || r.kind == fm::Kind::Lt;
    }
    if (!strict) {
        return Tableau(rows, num_vars).make_feasible();
    }
    // Maximize a common slack t <= 1 on the strict rows.
    std::vector<fm::Row> relaxed;
    relaxed.reserve(rows.size() + 1);
    for (const fm::Row& r : rows) {
        fm::Row c = r;
        c.coef.resize(num_vars + 1, Integer(0));
        if (r.kind == fm::Kind::Lt) {
            c.coef[num_vars] = 1;
            c.kind = fm::Kind::Le;
        }
        relaxed.push_back(std::move(c));
    }
    fm::Row cap;
    cap.coef.assign(num_vars + 1, Integer(0));
    cap.coef[num_vars] = 1;
    cap.constant = -1;
    relaxed.push_back(std::move(cap));
    std::vector<Integer> objective(num_vars + 1, Integer(0));
    objective[num_vars] = 1;
    const Result r = maximize(relaxed, num_vars + 1, objective);
    return r.status == Status::Optimal && r.value > 0;
}

bool entails(std::span<const fm::Row> rows, std::size_t num_vars, const fm::Row& row) {
    if (row.kind == fm::Kind::Eq) {
        fm::Row le = row;
        le.kind = fm::Kind::Le;
        fm::Row ge = fm::negate(row);
        ge.kind = fm::Kind::Le;
        return entails(rows, num_vars, le) && entails(rows, num_vars, ge);
    }
    const Result r = maximize(rows, num_vars, row.coef);
    switch (r.status) {
    case Status::Infeasible: return true;
    case Status::Unbounded: return false;
    case Status::Optimal: return row.kind == fm::Kind::Lt ? r.value + Rational(row.constant) < 0
                                                         : r.value + Rational(row.constant) <= 0;
    }
    return false;
}

} // namespace treecert::lp
