// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fourier_motzkin.hpp"

#include "simplex.hpp"

#include <algorithm>
#include <map>

#include <boost/dynamic_bitset.hpp>

namespace treecert::fm {

namespace {

enum class Status { Keep, Tautology, Contradiction };

Status normalize(Row& row) {
    Integer g = 0;
    for (const Integer& c : row.coef) {
        if (c != 0) {
            g = boost::multiprecision::gcd(g, abs(c));
        }
    }
    if (g == 0) {
        bool holds = false;
        switch (row.kind) {
        case Kind::Le: holds = row.constant <= 0; break;
        case Kind::Lt: holds = row.constant < 0; break;
        case Kind::Eq: holds = row.constant == 0; break;
        }
        return holds ? Status::Tautology : Status::Contradiction;
    }
    g = boost::multiprecision::gcd(g, abs(row.constant));
    if (row.kind == Kind::Eq) {
        const auto first = std::find_if(row.coef.begin(), row.coef.end(), [](const Integer& c) { return c != 0; });
        if (*first < 0) {
            g = -g;
        }
    }
    if (g != 1) {
        for (Integer& c : row.coef) {
            c /= g;
        }
        row.constant /= g;
    }
    return Status::Keep;
}

std::size_t nonzeros(const Row& row) {
    return static_cast<std::size_t>(
        std::count_if(row.coef.begin(), row.coef.end(), [](const Integer& c) { return c != 0; }));
}

// a * r - b * e, where a > 0.
Row combine(const Row& r, const Integer& a, const Row& e, const Integer& b) {
    Row out;
    out.coef.resize(r.coef.size());
    for (std::size_t i = 0; i < r.coef.size(); ++i) {
        out.coef[i] = a * r.coef[i] - b * e.coef[i];
    }
    out.constant = a * r.constant - b * e.constant;
    out.kind = r.kind;
    return out;
}

// Parallel inequalities keep only the tightest bound.
class RowSet {
  public:
    explicit RowSet(std::size_t num_originals) : num_originals_(num_originals) {}

    void insert(Row row, boost::dynamic_bitset<> history) {
        Integer g = 0;
        for (const Integer& c : row.coef) {
            if (c != 0) {
                g = boost::multiprecision::gcd(g, abs(c));
            }
        }
        std::vector<Integer> direction = row.coef;
        for (Integer& c : direction) {
            c /= g;
        }
        const Rational bound(row.constant, g);
        const auto it = index_.find(direction);
        if (it == index_.end()) {
            index_.emplace(std::move(direction), rows_.size());
            bounds_.push_back(bound);
            rows_.push_back(std::move(row));
            histories_.push_back(std::move(history));
            return;
        }
        const std::size_t i = it->second;
        const bool tighter = bound > bounds_[i] || (bound == bounds_[i] && row.kind == Kind::Lt);
        if (tighter) {
            bounds_[i] = bound;
            rows_[i] = std::move(row);
            histories_[i] = std::move(history);
        }
    }

    std::vector<Row>& rows() { return rows_; }
    std::vector<boost::dynamic_bitset<>>& histories() { return histories_; }
    [[nodiscard]] std::size_t num_originals() const { return num_originals_; }

  private:
    std::size_t num_originals_;
    std::map<std::vector<Integer>, std::size_t> index_;
    std::vector<Rational> bounds_;
    std::vector<Row> rows_;
    std::vector<boost::dynamic_bitset<>> histories_;
};

// Drops rows implied by the remaining ones.
void remove_redundant(std::vector<Row>& rows, std::vector<boost::dynamic_bitset<>>& histories) {
    for (std::size_t i = rows.size(); i-- > 0;) {
        std::vector<Row> others;
        others.reserve(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k != i) {
                others.push_back(rows[k]);
            }
        }
        if (lp::entails(others, rows[i].coef.size(), rows[i])) {
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
            histories.erase(histories.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
}

} // namespace

Row negate(const Row& row) {
    Row out = row;
    for (Integer& c : out.coef) {
        c = -c;
    }
    out.constant = -out.constant;
    out.kind = row.kind == Kind::Le ? Kind::Lt : Kind::Le;
    return out;
}

std::optional<std::vector<Row>> eliminate(std::vector<Row> rows, const std::vector<bool>& drop, const Options& options) {
    const std::size_t n = drop.size();

    std::vector<Row> work;
    work.reserve(rows.size());
    for (Row& r : rows) {
        switch (normalize(r)) {
        case Status::Contradiction: return std::nullopt;
        case Status::Tautology: break;
        case Status::Keep: work.push_back(std::move(r)); break;
        }
    }

    // Equalities first: substitution does not grow the system.
    for (std::size_t v = 0; v < n; ++v) {
        if (!drop[v]) {
            continue;
        }
        std::optional<std::size_t> pivot;
        for (std::size_t i = 0; i < work.size(); ++i) {
            if (work[i].kind == Kind::Eq && work[i].coef[v] != 0 &&
                (!pivot || nonzeros(work[i]) < nonzeros(work[*pivot]))) {
                pivot = i;
            }
        }
        if (!pivot) {
            continue;
        }
        Row e = std::move(work[*pivot]);
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(*pivot));
        if (e.coef[v] < 0) {
            e = combine(e, Integer(-1), e, Integer(0));
        }
        std::vector<Row> next;
        next.reserve(work.size());
        for (Row& r : work) {
            if (r.coef[v] == 0) {
                next.push_back(std::move(r));
                continue;
            }
            Row s = combine(r, e.coef[v], e, r.coef[v]);
            switch (normalize(s)) {
            case Status::Contradiction: return std::nullopt;
            case Status::Tautology: break;
            case Status::Keep: next.push_back(std::move(s)); break;
            }
        }
        work = std::move(next);
    }

    std::vector<Row> passive;
    std::vector<boost::dynamic_bitset<>> original_support;
    RowSet ineqs(0);
    {
        std::vector<Row> inequality_rows;
        for (Row& r : work) {
            (r.kind == Kind::Eq ? passive : inequality_rows).push_back(std::move(r));
        }
        ineqs = RowSet(inequality_rows.size());
        for (std::size_t i = 0; i < inequality_rows.size(); ++i) {
            boost::dynamic_bitset<> h(inequality_rows.size());
            h.set(i);
            boost::dynamic_bitset<> support(n);
            for (std::size_t v = 0; v < n; ++v) {
                if (inequality_rows[i].coef[v] != 0) {
                    support.set(v);
                }
            }
            original_support.push_back(std::move(support));
            ineqs.insert(std::move(inequality_rows[i]), std::move(h));
        }
    }

    std::vector<bool> pending = drop;
    boost::dynamic_bitset<> eliminated(n);
    while (true) {
        std::vector<Row>& cur = ineqs.rows();
        std::optional<std::size_t> best;
        long long best_score = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!pending[v]) {
                continue;
            }
            std::size_t pos = 0;
            std::size_t neg = 0;
            for (const Row& r : cur) {
                if (r.coef[v] > 0) {
                    ++pos;
                } else if (r.coef[v] < 0) {
                    ++neg;
                }
            }
            if (pos + neg == 0) {
                pending[v] = false;
                continue;
            }
            // Net growth in row count.
            const auto score = static_cast<long long>(pos * neg) - static_cast<long long>(pos + neg);
            if (!best || score < best_score) {
                best = v;
                best_score = score;
            }
        }
        if (!best) {
            break;
        }
        const std::size_t v = *best;
        pending[v] = false;
        eliminated.set(v);

        auto& hist = ineqs.histories();
        RowSet next(ineqs.num_originals());
        std::vector<std::size_t> pos_rows;
        std::vector<std::size_t> neg_rows;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i].coef[v] > 0) {
                pos_rows.push_back(i);
            } else if (cur[i].coef[v] < 0) {
                neg_rows.push_back(i);
            } else {
                next.insert(cur[i], hist[i]);
            }
        }
        for (const std::size_t p : pos_rows) {
            for (const std::size_t q : neg_rows) {
                boost::dynamic_bitset<> h = hist[p] | hist[q];
                // Kohler: a row built from more originals than one plus the
                // eliminated variables those originals mention is redundant.
                boost::dynamic_bitset<> touched(n);
                for (std::size_t o = h.find_first(); o != boost::dynamic_bitset<>::npos; o = h.find_next(o)) {
                    touched |= original_support[o];
                }
                if (h.count() > (touched & eliminated).count() + 1) {
                    continue;
                }
                const Row& rp = cur[p];
                const Row& rq = cur[q];
                Row s = combine(rp, -rq.coef[v], rq, -rp.coef[v]);
                s.kind = (rp.kind == Kind::Lt || rq.kind == Kind::Lt) ? Kind::Lt : Kind::Le;
                switch (normalize(s)) {
                case Status::Contradiction: return std::nullopt;
                case Status::Tautology: break;
                case Status::Keep: next.insert(std::move(s), std::move(h)); break;
                }
            }
        }
        ineqs = std::move(next);
        if (ineqs.rows().size() > options.prune_cap) {
            remove_redundant(ineqs.rows(), ineqs.histories());
        }
    }

    std::vector<Row> out = std::move(passive);
    for (Row& r : ineqs.rows()) {
        out.push_back(std::move(r));
    }
    return out;
}

bool feasible(std::vector<Row> rows, std::size_t num_vars, const Options& options) {
    return eliminate(std::move(rows), std::vector<bool>(num_vars, true), options).has_value();
}

} // namespace treecert::fm
