// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "double_description.hpp"

#include <optional>

#include <boost/dynamic_bitset.hpp>

namespace treecert::dd {

namespace {

Integer dot(const Vec& a, const Vec& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && b[i] != 0) {
            s += a[i] * b[i];
        }
    }
    return s;
}

void reduce(Vec& v) {
    Integer g = 0;
    for (const Integer& x : v) {
        if (x != 0) {
            g = boost::multiprecision::gcd(g, abs(x));
        }
    }
    if (g > 1) {
        for (Integer& x : v) {
            x /= g;
        }
    }
}

// a * u + b * w
Vec combine(const Integer& a, const Vec& u, const Integer& b, const Vec& w) {
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = a * u[i] + b * w[i];
    }
    reduce(out);
    return out;
}

struct Ray {
    Vec v;
    boost::dynamic_bitset<> saturated; // processed constraints tight at v
};

} // namespace

Generators generators(std::span<const Constraint> constraints, std::size_t dim) {
    const std::size_t m = constraints.size();
    std::vector<Vec> lines;
    for (std::size_t i = 0; i < dim; ++i) {
        Vec e(dim, Integer(0));
        e[i] = 1;
        lines.push_back(std::move(e));
    }
    std::vector<Ray> rays;

    for (std::size_t k = 0; k < m; ++k) {
        const Vec& a = constraints[k].coef;
        const bool equality = constraints[k].equality;

        std::optional<std::size_t> pivot;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (dot(a, lines[i]) != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot) {
            Vec l = std::move(lines[*pivot]);
            lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(*pivot));
            Integer al = dot(a, l);
            if (al > 0) {
                for (Integer& x : l) {
                    x = -x;
                }
                al = -al;
            }
            // Move every other generator into the hyperplane a . z = 0.
            for (Vec& other : lines) {
                const Integer ao = dot(a, other);
                if (ao != 0) {
                    other = combine(-al, other, ao, l);
                }
            }
            for (Ray& r : rays) {
                const Integer ar = dot(a, r.v);
                if (ar != 0) {
                    r.v = combine(-al, r.v, ar, l);
                }
                r.saturated.set(k);
            }
            if (!equality) {
                Ray nr{l, boost::dynamic_bitset<>(m)};
                for (std::size_t j = 0; j < k; ++j) {
                    nr.saturated.set(j);
                }
                rays.push_back(std::move(nr));
            }
            continue;
        }

        std::vector<Integer> value(rays.size());
        std::vector<std::size_t> pos;
        std::vector<std::size_t> neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            value[i] = dot(a, rays[i].v);
            if (value[i] > 0) {
                pos.push_back(i);
            } else if (value[i] < 0) {
                neg.push_back(i);
            }
        }
        if (pos.empty() && (neg.empty() || !equality)) {
            for (std::size_t i = 0; i < rays.size(); ++i) {
                if (value[i] == 0) {
                    rays[i].saturated.set(k);
                }
            }
            continue;
        }

        const std::size_t cone_dim = dim - lines.size();
        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (value[i] == 0) {
                Ray r = rays[i];
                r.saturated.set(k);
                next.push_back(std::move(r));
            } else if (value[i] < 0 && !equality) {
                next.push_back(rays[i]);
            }
        }
        const auto adjacent = [&](std::size_t p, std::size_t q) {
            const boost::dynamic_bitset<> common = rays[p].saturated & rays[q].saturated;
            if (cone_dim >= 2 && common.count() + 2 < cone_dim) {
                return false;
            }
            for (std::size_t r = 0; r < rays.size(); ++r) {
                if (r != p && r != q && common.is_subset_of(rays[r].saturated)) {
                    return false;
                }
            }
            return true;
        };
        for (const std::size_t p : pos) {
            for (const std::size_t q : neg) {
                if (!adjacent(p, q)) {
                    continue;
                }
                Ray r{combine(value[p], rays[q].v, -value[q], rays[p].v), rays[p].saturated & rays[q].saturated};
                r.saturated.set(k);
                next.push_back(std::move(r));
            }
        }
        rays = std::move(next);
    }

    Generators g;
    g.lines = std::move(lines);
    for (Ray& r : rays) {
        g.rays.push_back(std::move(r.v));
    }
    return g;
}

} // namespace treecert::dd
