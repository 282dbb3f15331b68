#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/field.hpp"
#include "schottky/projline.hpp"

namespace schottky {

/// A finite multiset of points of P^1(K).
template <class E>
using Configuration = std::vector<PPoint<E>>;

/// A cluster of the finite points, as sorted indices into finite_points(cfg).
struct Cluster {
    std::vector<std::size_t> members;
    ValRat depth;  // min pairwise valuation; infinity for a singleton

    std::size_t size() const { return members.size(); }
    bool contains(std::size_t k) const { return std::binary_search(members.begin(), members.end(), k); }
    bool subset_of(const Cluster& o) const {
        return std::includes(o.members.begin(), o.members.end(), members.begin(), members.end());
    }
};

/// Labeled pairs (a_i, b_i), i = 0..g, with b_g = infinity when infinity is present.
template <class E>
struct PairedConfiguration {
    std::vector<std::pair<PPoint<E>, PPoint<E>>> pairs;

    std::size_t g() const { return pairs.size() - 1; }
    Configuration<E> points() const {
        Configuration<E> out;
        for (const auto& [a, b] : pairs) {
            out.push_back(a);
            out.push_back(b);
        }
        return out;
    }
};

enum class PairingFailure { NotClusteredInPairs, NotSeparated };

inline const char* to_string(PairingFailure f) {
    return f == PairingFailure::NotClusteredInPairs ? "NotClusteredInPairs" : "NotSeparated";
}

template <class E>
struct PairingResult {
    std::optional<PairedConfiguration<E>> paired;
    std::optional<PairingFailure> failure;

    explicit operator bool() const { return paired.has_value(); }
};

/// Throws InvalidInput unless the multiset has even cardinality >= 4 and at most one infinity.
template <class E>
void validate_configuration(const Configuration<E>& cfg) {
    if (cfg.size() < 4 || cfg.size() % 2 != 0)
        throw InvalidInput("configuration needs an even number >= 4 of points, got " + std::to_string(cfg.size()));
    auto infs = std::count_if(cfg.begin(), cfg.end(), [](const auto& p) { return p.is_infinite(); });
    if (infs > 1) throw InvalidInput("configuration contains infinity more than once");
}

template <class E>
std::vector<E> finite_points(const Configuration<E>& cfg) {
    std::vector<E> out;
    for (const auto& p : cfg)
        if (p.is_finite()) out.push_back(p.value());
    return out;
}

template <class E>
bool contains_infinity(const Configuration<E>& cfg) {
    return std::any_of(cfg.begin(), cfg.end(), [](const auto& p) { return p.is_infinite(); });
}

/**
 * Every cluster of a finite point list with its depth.  Each cluster is of
 * the form {z : v(z - x_i) >= r} with r one of the pairwise valuations, plus
 * the singletons.  Sorted by decreasing size, then by member indices.
 */
template <ValuedField F>
std::vector<Cluster> cluster_data(const F& f, const std::vector<typename F::Elem>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<ValRat>> dist(n, std::vector<ValRat>(n, ValRat::infinity()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = f.valuation(f.sub(pts[i], pts[j]));

    std::vector<std::vector<std::size_t>> found;
    for (std::size_t i = 0; i < n; ++i) {
        found.push_back({i});
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::vector<std::size_t> members;
            for (std::size_t k = 0; k < n; ++k)
                if (k == i || dist[i][k] >= dist[i][j]) members.push_back(k);
            found.push_back(std::move(members));
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        return x.size() != y.size() ? x.size() > y.size() : x < y;
    });
    found.erase(std::unique(found.begin(), found.end()), found.end());

    std::vector<Cluster> out;
    for (auto& m : found) {
        ValRat d = ValRat::infinity();
        for (std::size_t x = 0; x < m.size(); ++x)
            for (std::size_t y = x + 1; y < m.size(); ++y) d = min(d, dist[m[x]][m[y]]);
        out.push_back(Cluster{std::move(m), d});
    }
    return out;
}

template <ValuedField F>
std::vector<Cluster> cluster_data(const F& f, const Configuration<typename F::Elem>& cfg) {
    return cluster_data(f, finite_points(cfg));
}

/**
 * Tree distance between the axes [a, b] and [c, d] of the Berkovich line, from
 * the four-point condition: max(0, v(a-b) + v(c-d) - max of the two cross sums
 * v(a-c) + v(b-d), v(a-d) + v(b-c)).  At most one of the four may be infinity;
 * its terms cancel.
 */
template <ValuedField F>
ValRat axis_distance(const F& f, PPoint<typename F::Elem> a, PPoint<typename F::Elem> b, PPoint<typename F::Elem> c,
                     PPoint<typename F::Elem> d) {
    if (a.is_infinite() || b.is_infinite()) {
        std::swap(a, c);
        std::swap(b, d);
    }
    if (c.is_infinite()) std::swap(c, d);
    if (a.is_infinite() || b.is_infinite() || c.is_infinite())
        throw InvalidInput("axis_distance: at most one point may be infinity");
    auto v = [&](const auto& x, const auto& y) { return point_distance_valuation(f, x, y); };
    ValRat t1, t2;
    if (d.is_infinite()) {
        t1 = v(a, b) - v(a, c);
        t2 = v(a, b) - v(b, c);
    } else {
        ValRat s = v(a, b) + v(c, d);
        t1 = s - (v(a, c) + v(b, d));
        t2 = s - (v(a, d) + v(b, c));
    }
    return max(ValRat(0), min(t1, t2));
}

namespace detail {

template <ValuedField F>
std::pair<PPoint<typename F::Elem>, PPoint<typename F::Elem>> ordered_pair(const F& f, PPoint<typename F::Elem> x,
                                                                             PPoint<typename F::Elem> y) {
    if (point_less(f, y, x)) std::swap(x, y);
    return {std::move(x), std::move(y)};
}

}  // namespace detail

/**
 * Canonical index order: finite pairs by decreasing v(a - b), ties by
 * decreasing b then decreasing a; the pair containing infinity last.
 * Within a pair a < b in the canonical point order.
 */
template <ValuedField F>
PairedConfiguration<typename F::Elem> canonical_pair_order(
    const F& f, std::vector<std::pair<PPoint<typename F::Elem>, PPoint<typename F::Elem>>> pairs) {
    for (auto& pr : pairs) pr = detail::ordered_pair(f, pr.first, pr.second);
    auto depth = [&](const auto& pr) {
        return pr.second.is_infinite() ? ValRat(0) : point_distance_valuation(f, pr.first, pr.second);
    };
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
        bool xi = x.second.is_infinite(), yi = y.second.is_infinite();
        if (xi != yi) return yi;
        if (xi) return point_less(f, x.first, y.first);
        ValRat dx = depth(x), dy = depth(y);
        if (!(dx == dy)) return dx > dy;
        if (!(x.second == y.second)) return point_less(f, y.second, x.second);
        return point_less(f, y.first, x.first);
    });
    return PairedConfiguration<typename F::Elem>{std::move(pairs)};
}

/**
 * Tests whether the points are clustered in rho-separated pairs.  The pairs
 * are the classes of "lies in the same even-cardinality clusters"; each class
 * must have size 2, and every two pair axes must be more than 2 rho apart.
 */
template <ValuedField F>
PairingResult<typename F::Elem> pair_up(const F& f, const Configuration<typename F::Elem>& cfg) {
    using P = PPoint<typename F::Elem>;
    PairingResult<typename F::Elem> res;
    for (std::size_t i = 0; i < cfg.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.size(); ++j)
            if (cfg[i] == cfg[j]) {
                res.failure = PairingFailure::NotClusteredInPairs;
                return res;
            }

    auto fin = finite_points(cfg);
    auto clusters = cluster_data(f, fin);
    std::vector<const Cluster*> even;
    for (const auto& c : clusters)
        if (c.size() % 2 == 0) even.push_back(&c);

    // Point ids: finite points 0..n-1, infinity (if any) n.
    std::map<std::vector<bool>, std::vector<std::size_t>> classes;
    std::vector<std::vector<bool>> keys;
    const std::size_t n = fin.size();
    const std::size_t total = n + (contains_infinity(cfg) ? 1 : 0);
    for (std::size_t z = 0; z < total; ++z) {
        std::vector<bool> key(even.size(), false);
        if (z < n)
            for (std::size_t e = 0; e < even.size(); ++e) key[e] = even[e]->contains(z);
        classes[key].push_back(z);
    }
    std::vector<std::pair<P, P>> pairs;
    auto point_of = [&](std::size_t z) { return z < n ? P::finite(fin[z]) : P::infinity(); };
    for (const auto& [key, members] : classes) {
        if (members.size() != 2) {
            res.failure = PairingFailure::NotClusteredInPairs;
            return res;
        }
        pairs.emplace_back(point_of(members[0]), point_of(members[1]));
    }

    ValRat margin = 2 * f.separation_radius();
    for (std::size_t x = 0; x < pairs.size(); ++x)
        for (std::size_t y = x + 1; y < pairs.size(); ++y)
            if (axis_distance(f, pairs[x].first, pairs[x].second, pairs[y].first, pairs[y].second) <= margin) {
                res.failure = PairingFailure::NotSeparated;
                return res;
            }
    res.paired = canonical_pair_order(f, std::move(pairs));
    return res;
}

/// True when both pairings consist of the same unordered pairs.
template <ValuedField F>
bool same_pairing(const F& f, const PairedConfiguration<typename F::Elem>& x,
                  const PairedConfiguration<typename F::Elem>& y) {
    if (x.pairs.size() != y.pairs.size()) return false;
    auto cx = canonical_pair_order(f, x.pairs);
    auto cy = canonical_pair_order(f, y.pairs);
    return cx.pairs == cy.pairs;
}

template <class E>
struct RepetitionReport {
    long distinct_repeated = 0;
    Configuration<E> underlying;
};

/// Counts distinct values of multiplicity >= 2 and collapses multiplicities (first occurrence order).
template <class E>
RepetitionReport<E> repetition_report(const Configuration<E>& cfg) {
    RepetitionReport<E> r;
    std::vector<long> mult;
    for (const auto& p : cfg) {
        auto it = std::find(r.underlying.begin(), r.underlying.end(), p);
        if (it == r.underlying.end()) {
            r.underlying.push_back(p);
            mult.push_back(1);
        } else {
            ++mult[static_cast<std::size_t>(it - r.underlying.begin())];
        }
    }
    r.distinct_repeated = std::count_if(mult.begin(), mult.end(), [](long m) { return m >= 2; });
    return r;
}

}  // namespace schottky
