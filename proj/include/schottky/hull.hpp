#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "schottky/clusters.hpp"
#include "schottky/errors.hpp"
#include "schottky/field.hpp"
#include "schottky/projline.hpp"

namespace schottky {

/// Closed disc {z : v(z - center) >= radius}; radius is finite.
template <class E>
struct Disc {
    E center;
    ValRat radius;
};

template <ValuedField F>
bool disc_contains_point(const F& f, const Disc<typename F::Elem>& d, const typename F::Elem& x) {
    return f.valuation(f.sub(x, d.center)) >= d.radius;
}

/// outer ⊇ inner
template <ValuedField F>
bool disc_contains(const F& f, const Disc<typename F::Elem>& outer, const Disc<typename F::Elem>& inner) {
    return inner.radius >= outer.radius && disc_contains_point(f, outer, inner.center);
}

template <ValuedField F>
bool disc_equal(const F& f, const Disc<typename F::Elem>& x, const Disc<typename F::Elem>& y) {
    return x.radius == y.radius && disc_contains_point(f, x, y.center);
}

/// outer ⊋ inner
template <ValuedField F>
bool disc_strictly_contains(const F& f, const Disc<typename F::Elem>& outer, const Disc<typename F::Elem>& inner) {
    return disc_contains(f, outer, inner) && !(outer.radius == inner.radius);
}

/// Smallest disc containing both.
template <ValuedField F>
Disc<typename F::Elem> join(const F& f, const Disc<typename F::Elem>& x, const Disc<typename F::Elem>& y) {
    return Disc<typename F::Elem>{x.center, min(min(x.radius, y.radius), f.valuation(f.sub(x.center, y.center)))};
}

/// Path distance between the corresponding Berkovich points.
template <ValuedField F>
ValRat delta(const F& f, const Disc<typename F::Elem>& x, const Disc<typename F::Elem>& y) {
    return x.radius + y.radius - 2 * join(f, x, y).radius;
}

/// Smallest disc containing at least two distinct points.
template <ValuedField F>
Disc<typename F::Elem> minimal_disc(const F& f, const std::vector<typename F::Elem>& pts) {
    if (pts.empty()) throw InvalidInput("minimal_disc: no points");
    ValRat r = ValRat::infinity();
    for (std::size_t k = 1; k < pts.size(); ++k) r = min(r, f.valuation(f.sub(pts[k], pts[0])));
    if (r.is_infinite()) throw InvalidInput("minimal_disc: needs two distinct points");
    return Disc<typename F::Elem>{pts[0], r};
}

/**
 * D_i: the smallest disc containing a_i and b_i, or, for the pair containing
 * infinity, the smallest disc containing every finite point.
 */
template <ValuedField F>
Disc<typename F::Elem> pair_disc(const F& f, const PairedConfiguration<typename F::Elem>& pc, std::size_t i) {
    const auto& [a, b] = pc.pairs.at(i);
    if (a.is_infinite() || b.is_infinite()) return minimal_disc(f, finite_points(pc.points()));
    return minimal_disc(f, std::vector<typename F::Elem>{a.value(), b.value()});
}

/**
 * Distance from the point of D to the axis [a, b]:
 * d(D) - r_a - r_b + v(a - b), where r_x is the radius of the join of D and x
 * (for b = infinity this reduces to d(D) - r_a).
 */
template <ValuedField F>
ValRat distance_to_axis(const F& f, const Disc<typename F::Elem>& d, const PPoint<typename F::Elem>& a,
                        const PPoint<typename F::Elem>& b) {
    auto r_of = [&](const PPoint<typename F::Elem>& x) { return min(d.radius, f.valuation(f.sub(x.value(), d.center))); };
    if (a.is_infinite() && b.is_infinite()) throw InvalidInput("distance_to_axis: degenerate axis");
    if (a.is_infinite()) return d.radius - r_of(b);
    if (b.is_infinite()) return d.radius - r_of(a);
    return d.radius - r_of(a) - r_of(b) + f.valuation(f.sub(a.value(), b.value()));
}

/**
 * Image of a disc under a Mobius map, or nullopt when the pole lies in the
 * disc (the image would then contain infinity).
 */
template <ValuedField F>
std::optional<Disc<typename F::Elem>> image_disc(const F& f, const Mobius<typename F::Elem>& m,
                                                 const Disc<typename F::Elem>& d) {
    auto centre = apply(f, m, PPoint<typename F::Elem>::finite(d.center));
    if (f.is_zero(m.c))
        return Disc<typename F::Elem>{centre.value(), d.radius + f.valuation(m.a) - f.valuation(m.d)};
    auto shift = f.div(m.d, m.c);
    auto w0 = f.add(d.center, shift);
    ValRat vw = f.valuation(w0);
    if (vw >= d.radius) return std::nullopt;
    ValRat r = d.radius - 2 * vw + f.valuation(determinant(f, m)) - 2 * f.valuation(m.c);
    return Disc<typename F::Elem>{centre.value(), r};
}

/// The point where the paths between three distinct points of P^1 meet.
template <ValuedField F>
Disc<typename F::Elem> median_point(const F& f, PPoint<typename F::Elem> x, PPoint<typename F::Elem> y,
                                    PPoint<typename F::Elem> z) {
    if (x == y || y == z || x == z) throw InvalidInput("median_point: points must be distinct");
    if (x.is_infinite()) std::swap(x, z);
    if (y.is_infinite()) std::swap(y, z);
    if (z.is_infinite()) return Disc<typename F::Elem>{x.value(), f.valuation(f.sub(x.value(), y.value()))};
    ValRat vxy = f.valuation(f.sub(x.value(), y.value()));
    ValRat vxz = f.valuation(f.sub(x.value(), z.value()));
    ValRat vyz = f.valuation(f.sub(y.value(), z.value()));
    if (vyz > vxy && vyz > vxz) return Disc<typename F::Elem>{y.value(), vyz};
    return Disc<typename F::Elem>{x.value(), max(vxy, vxz)};
}

/// Two points x, y of `pts` with D = join of x and y; throws if D is not spanned by `pts`.
template <ValuedField F>
std::pair<typename F::Elem, typename F::Elem> spanning_points(const F& f, const Disc<typename F::Elem>& d,
                                                             const std::vector<typename F::Elem>& pts) {
    for (const auto& x : pts) {
        if (!disc_contains_point(f, d, x)) continue;
        for (const auto& y : pts)
            if (disc_contains_point(f, d, y) && f.valuation(f.sub(x, y)) == d.radius) return {x, y};
    }
    throw InvalidInput("spanning_points: disc is not the join of two given points");
}

/// Image of the point of a spanned disc under a Mobius map, via its three generating points.
template <ValuedField F>
Disc<typename F::Elem> transport_vertex(const F& f, const Mobius<typename F::Elem>& m,
                                        const Disc<typename F::Elem>& d, const std::vector<typename F::Elem>& pts) {
    using P = PPoint<typename F::Elem>;
    auto [x, y] = spanning_points(f, d, pts);
    return median_point(f, apply(f, m, P::finite(x)), apply(f, m, P::finite(y)), apply(f, m, P::infinity()));
}

template <class E>
struct SkeletonVertex {
    std::size_t id = 0;
    Disc<E> disc;
    bool distinguished = false;
    std::optional<std::size_t> pair_index;
    std::size_t component = 0;
};

struct SkeletonEdge {
    std::size_t u = 0, v = 0;
    ValRat length;
};

/// The reduced convex hull as a finite metric forest.
template <class E>
struct SkeletonTree {
    std::vector<SkeletonVertex<E>> vertices;
    std::vector<SkeletonEdge> edges;
    std::size_t component_count = 0;

    std::size_t valency(std::size_t id) const {
        return static_cast<std::size_t>(
            std::count_if(edges.begin(), edges.end(), [&](const SkeletonEdge& e) { return e.u == id || e.v == id; }));
    }
    std::size_t distinguished_count() const {
        return static_cast<std::size_t>(std::count_if(vertices.begin(), vertices.end(),
                                                      [](const auto& v) { return v.distinguished; }));
    }
};

/**
 * Builds the reduced convex hull of a paired configuration containing
 * infinity.  Vertices come from minimal discs of clusters of size >= 2; the
 * segment above a cluster survives exactly when the cluster has even size.
 * Distinguished vertices are the pair discs D_i and the minimal discs of odd
 * clusters of size 3..2g-1; non-distinguished vertices of valency 2 are
 * merged into their edges.
 */
template <ValuedField F>
SkeletonTree<typename F::Elem> reduced_convex_hull(const F& f, const PairedConfiguration<typename F::Elem>& pc) {
    using E = typename F::Elem;
    auto pts = pc.points();
    if (!contains_infinity(pts)) throw NotPaired("reduced_convex_hull: configuration must contain infinity");
    auto check = pair_up(f, pts);
    if (!check || !same_pairing(f, *check.paired, pc))
        throw NotPaired("reduced_convex_hull: configuration is not clustered in separated pairs");

    auto fin = finite_points(pts);
    const std::size_t n = fin.size();
    const std::size_t g = pc.g();
    auto all = cluster_data(f, fin);
    std::vector<Cluster> nodes;
    for (auto& c : all)
        if (c.size() >= 2) nodes.push_back(c);
    const std::size_t m = nodes.size();

    auto index_of = [&](const PPoint<E>& p) -> std::optional<std::size_t> {
        if (p.is_infinite()) return std::nullopt;
        for (std::size_t k = 0; k < n; ++k)
            if (fin[k] == p.value()) return k;
        return std::nullopt;
    };

    // parent: smallest strictly larger cluster (nodes are sorted by decreasing size)
    std::vector<std::optional<std::size_t>> parent(m);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
            if (nodes[y].size() > nodes[x].size() && nodes[x].subset_of(nodes[y]) &&
                (!parent[x] || nodes[y].size() < nodes[*parent[x]].size()))
                parent[x] = y;

    std::vector<bool> dist(m, false);
    std::vector<std::optional<std::size_t>> pidx(m);
    for (std::size_t i = 0; i <= g; ++i) {
        auto ia = index_of(pc.pairs[i].first), ib = index_of(pc.pairs[i].second);
        std::optional<std::size_t> best;
        for (std::size_t x = 0; x < m; ++x) {
            bool ok = (!ia || nodes[x].contains(*ia)) && (!ib || nodes[x].contains(*ib));
            if (ia && ib) {
                if (ok && (!best || nodes[x].size() < nodes[*best].size())) best = x;
            } else if (nodes[x].size() == n) {
                best = x;
            }
        }
        dist[*best] = true;
        pidx[*best] = i;
    }
    for (std::size_t x = 0; x < m; ++x) {
        const auto s = nodes[x].size();
        if (s % 2 == 0 || s < 3 || s >= n) continue;
        dist[x] = true;
        for (std::size_t i = 0; i <= g; ++i) {
            auto ia = index_of(pc.pairs[i].first), ib = index_of(pc.pairs[i].second);
            int inside = (ia && nodes[x].contains(*ia) ? 1 : 0) + (ib && nodes[x].contains(*ib) ? 1 : 0);
            if (inside == 1) pidx[x] = i;
        }
    }

    struct RawEdge {
        std::size_t u, v;
        ValRat len;
    };
    std::vector<RawEdge> raw;
    for (std::size_t x = 0; x < m; ++x)
        if (parent[x] && nodes[x].size() % 2 == 0)
            raw.push_back({x, *parent[x], nodes[x].depth - nodes[*parent[x]].depth});

    std::vector<bool> alive(m, true);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t x = 0; x < m; ++x) {
            if (!alive[x] || dist[x]) continue;
            std::vector<std::size_t> inc;
            for (std::size_t e = 0; e < raw.size(); ++e)
                if (raw[e].u == x || raw[e].v == x) inc.push_back(e);
            if (inc.size() != 2) continue;
            auto other = [&](const RawEdge& e) { return e.u == x ? e.v : e.u; };
            RawEdge merged{other(raw[inc[0]]), other(raw[inc[1]]), raw[inc[0]].len + raw[inc[1]].len};
            raw.erase(raw.begin() + static_cast<std::ptrdiff_t>(inc[1]));
            raw.erase(raw.begin() + static_cast<std::ptrdiff_t>(inc[0]));
            raw.push_back(merged);
            alive[x] = false;
            changed = true;
        }
    }

    // Vertex order: pair discs by pair index, other distinguished by pair index
    // then decreasing radius, then branch vertices by radius and centre.
    auto centre_of = [&](std::size_t x) {
        std::size_t best = nodes[x].members.front();
        for (auto k : nodes[x].members)
            if (f.less(fin[k], fin[best])) best = k;
        return fin[best];
    };
    std::vector<std::size_t> order;
    for (std::size_t x = 0; x < m; ++x)
        if (alive[x]) order.push_back(x);
    auto is_pair_disc = [&](std::size_t x) {
        if (!dist[x]) return false;
        const auto& [a, b] = pc.pairs[*pidx[x]];
        auto ia = index_of(a), ib = index_of(b);
        if (!ia || !ib) return nodes[x].size() == n;
        return nodes[x].contains(*ia) && nodes[x].contains(*ib);
    };
    auto rank = [&](std::size_t x) { return is_pair_disc(x) ? 0 : (dist[x] ? 1 : 2); };
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (rank(x) != rank(y)) return rank(x) < rank(y);
        if (rank(x) < 2 && *pidx[x] != *pidx[y]) return *pidx[x] < *pidx[y];
        if (!(nodes[x].depth == nodes[y].depth))
            return rank(x) < 2 ? nodes[x].depth > nodes[y].depth : nodes[x].depth < nodes[y].depth;
        return f.less(centre_of(x), centre_of(y));
    });
    std::vector<std::size_t> id_of(m, 0);
    for (std::size_t k = 0; k < order.size(); ++k) id_of[order[k]] = k;

    SkeletonTree<E> tree;
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto x = order[k];
        tree.vertices.push_back(
            SkeletonVertex<E>{k, Disc<E>{centre_of(x), nodes[x].depth}, static_cast<bool>(dist[x]), pidx[x], 0});
    }
    for (const auto& e : raw) {
        auto u = id_of[e.u], v = id_of[e.v];
        tree.edges.push_back(SkeletonEdge{std::min(u, v), std::max(u, v), e.len});
    }
    std::sort(tree.edges.begin(), tree.edges.end(),
              [](const SkeletonEdge& x, const SkeletonEdge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });

    std::vector<std::size_t> comp(order.size());
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (const auto& e : tree.edges) {
        auto ru = find(e.u), rv = find(e.v);
        if (ru != rv) comp[std::max(ru, rv)] = std::min(ru, rv);
    }
    std::vector<std::optional<std::size_t>> label(order.size());
    for (auto& v : tree.vertices) {
        auto r = find(v.id);
        if (!label[r]) label[r] = tree.component_count++;
        v.component = *label[r];
    }
    return tree;
}

/// Every distinguished vertex has valency at most 1.
template <class E>
bool is_trivially_optimal(const SkeletonTree<E>& tree) {
    return std::all_of(tree.vertices.begin(), tree.vertices.end(),
                       [&](const auto& v) { return !v.distinguished || tree.valency(v.id) <= 1; });
}

/// For each component, the pairs whose axis has a distinguished vertex there (original index order).
template <class E>
std::vector<PairedConfiguration<E>> split_by_components(const PairedConfiguration<E>& pc, const SkeletonTree<E>& tree) {
    std::vector<PairedConfiguration<E>> out(tree.component_count);
    for (std::size_t c = 0; c < tree.component_count; ++c) {
        std::set<std::size_t> idx;
        for (const auto& v : tree.vertices)
            if (v.component == c && v.distinguished && v.pair_index) idx.insert(*v.pair_index);
        for (auto i : idx) out[c].pairs.push_back(pc.pairs[i]);
    }
    return out;
}

/// Graphviz rendering; one subgraph per component.
template <ValuedField F>
std::string to_dot(const F& f, const SkeletonTree<typename F::Elem>& tree, const std::string& name = "skeleton") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (std::size_t c = 0; c < tree.component_count; ++c) {
        os << "  subgraph cluster_" << c << " {\n";
        os << "    label=\"component " << c << "\";\n";
        for (const auto& v : tree.vertices) {
            if (v.component != c) continue;
            os << "    v" << v.id << " [label=\"v" << v.id;
            if (v.pair_index) os << "\\npair " << *v.pair_index;
            os << "\\nD(" << f.to_string(v.disc.center) << ", " << v.disc.radius.to_string() << ")\"";
            os << ", shape=" << (v.distinguished ? "doublecircle" : "point") << "];\n";
        }
        os << "  }\n";
    }
    for (const auto& e : tree.edges)
        os << "  v" << e.u << " -- v" << e.v << " [label=\"" << e.length.to_string() << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace schottky
