#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schottky/clusters.hpp"
#include "schottky/errors.hpp"
#include "schottky/field.hpp"
#include "schottky/hull.hpp"
#include "schottky/projline.hpp"

namespace schottky {

/// Recorded evidence for a fold: v(x_l - zeta^n x_i) = lhs > rhs + rho, rhs = v(x_l).
struct FoldWitness {
    std::size_t l = 0;
    ValRat lhs;
    ValRat rhs;
};

template <class E>
struct FoldingStep {
    std::size_t i = 0;
    std::size_t j = 0;
    long n = 1;
    std::vector<std::size_t> I;
    Mobius<E> map;
    PairedConfiguration<E> before;
    Configuration<E> after;  // pairs in index order; may contain repeats
    std::optional<FoldWitness> witness;
};

enum class VerdictKind { Good, NotGood, Redundant };
enum class NotGoodReason { InitialNotPaired, BadFoldingProduced };

inline const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Good: return "Good";
        case VerdictKind::NotGood: return "NotGood";
        case VerdictKind::Redundant: return "Redundant";
    }
    return "?";
}

inline const char* to_string(NotGoodReason r) {
    return r == NotGoodReason::InitialNotPaired ? "InitialNotPaired" : "BadFoldingProduced";
}

/**
 * Outcome of the folding algorithm.  Good carries s_min; NotGood carries the
 * reason and pairing failure (for BadFoldingProduced the offending step is
 * trace.back()); Redundant carries the set with multiplicities collapsed.
 */
template <class E>
struct Verdict {
    VerdictKind kind = VerdictKind::Good;
    std::vector<FoldingStep<E>> trace;
    std::optional<PairedConfiguration<E>> initial_pairs;
    std::optional<PairedConfiguration<E>> s_min;
    std::optional<NotGoodReason> reason;
    std::optional<PairingFailure> failure;
    Configuration<E> reduced;
};

namespace detail {

// Index of a finite point in `fin`, or nullopt for infinity.
template <class E>
std::optional<std::size_t> finite_index(const std::vector<E>& fin, const PPoint<E>& p) {
    if (p.is_infinite()) return std::nullopt;
    auto it = std::find(fin.begin(), fin.end(), p.value());
    if (it == fin.end()) throw InvalidInput("point not in configuration");
    return static_cast<std::size_t>(it - fin.begin());
}

// Smallest odd cluster containing every index in `ids`.
inline const Cluster* minimal_odd_cluster(const std::vector<Cluster>& clusters, const std::vector<std::size_t>& ids) {
    const Cluster* best = nullptr;
    for (const auto& c : clusters) {
        if (c.size() % 2 == 0) continue;
        if (!std::all_of(ids.begin(), ids.end(), [&](std::size_t k) { return c.contains(k); })) continue;
        if (!best || c.size() < best->size()) best = &c;
    }
    return best;
}

}  // namespace detail

/**
 * D_j^{(i)}: D_j when pairs i and j share their minimal odd cluster, otherwise
 * the minimal disc containing pair i and exactly one point of pair j, provided
 * some odd cluster contains pair i and exactly one point of pair j.  Absent
 * for i = g and when neither case applies.
 */
template <ValuedField F>
std::optional<Disc<typename F::Elem>> d_j_of_i(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                               std::size_t i, std::size_t j) {
    using E = typename F::Elem;
    if (i == j) throw InvalidInput("d_j_of_i: i == j");
    const std::size_t g = pc.g();
    if (i >= g || j > g) return std::nullopt;
    auto fin = finite_points(pc.points());
    auto clusters = cluster_data(f, fin);
    auto ids = [&](std::size_t k) {
        std::vector<std::size_t> out;
        for (const auto* p : {&pc.pairs[k].first, &pc.pairs[k].second})
            if (auto x = detail::finite_index(fin, *p)) out.push_back(*x);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto si = ids(i), sj = ids(j);

    if (j != g) {
        const Cluster* oi = detail::minimal_odd_cluster(clusters, si);
        const Cluster* oj = detail::minimal_odd_cluster(clusters, sj);
        if (oi && oj && oi->members == oj->members) return pair_disc(f, pc, j);
    }

    bool witnessed = std::any_of(clusters.begin(), clusters.end(), [&](const Cluster& c) {
        if (c.size() % 2 == 0) return false;
        if (!std::all_of(si.begin(), si.end(), [&](std::size_t k) { return c.contains(k); })) return false;
        return std::count_if(sj.begin(), sj.end(), [&](std::size_t k) { return c.contains(k); }) == 1;
    });
    if (!witnessed) return std::nullopt;

    std::optional<Disc<E>> best;
    const auto& [aj, bj] = pc.pairs[j];
    for (const auto* y : {&aj, &bj}) {
        if (y->is_infinite()) continue;
        const auto& other = (y == &aj) ? bj : aj;
        auto d = minimal_disc(f, std::vector<E>{pc.pairs[i].first.value(), pc.pairs[i].second.value(), y->value()});
        if (other.is_finite() && disc_contains_point(f, d, other.value())) continue;
        if (!best || d.radius > best->radius) best = d;
    }
    return best;
}

/**
 * D~_j^{(i)}: with D* = D_j^{(i)} and J = join(D_i, D*), the disc around D*
 * of radius d(D*) - rho when d(D*) - d(J) > rho, otherwise the disc around D_i
 * of radius 2 d(J) - d(D*) + rho.
 */
template <ValuedField F>
std::optional<Disc<typename F::Elem>> tilde_d_j_of_i(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                                     std::size_t i, std::size_t j) {
    auto star = d_j_of_i(f, pc, i, j);
    if (!star) return std::nullopt;
    auto di = pair_disc(f, pc, i);
    auto jn = join(f, di, *star);
    ValRat rho = f.separation_radius();
    if (star->radius - jn.radius > rho) return Disc<typename F::Elem>{star->center, star->radius - rho};
    return Disc<typename F::Elem>{di.center, 2 * jn.radius - star->radius + rho};
}

/// The j whose D~_j^{(i)} is the smallest disc strictly containing D_i; ties go to the smallest j.
template <ValuedField F>
std::size_t select_target(const F& f, const PairedConfiguration<typename F::Elem>& pc, std::size_t i) {
    auto di = pair_disc(f, pc, i);
    std::optional<std::size_t> best;
    ValRat best_radius;
    for (std::size_t j = 0; j <= pc.g(); ++j) {
        if (j == i) continue;
        auto t = tilde_d_j_of_i(f, pc, i, j);
        if (!t || !disc_strictly_contains(f, *t, di)) continue;
        if (!best || t->radius > best_radius) {
            best = j;
            best_radius = t->radius;
        }
    }
    if (!best) throw std::logic_error("select_target: no disc D~_j strictly contains D_" + std::to_string(i));
    return *best;
}

/**
 * Indices l with D_l strictly inside D~ = D~_j^{(i)} and on the same branch
 * at D~ as D_i, i.e. v(center(D_l) - center(D_i)) > d(D~).
 */
template <ValuedField F>
std::vector<std::size_t> compute_I(const F& f, const PairedConfiguration<typename F::Elem>& pc, std::size_t i,
                                   std::size_t j) {
    auto t = tilde_d_j_of_i(f, pc, i, j);
    if (!t) throw InvalidInput("compute_I: D~_j^{(i)} undefined");
    auto di = pair_disc(f, pc, i);
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l <= pc.g(); ++l) {
        auto dl = pair_disc(f, pc, l);
        if (disc_strictly_contains(f, *t, dl) && f.valuation(f.sub(dl.center, di.center)) > t->radius)
            out.push_back(l);
    }
    return out;
}

struct FoldExponent {
    long n = 1;
    FoldWitness witness;
};

/**
 * Searches n = 1..p-1, then l outside I and j, then finite c_i in pair i and
 * finite c_l in pair l, for v(x_l - zeta^n x_i) > v(x_l) + rho where
 * x = (c - a_j)/(c - b_j), or c - a_j when b_j is infinity.  First hit wins.
 */
template <ValuedField F>
std::optional<FoldExponent> find_fold_exponent(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                               std::size_t i, std::size_t j) {
    using E = typename F::Elem;
    auto I = compute_I(f, pc, i, j);
    const auto& [aj, bj] = pc.pairs[j];
    auto x = [&](const E& c) {
        auto num = f.sub(c, aj.value());
        return bj.is_infinite() ? num : f.div(num, f.sub(c, bj.value()));
    };
    ValRat rho = f.separation_radius();
    for (long n = 1; n < f.p(); ++n) {
        auto z = f.zeta_power(n);
        for (std::size_t l = 0; l <= pc.g(); ++l) {
            if (l == j || std::find(I.begin(), I.end(), l) != I.end()) continue;
            for (const auto* ci : {&pc.pairs[i].first, &pc.pairs[i].second}) {
                if (ci->is_infinite()) continue;
                auto xi = x(ci->value());
                for (const auto* cl : {&pc.pairs[l].first, &pc.pairs[l].second}) {
                    if (cl->is_infinite()) continue;
                    auto xl = x(cl->value());
                    ValRat lhs = f.valuation(f.sub(xl, f.mul(z, xi)));
                    ValRat rhs = f.valuation(xl);
                    if (lhs > rhs + rho) return FoldExponent{n, FoldWitness{l, lhs, rhs}};
                }
            }
        }
    }
    return std::nullopt;
}

/**
 * The order-p map fixing a_j, b_j that multiplies x = (z - a_j)/(z - b_j)
 * (x = z - a_j when b_j = infinity) by zeta^n, so that a witness of
 * find_fold_exponent is carried towards c_l.  The finite-pair matrix of
 * order_p_fixing scales x by zeta^-n, hence the exponent p - n there.
 */
template <ValuedField F>
Mobius<typename F::Elem> fold_map(const F& f, const PairedConfiguration<typename F::Elem>& pc, std::size_t j, long n) {
    const auto& [a, b] = pc.pairs[j];
    return order_p_fixing(f, a, b, b.is_infinite() ? n : f.p() - n);
}

/// Pairs in I_{i,j} replaced by their images under fold_map; output lists the pairs in index order.
template <ValuedField F>
Configuration<typename F::Elem> apply_folding(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                              std::size_t i, std::size_t j, long n) {
    auto I = compute_I(f, pc, i, j);
    auto m = fold_map(f, pc, j, n);
    Configuration<typename F::Elem> out;
    for (std::size_t l = 0; l <= pc.g(); ++l) {
        bool moved = std::find(I.begin(), I.end(), l) != I.end();
        const auto& [a, b] = pc.pairs[l];
        out.push_back(moved ? apply(f, m, a) : a);
        out.push_back(moved ? apply(f, m, b) : b);
    }
    return out;
}

/// Builds the full step record for folding pair set `pc` at (i, j, n).
template <ValuedField F>
FoldingStep<typename F::Elem> make_folding_step(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                                std::size_t i, std::size_t j, long n,
                                                std::optional<FoldWitness> witness) {
    FoldingStep<typename F::Elem> s;
    s.i = i;
    s.j = j;
    s.n = n;
    s.I = compute_I(f, pc, i, j);
    s.map = fold_map(f, pc, j, n);
    s.before = pc;
    s.after = apply_folding(f, pc, i, j, n);
    s.witness = std::move(witness);
    return s;
}

/**
 * Runs the folding algorithm on a configuration containing infinity.
 * Throws InvalidInput for bad cardinality or a missing infinity, and
 * std::runtime_error if more than `max_folds` folds would be needed.
 */
template <ValuedField F>
Verdict<typename F::Elem> run_algorithm(const F& f, const Configuration<typename F::Elem>& cfg,
                                        std::size_t max_folds = 100) {
    using E = typename F::Elem;
    validate_configuration(cfg);
    if (!contains_infinity(cfg)) throw InvalidInput("run_algorithm: configuration must contain infinity");

    Verdict<E> out;
    Configuration<E> current = cfg;
    for (;;) {
        auto rep = repetition_report(current);
        auto fail = [&](PairingFailure why) {
            out.kind = VerdictKind::NotGood;
            out.reason = out.trace.empty() ? NotGoodReason::InitialNotPaired : NotGoodReason::BadFoldingProduced;
            out.failure = why;
            return out;
        };
        if (rep.distinct_repeated > 0 && rep.distinct_repeated % 2 == 0) {
            out.kind = VerdictKind::Redundant;
            out.reduced = rep.underlying;
            return out;
        }
        if (rep.distinct_repeated % 2 == 1) return fail(PairingFailure::NotClusteredInPairs);
        if (!contains_infinity(current))
            throw std::runtime_error("run_algorithm: a fold moved infinity; configuration left the normal form");

        auto paired = pair_up(f, current);
        if (!paired) return fail(*paired.failure);
        const auto& pc = *paired.paired;
        if (!out.initial_pairs) out.initial_pairs = pc;

        bool folded = false;
        for (std::size_t i = 0; i < pc.g() && !folded; ++i) {
            auto j = select_target(f, pc, i);
            auto hit = find_fold_exponent(f, pc, i, j);
            if (!hit) continue;
            if (out.trace.size() >= max_folds)
                throw std::runtime_error("run_algorithm: exceeded " + std::to_string(max_folds) + " folds");
            out.trace.push_back(make_folding_step(f, pc, i, j, hit->n, hit->witness));
            current = out.trace.back().after;
            folded = true;
        }
        if (!folded) {
            out.kind = VerdictKind::Good;
            out.s_min = pc;
            return out;
        }
    }
}

/// Pairwise distances between distinguished vertices before a fold and between their images after it.
struct DistanceChange {
    std::vector<ValRat> before;
    std::vector<ValRat> after;

    bool non_increasing() const {
        for (std::size_t k = 0; k < before.size(); ++k)
            if (after[k] > before[k]) return false;
        return true;
    }
    bool some_strict_decrease() const {
        for (std::size_t k = 0; k < before.size(); ++k)
            if (after[k] < before[k]) return true;
        return false;
    }
};

/**
 * Follows each distinguished vertex of the hull of step.before through the
 * fold: vertices on the branch of D_i below D~_j^{(i)} move by the fold map,
 * all others stay put.
 */
template <ValuedField F>
DistanceChange fold_distance_change(const F& f, const FoldingStep<typename F::Elem>& step) {
    using E = typename F::Elem;
    auto tree = reduced_convex_hull(f, step.before);
    auto fin = finite_points(step.before.points());
    auto t = *tilde_d_j_of_i(f, step.before, step.i, step.j);
    auto di = pair_disc(f, step.before, step.i);
    std::vector<Disc<E>> src, dst;
    for (const auto& v : tree.vertices) {
        if (!v.distinguished) continue;
        src.push_back(v.disc);
        bool moves = disc_strictly_contains(f, t, v.disc) && f.valuation(f.sub(v.disc.center, di.center)) > t.radius;
        dst.push_back(moves ? transport_vertex(f, step.map, v.disc, fin) : v.disc);
    }
    DistanceChange out;
    for (std::size_t a = 0; a < src.size(); ++a)
        for (std::size_t b = a + 1; b < src.size(); ++b) {
            out.before.push_back(delta(f, src[a], src[b]));
            out.after.push_back(delta(f, dst[a], dst[b]));
        }
    return out;
}

enum class FoldingClass { Good, Bad, Neither };

inline const char* to_string(FoldingClass c) {
    switch (c) {
        case FoldingClass::Good: return "good";
        case FoldingClass::Bad: return "bad";
        case FoldingClass::Neither: return "neither";
    }
    return "?";
}

/// Bad when the result is not clustered in separated pairs; good when it is and the step had a witness.
template <ValuedField F>
FoldingClass classify_folding(const F& f, const FoldingStep<typename F::Elem>& step) {
    if (!pair_up(f, step.after)) return FoldingClass::Bad;
    return step.witness ? FoldingClass::Good : FoldingClass::Neither;
}

}  // namespace schottky
