#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "schottky/clusters.hpp"
#include "schottky/field.hpp"
#include "schottky/folding.hpp"
#include "schottky/projline.hpp"

namespace schottky {

struct Syllable {
    std::size_t index = 0;
    long exponent = 1;

    friend bool operator==(const Syllable&, const Syllable&) = default;
};

/// Reduced word s_{i_1}^{e_1} ... s_{i_k}^{e_k} in the free product of g+1 cyclic groups of order p.
struct GroupWord {
    std::vector<Syllable> syllables;

    std::size_t length() const { return syllables.size(); }
    std::string to_string() const {
        std::string out;
        for (const auto& s : syllables) {
            if (!out.empty()) out += ' ';
            out += "s" + std::to_string(s.index);
            if (s.exponent != 1) out += "^" + std::to_string(s.exponent);
        }
        return out;
    }

    friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

/**
 * Visits every reduced word of length 1..max_len whose exponent sum is
 * divisible by p, in length-lexicographic order on (index, exponent).
 * The visitor returns false to stop early.
 */
inline void for_each_gamma_word(std::size_t g, long p, std::size_t max_len,
                                const std::function<bool(const GroupWord&)>& visit) {
    GroupWord w;
    bool stop = false;
    std::function<void(std::size_t, long)> rec = [&](std::size_t remaining, long sum) {
        if (stop) return;
        if (remaining == 0) {
            if (sum % p == 0 && !visit(w)) stop = true;
            return;
        }
        for (std::size_t i = 0; i <= g && !stop; ++i) {
            if (!w.syllables.empty() && w.syllables.back().index == i) continue;
            for (long e = 1; e < p && !stop; ++e) {
                w.syllables.push_back({i, e});
                rec(remaining - 1, sum + e);
                w.syllables.pop_back();
            }
        }
    };
    for (std::size_t len = 1; len <= max_len && !stop; ++len) rec(len, 0);
}

inline std::vector<GroupWord> enumerate_gamma_words(std::size_t g, long p, std::size_t max_len) {
    std::vector<GroupWord> out;
    for_each_gamma_word(g, p, max_len, [&](const GroupWord& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

/**
 * The order-p generator fixing a and b with multiplier zeta^{-1} at a (and
 * zeta at b).  Mobius conjugation preserves this normalisation, so
 * pair_generator(m a, m b) = m pair_generator(a, b) m^{-1}.
 */
template <ValuedField F>
Mobius<typename F::Elem> pair_generator(const F& f, const PPoint<typename F::Elem>& a,
                                        const PPoint<typename F::Elem>& b) {
    if (a.is_infinite()) return order_p_fixing(f, b, a, 1);
    if (b.is_infinite()) return order_p_fixing(f, a, b, f.p() - 1);
    return order_p_fixing(f, a, b, 1);
}

template <ValuedField F>
Mobius<typename F::Elem> evaluate_word(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                       const GroupWord& w) {
    auto m = identity_mobius(f);
    for (const auto& s : w.syllables) {
        const auto& [a, b] = pc.pairs.at(s.index);
        m = compose(f, m, power(f, pair_generator(f, a, b), s.exponent));
    }
    return m;
}

template <class E>
struct AuditWitness {
    GroupWord word;
    ElementClass cls;
    Mobius<E> matrix;
};

template <class E>
struct AuditResult {
    std::optional<AuditWitness<E>> witness;   // first non-loxodromic, non-identity word
    std::optional<GroupWord> relation;        // first word evaluating to the identity
    std::size_t words_checked = 0;
};

/**
 * Evaluates every word of the index-p subgroup up to max_len (prefix
 * products are shared along the search and left unscaled).  Returns at the first elliptic or
 * parabolic element; identities are recorded as relations and the search
 * continues.  A clean result only says nothing was found up to max_len.
 */
template <ValuedField F>
AuditResult<typename F::Elem> schottky_audit(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                             std::size_t max_len) {
    using E = typename F::Elem;
    const std::size_t g = pc.g();
    const long p = f.p();
    std::vector<std::vector<Mobius<E>>> powers(g + 1);
    for (std::size_t i = 0; i <= g; ++i) {
        auto s = pair_generator(f, pc.pairs[i].first, pc.pairs[i].second);
        powers[i].push_back(identity_mobius(f));
        for (long e = 1; e < p; ++e) powers[i].push_back(compose(f, powers[i].back(), s));
    }

    AuditResult<E> res;
    GroupWord w;
    std::vector<Mobius<E>> prefix{identity_mobius(f)};
    bool stop = false;
    std::function<void(std::size_t, long)> rec = [&](std::size_t remaining, long sum) {
        if (stop) return;
        if (remaining == 0) {
            if (sum % p != 0) return;
            ++res.words_checked;
            auto cls = classify(f, prefix.back());
            if (cls.kind == ElementKind::Identity) {
                if (!res.relation) res.relation = w;
            } else if (cls.kind != ElementKind::Loxodromic) {
                res.witness = AuditWitness<E>{w, cls, canonicalize(f, prefix.back())};
                stop = true;
            }
            return;
        }
        for (std::size_t i = 0; i <= g && !stop; ++i) {
            if (!w.syllables.empty() && w.syllables.back().index == i) continue;
            for (long e = 1; e < p && !stop; ++e) {
                w.syllables.push_back({i, e});
                prefix.push_back(multiply(f, prefix.back(), powers[i][static_cast<std::size_t>(e)]));
                rec(remaining - 1, sum + e);
                prefix.pop_back();
                w.syllables.pop_back();
            }
        }
    };
    for (std::size_t len = 1; len <= max_len && !stop; ++len) rec(len, 0);
    return res;
}

/// Every non-loxodromic, non-identity word up to max_len, in enumeration order.
template <ValuedField F>
std::vector<GroupWord> non_loxodromic_words(const F& f, const PairedConfiguration<typename F::Elem>& pc,
                                            std::size_t max_len) {
    std::vector<GroupWord> out;
    for_each_gamma_word(pc.g(), f.p(), max_len, [&](const GroupWord& w) {
        auto k = classify(f, evaluate_word(f, pc, w)).kind;
        if (k != ElementKind::Loxodromic && k != ElementKind::Identity) out.push_back(w);
        return true;
    });
    return out;
}

/// For each l in I: the generator of the folded pair equals map * s_l * map^{-1} up to scalar.
template <ValuedField F>
bool verify_fold_conjugation(const F& f, const FoldingStep<typename F::Elem>& step) {
    auto m_inv = inverse(f, step.map);
    for (auto l : step.I) {
        const auto& [a, b] = step.before.pairs.at(l);
        const auto& a2 = step.after.at(2 * l);
        const auto& b2 = step.after.at(2 * l + 1);
        if (a2 == b2) return false;
        auto expect = compose(f, compose(f, step.map, pair_generator(f, a, b)), m_inv);
        if (!projectively_equal(f, pair_generator(f, a2, b2), expect)) return false;
    }
    return true;
}

}  // namespace schottky
