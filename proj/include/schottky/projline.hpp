#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/field.hpp"

namespace schottky {

/// A point of P^1(K): a field element or infinity.
template <class E>
class PPoint {
public:
    PPoint() : x_(std::nullopt) {}
    static PPoint infinity() { return PPoint(); }
    static PPoint finite(E x) {
        PPoint p;
        p.x_ = std::move(x);
        return p;
    }

    bool is_infinite() const { return !x_.has_value(); }
    bool is_finite() const { return x_.has_value(); }
    const E& value() const {
        if (!x_) throw InvalidInput("PPoint: infinity has no finite value");
        return *x_;
    }

    friend bool operator==(const PPoint& a, const PPoint& b) { return a.x_ == b.x_; }

private:
    std::optional<E> x_;
};

template <ValuedField F>
PPoint<typename F::Elem> finite_point(const F& f, const mpq_class& q) {
    return PPoint<typename F::Elem>::finite(f.from_rational(q));
}

/// Canonical total order: finite points by the field order, infinity last.
template <ValuedField F>
bool point_less(const F& f, const PPoint<typename F::Elem>& a, const PPoint<typename F::Elem>& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return f.less(a.value(), b.value());
}

template <ValuedField F>
std::string point_string(const F& f, const PPoint<typename F::Elem>& a) {
    return a.is_infinite() ? std::string("inf") : f.to_string(a.value());
}

/// Valuation of a - b for points of P^1; infinity only allowed when a == b.
template <ValuedField F>
ValRat point_distance_valuation(const F& f, const PPoint<typename F::Elem>& a, const PPoint<typename F::Elem>& b) {
    if (a.is_infinite() || b.is_infinite()) throw InvalidInput("valuation of a difference involving infinity");
    return f.valuation(f.sub(a.value(), b.value()));
}

/**
 * Fractional linear transformation z -> (a z + b) / (c z + d), stored at its
 * canonical scale.  Equality of the stored entries is therefore projective
 * equality, but projectively_equal() is the documented test.
 */
template <class E>
struct Mobius {
    E a, b, c, d;

    friend bool operator==(const Mobius& m, const Mobius& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }
};

template <ValuedField F>
typename F::Elem determinant(const F& f, const Mobius<typename F::Elem>& m) {
    return f.sub(f.mul(m.a, m.d), f.mul(m.b, m.c));
}

template <ValuedField F>
typename F::Elem trace(const F& f, const Mobius<typename F::Elem>& m) {
    return f.add(m.a, m.d);
}

/// Rescales so all rational coefficients are coprime integers with the first nonzero one positive.
template <ValuedField F>
Mobius<typename F::Elem> canonicalize(const F& f, const Mobius<typename F::Elem>& m) {
    mpz_class den = 1;
    std::vector<mpq_class> all;
    for (const auto* e : {&m.a, &m.b, &m.c, &m.d})
        for (const auto& q : f.coefficients(*e)) all.push_back(q);
    for (const auto& q : all) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    mpz_class content = 0;
    for (const auto& q : all) {
        if (den == 1) {
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), q.get_num_mpz_t());
        } else {
            mpz_class z(q * den);
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), z.get_mpz_t());
        }
    }
    if (content == 0) throw ArithmeticError("Mobius: zero matrix");
    mpq_class factor(den, content);
    factor.canonicalize();
    for (const auto& q : all)
        if (q != 0) {
            if (q < 0) factor = -factor;
            break;
        }
    if (factor == 1) return m;
    return Mobius<typename F::Elem>{f.scale(m.a, factor), f.scale(m.b, factor), f.scale(m.c, factor),
                                    f.scale(m.d, factor)};
}

template <ValuedField F>
Mobius<typename F::Elem> make_mobius(const F& f, typename F::Elem a, typename F::Elem b, typename F::Elem c,
                                     typename F::Elem d) {
    Mobius<typename F::Elem> m{std::move(a), std::move(b), std::move(c), std::move(d)};
    if (f.is_zero(determinant(f, m))) throw ArithmeticError("Mobius: singular matrix");
    return canonicalize(f, m);
}

/// Matrix with rational entries embedded in K.
template <ValuedField F>
Mobius<typename F::Elem> rational_mobius(const F& f, const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                         const mpq_class& d) {
    return make_mobius(f, f.from_rational(a), f.from_rational(b), f.from_rational(c), f.from_rational(d));
}

template <ValuedField F>
Mobius<typename F::Elem> identity_mobius(const F& f) {
    return make_mobius(f, f.one(), f.zero(), f.zero(), f.one());
}

template <ValuedField F>
bool projectively_equal(const F& f, const Mobius<typename F::Elem>& m, const Mobius<typename F::Elem>& n) {
    const std::array<const typename F::Elem*, 4> x{&m.a, &m.b, &m.c, &m.d};
    const std::array<const typename F::Elem*, 4> y{&n.a, &n.b, &n.c, &n.d};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (!(f.mul(*x[i], *y[j]) == f.mul(*x[j], *y[i]))) return false;
    return true;
}

template <ValuedField F>
PPoint<typename F::Elem> apply(const F& f, const Mobius<typename F::Elem>& m, const PPoint<typename F::Elem>& pt) {
    using P = PPoint<typename F::Elem>;
    if (pt.is_infinite()) return f.is_zero(m.c) ? P::infinity() : P::finite(f.div(m.a, m.c));
    const auto& z = pt.value();
    auto den = f.add(f.mul(m.c, z), m.d);
    if (f.is_zero(den)) return P::infinity();
    return P::finite(f.div(f.add(f.mul(m.a, z), m.b), den));
}

/// Plain matrix product, no rescaling; for hot loops that only need the projective class.
template <ValuedField F>
Mobius<typename F::Elem> multiply(const F& f, const Mobius<typename F::Elem>& m1, const Mobius<typename F::Elem>& m2) {
    return Mobius<typename F::Elem>{f.add(f.mul(m1.a, m2.a), f.mul(m1.b, m2.c)), f.add(f.mul(m1.a, m2.b), f.mul(m1.b, m2.d)),
                                    f.add(f.mul(m1.c, m2.a), f.mul(m1.d, m2.c)), f.add(f.mul(m1.c, m2.b), f.mul(m1.d, m2.d))};
}

/// Matrix product m1 * m2, i.e. the map z -> m1(m2(z)).
template <ValuedField F>
Mobius<typename F::Elem> compose(const F& f, const Mobius<typename F::Elem>& m1, const Mobius<typename F::Elem>& m2) {
    return canonicalize(f, multiply(f, m1, m2));
}

template <ValuedField F>
Mobius<typename F::Elem> inverse(const F& f, const Mobius<typename F::Elem>& m) {
    return canonicalize(f, Mobius<typename F::Elem>{m.d, f.neg(m.b), f.neg(m.c), m.a});
}

template <ValuedField F>
Mobius<typename F::Elem> power(const F& f, const Mobius<typename F::Elem>& m, long n) {
    auto base = n < 0 ? inverse(f, m) : m;
    auto r = identity_mobius(f);
    for (long k = 0; k < (n < 0 ? -n : n); ++k) r = compose(f, r, base);
    return r;
}

/**
 * s^n for the order-p element s fixing a and b.  For finite a, b this is
 * [[z a - b, (1 - z) a b], [z - 1, a - z b]] with z = zeta^n; for b = infinity
 * it is z -> (1 - zeta^n) a + zeta^n z.  Infinity, if present, must be b.
 */
template <ValuedField F>
Mobius<typename F::Elem> order_p_fixing(const F& f, const PPoint<typename F::Elem>& a,
                                        const PPoint<typename F::Elem>& b, long n) {
    if (n < 1 || n >= f.p()) throw InvalidInput("order_p_fixing: exponent must lie in 1..p-1");
    if (a == b) throw DegeneratePair("order_p_fixing: a == b");
    if (a.is_infinite()) throw InvalidInput("order_p_fixing: infinity must be passed as b");
    auto z = f.zeta_power(n);
    auto one_minus_z = f.sub(f.one(), z);
    const auto& x = a.value();
    if (b.is_infinite()) return make_mobius(f, z, f.mul(one_minus_z, x), f.zero(), f.one());
    const auto& y = b.value();
    return make_mobius(f, f.sub(f.mul(z, x), y), f.mul(one_minus_z, f.mul(x, y)), f.sub(z, f.one()),
                       f.sub(x, f.mul(z, y)));
}

enum class ElementKind { Identity, Parabolic, Elliptic, Loxodromic };

inline const char* to_string(ElementKind k) {
    switch (k) {
        case ElementKind::Identity: return "Identity";
        case ElementKind::Parabolic: return "Parabolic";
        case ElementKind::Elliptic: return "Elliptic";
        case ElementKind::Loxodromic: return "Loxodromic";
    }
    return "?";
}

struct ElementClass {
    ElementKind kind = ElementKind::Identity;
    ValRat translation_length{0};

    friend bool operator==(const ElementClass&, const ElementClass&) = default;
};

/**
 * Classification from the characteristic polynomial T^2 - tr T + det.
 * The two eigenvalues have distinct valuations exactly when 2 v(tr) < v(det),
 * and then their difference is v(det) - 2 v(tr).
 */
template <ValuedField F>
ElementClass classify(const F& f, const Mobius<typename F::Elem>& m) {
    if (f.is_zero(m.b) && f.is_zero(m.c) && m.a == m.d) return {ElementKind::Identity, ValRat(0)};
    auto tr = trace(f, m);
    auto det = determinant(f, m);
    auto four = f.from_rational(4);
    if (f.mul(tr, tr) == f.mul(four, det)) return {ElementKind::Parabolic, ValRat(0)};
    ValRat vt = f.valuation(tr);
    ValRat vd = f.valuation(det);
    if (2 * vt < vd) return {ElementKind::Loxodromic, vd - 2 * vt};
    return {ElementKind::Elliptic, ValRat(0)};
}

}  // namespace schottky
