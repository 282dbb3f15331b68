#pragma once

#include <gmpxx.h>

#include <concepts>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/valrat.hpp"

namespace schottky {

enum class FieldKind { Rational, CyclotomicSplit, CyclotomicRamified };

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Rational: return "rational";
        case FieldKind::CyclotomicSplit: return "cyclotomic-split";
        case FieldKind::CyclotomicRamified: return "cyclotomic-ramified";
    }
    return "?";
}

/**
 * A field K containing a primitive p-th root of unity zeta, with a discrete
 * valuation of residue characteristic ell.  Elements are held in canonical
 * form, so `==` on Elem is exact equality in K.
 */
template <class F>
concept ValuedField = requires(const F& f, const typename F::Elem& x, const mpq_class& q, long n) {
    typename F::Elem;
    requires std::equality_comparable<typename F::Elem>;
    { f.p() } -> std::convertible_to<long>;
    { f.ell() } -> std::convertible_to<long>;
    { f.kind() } -> std::same_as<FieldKind>;
    { f.from_rational(q) } -> std::same_as<typename F::Elem>;
    { f.zero() } -> std::same_as<typename F::Elem>;
    { f.one() } -> std::same_as<typename F::Elem>;
    { f.add(x, x) } -> std::same_as<typename F::Elem>;
    { f.sub(x, x) } -> std::same_as<typename F::Elem>;
    { f.mul(x, x) } -> std::same_as<typename F::Elem>;
    { f.div(x, x) } -> std::same_as<typename F::Elem>;
    { f.neg(x) } -> std::same_as<typename F::Elem>;
    { f.is_zero(x) } -> std::convertible_to<bool>;
    { f.valuation(x) } -> std::same_as<ValRat>;
    { f.zeta_power(n) } -> std::same_as<typename F::Elem>;
    { f.separation_radius() } -> std::same_as<ValRat>;
    { f.coefficients(x) } -> std::same_as<std::vector<mpq_class>>;
    { f.scale(x, q) } -> std::same_as<typename F::Elem>;
    { f.less(x, x) } -> std::convertible_to<bool>;
    { f.to_string(x) } -> std::same_as<std::string>;
};

namespace detail {

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Exponent of ell in a nonzero integer.
inline long mpz_valuation(const mpz_class& z, long ell) {
    if (z == 0) throw ArithmeticError("valuation of zero integer");
    mpz_class rest;
    mpz_class prime(ell);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t()));
}

inline ValRat rational_valuation(const mpq_class& q, long ell) {
    if (q == 0) return ValRat::infinity();
    return ValRat(mpz_valuation(q.get_num(), ell) - mpz_valuation(q.get_den(), ell));
}

}  // namespace detail

}  // namespace schottky
