#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "schottky/field.hpp"

namespace schottky {

/// Q with the ell-adic valuation, used for p = 2 (zeta = -1).
class RationalField {
public:
    using Elem = mpq_class;

    explicit RationalField(long ell) : ell_(ell) {
        if (!detail::is_prime(ell)) throw UnsupportedField("ell must be prime, got " + std::to_string(ell));
    }

    long p() const { return 2; }
    long ell() const { return ell_; }
    FieldKind kind() const { return FieldKind::Rational; }

    Elem from_rational(const mpq_class& q) const {
        Elem r(q);
        r.canonicalize();
        return r;
    }
    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }

    Elem add(const Elem& x, const Elem& y) const { return Elem(x + y); }
    Elem sub(const Elem& x, const Elem& y) const { return Elem(x - y); }
    Elem mul(const Elem& x, const Elem& y) const { return Elem(x * y); }
    Elem div(const Elem& x, const Elem& y) const {
        if (y == 0) throw ArithmeticError("division by zero");
        return Elem(x / y);
    }
    Elem neg(const Elem& x) const { return Elem(-x); }
    Elem inverse(const Elem& x) const { return div(one(), x); }
    bool is_zero(const Elem& x) const { return x == 0; }

    ValRat valuation(const Elem& x) const { return detail::rational_valuation(x, ell_); }

    Elem zeta_power(long n) const { return ((n % 2) + 2) % 2 == 0 ? Elem(1) : Elem(-1); }

    // v(2)/(2-1): 1 in residue characteristic 2, else 0.
    ValRat separation_radius() const { return ValRat(ell_ == 2 ? 1 : 0); }

    std::vector<mpq_class> coefficients(const Elem& x) const { return {x}; }
    Elem scale(const Elem& x, const mpq_class& q) const { return Elem(x * q); }

    bool less(const Elem& x, const Elem& y) const { return x < y; }
    std::string to_string(const Elem& x) const { return x.get_str(); }

private:
    long ell_;
};

static_assert(ValuedField<RationalField>);

}  // namespace schottky
