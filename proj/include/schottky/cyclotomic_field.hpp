#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "schottky/field.hpp"

namespace schottky {

/// Element of Q(zeta_p): coefficients of 1, zeta, ..., zeta^{p-2}, no trailing zeros.
struct CycElem {
    std::vector<mpq_class> c;

    friend bool operator==(const CycElem& a, const CycElem& b) { return a.c == b.c; }
};

/**
 * Q(zeta_p) for an odd prime p, valued at a prime above ell.
 *
 * Split (ell = 1 mod p): v(alpha) = v_ell(alpha(r)) for a fixed root r of
 * Phi_p in Z_ell, computed modulo ell^N with N doubling until the image is
 * nonzero.  Ramified (ell = p): v(alpha) = v_p(Norm(alpha)) / (p - 1), so
 * v(p) = 1.  Other ell are rejected with UnsupportedField.
 */
class CyclotomicField {
public:
    using Elem = CycElem;

    CyclotomicField(long p, long ell) : p_(p), ell_(ell) {
        if (p == 2 || !detail::is_prime(p))
            throw UnsupportedField("cyclotomic field needs an odd prime p, got " + std::to_string(p));
        if (!detail::is_prime(ell)) throw UnsupportedField("ell must be prime, got " + std::to_string(ell));
        if (ell == p) {
            kind_ = FieldKind::CyclotomicRamified;
        } else if (ell % p == 1) {
            kind_ = FieldKind::CyclotomicSplit;
            base_root_ = find_root_mod_ell();
        } else {
            throw UnsupportedField("ell = " + std::to_string(ell) + " is neither p nor 1 mod p = " +
                                   std::to_string(p));
        }
    }

    long p() const { return p_; }
    long ell() const { return ell_; }
    FieldKind kind() const { return kind_; }

    Elem from_rational(const mpq_class& q) const {
        Elem e;
        if (q != 0) e.c.push_back(q);
        return e;
    }
    Elem zero() const { return Elem{}; }
    Elem one() const { return from_rational(1); }

    /// Builds an element from arbitrary-length coefficients of powers of zeta.
    Elem from_coefficients(const std::vector<mpq_class>& coeffs) const {
        std::vector<mpq_class> full(static_cast<std::size_t>(p_), mpq_class(0));
        for (std::size_t k = 0; k < coeffs.size(); ++k) full[k % static_cast<std::size_t>(p_)] += coeffs[k];
        return reduce(std::move(full));
    }

    Elem add(const Elem& x, const Elem& y) const {
        std::vector<mpq_class> r(std::max(x.c.size(), y.c.size()), mpq_class(0));
        for (std::size_t k = 0; k < x.c.size(); ++k) r[k] += x.c[k];
        for (std::size_t k = 0; k < y.c.size(); ++k) r[k] += y.c[k];
        return trimmed(std::move(r));
    }
    Elem neg(const Elem& x) const {
        Elem r = x;
        for (auto& q : r.c) q = -q;
        return r;
    }
    Elem sub(const Elem& x, const Elem& y) const { return add(x, neg(y)); }

    Elem mul(const Elem& x, const Elem& y) const {
        if (x.c.empty() || y.c.empty()) return zero();
        if (integral(x) && integral(y)) {
            // Integer coefficients (the usual case for canonical matrices): accumulate in mpz.
            std::vector<mpz_class> z(static_cast<std::size_t>(p_), mpz_class(0));
            for (std::size_t i = 0; i < x.c.size(); ++i)
                for (std::size_t j = 0; j < y.c.size(); ++j)
                    mpz_addmul(z[(i + j) % z.size()].get_mpz_t(), x.c[i].get_num_mpz_t(), y.c[j].get_num_mpz_t());
            std::vector<mpq_class> r(z.size() - 1);
            for (std::size_t k = 0; k + 1 < z.size(); ++k) r[k] = mpq_class(z[k] - z.back());
            return trimmed(std::move(r));
        }
        std::vector<mpq_class> r(static_cast<std::size_t>(p_), mpq_class(0));
        for (std::size_t i = 0; i < x.c.size(); ++i)
            for (std::size_t j = 0; j < y.c.size(); ++j) r[(i + j) % static_cast<std::size_t>(p_)] += x.c[i] * y.c[j];
        return reduce(std::move(r));
    }

    Elem inverse(const Elem& x) const {
        if (is_zero(x)) throw ArithmeticError("inversion of zero");
        Elem prod = one();
        for (long k = 2; k < p_; ++k) prod = mul(prod, galois(x, k));
        mpq_class n = norm(x);
        return scale(prod, mpq_class(1 / n));
    }
    Elem div(const Elem& x, const Elem& y) const {
        if (is_zero(y)) throw ArithmeticError("division by zero");
        return mul(x, inverse(y));
    }
    bool is_zero(const Elem& x) const { return x.c.empty(); }

    /// The automorphism zeta -> zeta^k, k not divisible by p.
    Elem galois(const Elem& x, long k) const {
        std::vector<mpq_class> r(static_cast<std::size_t>(p_), mpq_class(0));
        long kk = ((k % p_) + p_) % p_;
        for (std::size_t i = 0; i < x.c.size(); ++i)
            r[static_cast<std::size_t>((static_cast<long>(i) * kk) % p_)] += x.c[i];
        return reduce(std::move(r));
    }

    /// Field norm down to Q: the product of all p - 1 conjugates.
    mpq_class norm(const Elem& x) const {
        Elem prod = one();
        for (long k = 1; k < p_; ++k) prod = mul(prod, galois(x, k));
        if (prod.c.size() > 1) throw ArithmeticError("norm did not reduce to a rational");
        return prod.c.empty() ? mpq_class(0) : prod.c[0];
    }

    ValRat valuation(const Elem& x) const {
        if (is_zero(x)) return ValRat::infinity();
        if (kind_ == FieldKind::CyclotomicRamified) {
            ValRat vn = detail::rational_valuation(norm(x), ell_);
            return ValRat(mpq_class(vn.value() / (p_ - 1)));
        }
        return split_valuation(x);
    }

    Elem zeta_power(long n) const {
        long k = ((n % p_) + p_) % p_;
        std::vector<mpq_class> r(static_cast<std::size_t>(p_), mpq_class(0));
        r[static_cast<std::size_t>(k)] = 1;
        return reduce(std::move(r));
    }

    ValRat separation_radius() const {
        return kind_ == FieldKind::CyclotomicRamified ? ValRat(mpq_class(1, p_ - 1)) : ValRat(0);
    }

    std::vector<mpq_class> coefficients(const Elem& x) const { return x.c; }
    Elem scale(const Elem& x, const mpq_class& q) const {
        if (q == 0) return zero();
        Elem r = x;
        for (auto& v : r.c) v *= q;
        return r;
    }

    bool less(const Elem& x, const Elem& y) const {
        std::size_t n = std::max(x.c.size(), y.c.size());
        for (std::size_t k = 0; k < n; ++k) {
            mpq_class a = k < x.c.size() ? x.c[k] : mpq_class(0);
            mpq_class b = k < y.c.size() ? y.c[k] : mpq_class(0);
            if (a != b) return a < b;
        }
        return false;
    }

    std::string to_string(const Elem& x) const {
        if (x.c.empty()) return "0";
        std::string out;
        for (std::size_t k = 0; k < x.c.size(); ++k) {
            const mpq_class& q = x.c[k];
            if (q == 0) continue;
            mpq_class mag = abs(q);
            if (out.empty()) {
                if (q < 0) out += "-";
            } else {
                out += q < 0 ? " - " : " + ";
            }
            if (k == 0) {
                out += mag.get_str();
                continue;
            }
            if (mag != 1) out += mag.get_str() + "*";
            out += "zeta";
            if (k > 1) out += "^" + std::to_string(k);
        }
        return out;
    }

    /// Root of Phi_p in Z/ell^N used by the split valuation (exposed for tests).
    mpz_class root_mod(long precision) const {
        if (kind_ != FieldKind::CyclotomicSplit) throw UnsupportedField("root_mod: field is not split");
        mpz_class modulus;
        mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(ell_), 1);
        mpz_class r = base_root_;
        long have = 1;
        while (have < precision) {
            have = std::min(precision, 2 * have);
            mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(ell_), static_cast<unsigned long>(have));
            // Newton step for x^p - 1: x <- x - (x^p - 1) / (p x^{p-1}).
            mpz_class xp1, xp, deriv, inv;
            mpz_powm_ui(xp1.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(p_ - 1), modulus.get_mpz_t());
            xp = (xp1 * r) % modulus;
            deriv = (xp1 * p_) % modulus;
            if (mpz_invert(inv.get_mpz_t(), deriv.get_mpz_t(), modulus.get_mpz_t()) == 0)
                throw ArithmeticError("Hensel lift: derivative not invertible");
            r = (r - (xp - 1) * inv) % modulus;
            if (r < 0) r += modulus;
        }
        return r;
    }

private:
    static bool integral(const Elem& x) {
        for (const auto& q : x.c)
            if (q.get_den() != 1) return false;
        return true;
    }

    Elem trimmed(std::vector<mpq_class> r) const {
        while (!r.empty() && r.back() == 0) r.pop_back();
        return Elem{std::move(r)};
    }

    // Input has exactly p entries (coefficients of zeta^0..zeta^{p-1}).
    Elem reduce(std::vector<mpq_class> r) const {
        mpq_class top = r.back();
        r.pop_back();
        if (top != 0)
            for (auto& q : r) q -= top;
        return trimmed(std::move(r));
    }

    mpz_class find_root_mod_ell() const {
        mpz_class m(ell_);
        for (long h = 2; h < ell_; ++h) {
            mpz_class r;
            mpz_powm_ui(r.get_mpz_t(), mpz_class(h).get_mpz_t(), static_cast<unsigned long>((ell_ - 1) / p_),
                        m.get_mpz_t());
            if (r != 1) return r;
        }
        throw UnsupportedField("no primitive p-th root of unity mod ell");
    }

    ValRat split_valuation(const Elem& x) const {
        mpz_class den = 1;
        for (const auto& q : x.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
        std::vector<mpz_class> beta;
        for (const auto& q : x.c) beta.emplace_back(mpz_class(q * den));
        // v(beta) <= v_ell(Norm(beta)) bounds the precision needed.
        mpq_class nb = norm(x) * power(mpq_class(den), p_ - 1);
        long bound = detail::mpz_valuation(nb.get_num(), ell_);
        for (long prec = 8;; prec *= 2) {
            mpz_class modulus;
            mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(ell_), static_cast<unsigned long>(prec));
            mpz_class r = root_mod(prec);
            mpz_class acc = 0, rk = 1;
            for (const auto& b : beta) {
                acc = (acc + b * rk) % modulus;
                rk = (rk * r) % modulus;
            }
            if (acc < 0) acc += modulus;
            if (acc != 0)
                return ValRat(detail::mpz_valuation(acc, ell_) - detail::mpz_valuation(den, ell_));
            if (prec > bound + 1) throw ArithmeticError("split valuation exceeded its norm bound");
        }
    }

    static mpq_class power(const mpq_class& q, long e) {
        mpq_class r = 1;
        for (long k = 0; k < e; ++k) r *= q;
        return r;
    }

    long p_;
    long ell_;
    FieldKind kind_ = FieldKind::CyclotomicRamified;
    mpz_class base_root_;
};

static_assert(ValuedField<CyclotomicField>);

}  // namespace schottky
