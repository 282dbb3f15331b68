#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>

#include "schottky/errors.hpp"

namespace schottky {

/**
 * Value of a valuation: an exact rational or +infinity.
 *
 * Infinity only ever arises as v(0). Adding anything to infinity gives
 * infinity; subtracting infinity from a finite value is an error.
 */
class ValRat {
public:
    ValRat() = default;
    ValRat(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
    ValRat(const mpq_class& q) : q_(q) { q_.canonicalize(); }  // NOLINT

    static ValRat infinity() {
        ValRat r;
        r.inf_ = true;
        return r;
    }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }

    const mpq_class& value() const {
        if (inf_) throw ArithmeticError("ValRat: infinite value has no rational representative");
        return q_;
    }

    std::string to_string() const { return inf_ ? std::string("inf") : q_.get_str(); }

    friend bool operator==(const ValRat& a, const ValRat& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.q_ == b.q_;
    }
    friend bool operator<(const ValRat& a, const ValRat& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.q_ < b.q_;
    }
    friend bool operator>(const ValRat& a, const ValRat& b) { return b < a; }
    friend bool operator<=(const ValRat& a, const ValRat& b) { return !(b < a); }
    friend bool operator>=(const ValRat& a, const ValRat& b) { return !(a < b); }

    friend ValRat operator+(const ValRat& a, const ValRat& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ValRat(mpq_class(a.q_ + b.q_));
    }
    friend ValRat operator-(const ValRat& a, const ValRat& b) {
        if (b.inf_) throw ArithmeticError("ValRat: subtracting infinity");
        if (a.inf_) return infinity();
        return ValRat(mpq_class(a.q_ - b.q_));
    }
    friend ValRat operator*(long k, const ValRat& a) {
        if (a.inf_) {
            if (k <= 0) throw ArithmeticError("ValRat: non-positive multiple of infinity");
            return infinity();
        }
        return ValRat(mpq_class(a.q_ * k));
    }

    friend std::ostream& operator<<(std::ostream& os, const ValRat& v) { return os << v.to_string(); }

private:
    bool inf_ = false;
    mpq_class q_{0};
};

inline ValRat min(const ValRat& a, const ValRat& b) { return b < a ? b : a; }
inline ValRat max(const ValRat& a, const ValRat& b) { return a < b ? b : a; }

}  // namespace schottky
