#include <gtest/gtest.h>

#include <random>

#include "schottky/cyclotomic_field.hpp"
#include "schottky/projline.hpp"
#include "schottky/rational_field.hpp"

using namespace schottky;

namespace {

using Q = mpq_class;
using P = PPoint<Q>;

P fin(long n, long d = 1) { return P::finite(Q(n, d)); }

template <ValuedField F>
bool is_identity(const F& f, const Mobius<typename F::Elem>& m) {
    return projectively_equal(f, m, identity_mobius(f));
}

}  // namespace

TEST(Mobius, CanonicalScaling) {
    RationalField f(5);
    auto m = rational_mobius(f, Q(-2, 3), Q(4, 3), 0, Q(2, 3));
    EXPECT_EQ(m.a, 1);
    EXPECT_EQ(m.b, -2);
    EXPECT_EQ(m.d, -1);
    EXPECT_THROW(rational_mobius(f, 1, 2, 2, 4), ArithmeticError);
}

TEST(Mobius, ComposeInverseApply) {
    RationalField f(3);
    auto m = rational_mobius(f, 2, 1, 1, 1);
    auto n = rational_mobius(f, 1, -5, 3, 2);
    EXPECT_TRUE(is_identity(f, compose(f, m, inverse(f, m))));
    auto mn = compose(f, m, n);
    for (long z : {0, 1, 4, -7}) EXPECT_EQ(apply(f, mn, fin(z)), apply(f, m, apply(f, n, fin(z))));
    EXPECT_EQ(apply(f, m, P::infinity()), fin(2));
    EXPECT_EQ(apply(f, m, fin(-1)), P::infinity());
    EXPECT_TRUE(projectively_equal(f, power(f, m, -2), inverse(f, compose(f, m, m))));
}

TEST(OrderP, GeneratorsOfSixPointExample) {
    // s_0, s_1 fix {7, 12} and {0, 5}; the order-2 map fixing {1, inf} is z -> 2 - z.
    RationalField f(5);
    EXPECT_TRUE(projectively_equal(f, order_p_fixing(f, fin(7), fin(12), 1), rational_mobius(f, 19, -168, 2, -19)));
    EXPECT_TRUE(projectively_equal(f, order_p_fixing(f, fin(0), fin(5), 1), rational_mobius(f, 5, 0, 2, -5)));
    EXPECT_TRUE(projectively_equal(f, order_p_fixing(f, fin(1), P::infinity(), 1), rational_mobius(f, -1, 2, 0, 1)));
}

TEST(OrderP, FoldMapOfEightPointExample) {
    // Folding 1336/3 across the pair {-110, 86} gives 9.
    RationalField f(7);
    auto s = order_p_fixing(f, fin(-110), fin(86), 1);
    EXPECT_EQ(apply(f, s, fin(1336, 3)), fin(9));
    EXPECT_EQ(apply(f, s, fin(-355)), fin(-40));
}

TEST(OrderP, ErrorsAndDomain) {
    RationalField f(5);
    EXPECT_THROW(order_p_fixing(f, fin(1), fin(1), 1), DegeneratePair);
    EXPECT_THROW(order_p_fixing(f, fin(1), fin(2), 2), InvalidInput);
    EXPECT_THROW(order_p_fixing(f, P::infinity(), fin(2), 1), InvalidInput);
}

TEST(OrderP, FixesEndpointsAndHasOrderP) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-50, 50);
    CyclotomicField k(5, 11);
    using C = PPoint<CycElem>;
    for (int t = 0; t < 20; ++t) {
        long a = d(rng), b = d(rng);
        if (a == b) continue;
        C pa = C::finite(k.from_rational(a));
        C pb = t % 4 == 0 ? C::infinity() : C::finite(k.from_rational(b));
        for (long n = 1; n < 5; ++n) {
            auto s = order_p_fixing(k, pa, pb, n);
            EXPECT_EQ(apply(k, s, pa), pa);
            EXPECT_EQ(apply(k, s, pb), pb);
            EXPECT_TRUE(is_identity(k, power(k, s, 5)));
            EXPECT_FALSE(is_identity(k, power(k, s, n)));
            EXPECT_TRUE(projectively_equal(k, s, power(k, order_p_fixing(k, pa, pb, 1), n)));
            EXPECT_EQ(classify(k, s).kind, ElementKind::Elliptic);
        }
    }
}

TEST(Classify, PaperProductIsElliptic) {
    RationalField f(5);
    auto s0 = rational_mobius(f, 19, -168, 2, -19);
    auto s1 = rational_mobius(f, 5, 0, 2, -5);
    auto s2 = rational_mobius(f, -1, 2, 0, 1);
    auto w = compose(f, compose(f, compose(f, s1, s2), s0), s2);
    // Scaled to trace 350, determinant 625.
    auto tr = trace(f, w), det = determinant(f, w);
    EXPECT_EQ(tr * tr / det, Q(196));  // 350^2 / 625
    EXPECT_EQ(2 * f.valuation(tr) - f.valuation(det), ValRat(0));
    EXPECT_EQ(classify(f, w).kind, ElementKind::Elliptic);
}

TEST(Classify, Kinds) {
    RationalField f(3);
    EXPECT_EQ(classify(f, identity_mobius(f)).kind, ElementKind::Identity);
    EXPECT_EQ(classify(f, rational_mobius(f, 1, 1, 0, 1)).kind, ElementKind::Parabolic);
    auto lox = classify(f, rational_mobius(f, 9, 0, 0, 1));
    EXPECT_EQ(lox.kind, ElementKind::Loxodromic);
    EXPECT_EQ(lox.translation_length, ValRat(2));
    EXPECT_EQ(classify(f, rational_mobius(f, 2, 0, 0, 1)).kind, ElementKind::Elliptic);
}

TEST(Points, OrderAndPrinting) {
    RationalField f(5);
    EXPECT_TRUE(point_less(f, fin(-3), fin(2)));
    EXPECT_TRUE(point_less(f, fin(100), P::infinity()));
    EXPECT_FALSE(point_less(f, P::infinity(), fin(0)));
    EXPECT_EQ(point_string(f, fin(1336, 3)), "1336/3");
    EXPECT_EQ(point_string(f, P::infinity()), "inf");
    EXPECT_THROW(P::infinity().value(), InvalidInput);
}
