#include <gtest/gtest.h>

#include <hahnexp/sampling.hpp>
#include <hahnexp/segment.hpp>
#include <hahnexp/series.hpp>

#include "helpers.hpp"
#include "oracle.hpp"

using namespace hahnexp;
using namespace testing_support;

namespace
{

using S = Series<GroupElement>;
using Ext = ExtValue<GroupElement>;

class SeriesTest : public ::testing::Test
{
protected:
    Universe u = universe(1);
    GroupElement e0 = e(u, 0, 0);
};

TEST_F(SeriesTest, ValuationExamples)
{
    EXPECT_EQ(valuation(ser(u, "t^{-e(t0,0)} + 3")), Ext(-e0));
    EXPECT_TRUE(valuation(S()).is_infinite());
    EXPECT_EQ(valuation(ser(u, "1 + t^{e(t0,0)}")), Ext(GroupElement()));
    EXPECT_THROW(valuation(S::unknown_above(e0)), indeterminate_valuation);
}

TEST_F(SeriesTest, AdditionExamples)
{
    EXPECT_EQ(ser(u, "1 + t^{e(t0,0)}") + ser(u, "1 - t^{e(t0,0)}"), constant(2));
    const S a = ser(u, "t^{e(t0,0)} - 2*t^{2*e(t0,0)} (mod t^{3*e(t0,0)})");
    const S z = a + -a;
    EXPECT_TRUE(z.stored_zero());
    EXPECT_EQ(z.floor(), a.floor());
    EXPECT_EQ((S::unknown_above(scale(e0, 3)) + S::unknown_above(scale(e0, 2))).floor(), Ext(scale(e0, 2)));
    // terms at or above the combined floor are not kept
    const S b = ser(u, "1 + t^{5*e(t0,0)}") + S::unknown_above(scale(e0, 2));
    EXPECT_EQ(b.terms().size(), 1u);
}

TEST_F(SeriesTest, MultiplicationExamples)
{
    EXPECT_EQ(ser(u, "1 + t^{e(t0,0)}") * ser(u, "1 - t^{e(t0,0)}"), ser(u, "1 - t^{2*e(t0,0)}"));
    const GroupElement g = e(u, 0, -2, Rational(1, 2));
    const GroupElement h = e(u, 0, 3, -4);
    EXPECT_EQ(mono(g) * mono(h), mono(g + h));
    // floor of a product: min(vA + floor_b, vB + floor_a, floor_a + floor_b)
    const S a = ser(u, "t^{-e(t0,0)} (mod t^{e(t0,0)})");
    const S b = ser(u, "1 (mod t^{2*e(t0,0)})");
    EXPECT_EQ((a * b).floor(), Ext(e0));
}

TEST_F(SeriesTest, InverseExamples)
{
    EXPECT_EQ(invert(mono(-e0), 4), mono(e0));
    const S inv = invert(ser(u, "1 + t^{e(t0,0)}"), 2);
    EXPECT_EQ(inv, ser(u, "1 - t^{e(t0,0)} + t^{2*e(t0,0)} (mod t^{3*e(t0,0)})"));
    const S a = ser(u, "2*t^{-e(t0,1)} + t^{e(t0,0)} - 1/3*t^{e(t0,2)}");
    EXPECT_TRUE(agrees_up_to_floor(a * invert(a, 5), constant(1)));
    EXPECT_THROW(invert(S(), 3), domain_violation);
    EXPECT_THROW(invert(S::unknown_above(e0), 3), indeterminate_valuation);
}

TEST_F(SeriesTest, CompareExamples)
{
    EXPECT_TRUE(compare(mono(-e0), constant(1000000)) > 0);
    EXPECT_TRUE(compare(ser(u, "1 + t^{e(t0,0)}"), constant(1)) > 0);
    const S a = ser(u, "3*t^{-e(t0,0)} - t^{e(t0,1)}");
    EXPECT_EQ(compare(a, a), std::strong_ordering::equal);
    EXPECT_THROW(compare(S::unknown_above(e0), S()), precision_insufficient);
    EXPECT_THROW(sign(ser(u, "1 (mod t^{e(t0,0)})") - constant(1)), precision_insufficient);
    EXPECT_EQ(sign(ser(u, "1 (mod t^{e(t0,0)})")), 1);
}

TEST_F(SeriesTest, DecompositionExamples)
{
    const MulDecomposition<GroupElement> m = decompose_mul(ser(u, "3*t^{-e(t0,0)} + 3"));
    EXPECT_EQ(m.exponent, -e0);
    EXPECT_EQ(m.residue, 3);
    EXPECT_EQ(m.one_unit, ser(u, "1 + t^{e(t0,0)}"));
    const MulDecomposition<GroupElement> one = decompose_mul(constant(1));
    EXPECT_TRUE(one.exponent.is_zero());
    EXPECT_EQ(one.residue, 1);
    EXPECT_EQ(one.one_unit, constant(1));
    EXPECT_THROW(decompose_mul(constant(-2)), domain_violation);

    const AddDecomposition<GroupElement> d = decompose_add(ser(u, "t^{-e(t0,0)} + 2 + t^{e(t0,0)}"));
    EXPECT_EQ(d.infinite_part, mono(-e0));
    EXPECT_EQ(d.constant, 2);
    EXPECT_EQ(d.infinitesimal, mono(e0));
    EXPECT_THROW(decompose_add(S::unknown_above(-e0)), precision_insufficient);
}

TEST_F(SeriesTest, Residue)
{
    EXPECT_EQ(residue(ser(u, "1/2 + t^{e(t0,0)}")), Rational(1, 2));
    EXPECT_EQ(residue(mono(e0)), 0);
    EXPECT_THROW(residue(mono(-e0)), domain_violation);
    EXPECT_THROW(residue(S::unknown_above(GroupElement(u))), precision_insufficient);
}

TEST_F(SeriesTest, PrintAndParse)
{
    const S a = ser(u, "-1/2*t^{-e(t0,1)} + 3 - t^{e(t0,0) - e(t0,2)} (mod t^{2*e(t0,0)})");
    EXPECT_EQ(to_string(a), "-1/2*t^{-e(t0,1)} + 3 - t^{e(t0,0) - e(t0,2)} (mod t^{2*e(t0,0)})");
    EXPECT_EQ(ser(u, to_string(a)), a);
    EXPECT_EQ(to_string(S()), "0 (exact)");
    EXPECT_THROW(ser(u, "t^{e(t0,3)} (mod t^{e(t0,3)})"), parse_error);
    EXPECT_THROW(ser(u, "t^{e(t0,0)"), parse_error);

    const Universe u3 = universe(3);
    Sampler rng(u3, 3);
    for (int i = 0; i < 300; ++i) {
        S s = rng.series();
        if (rng.coin()) {
            s = s.truncated(Ext(rng.group_element(2)));
        }
        EXPECT_EQ(ser(u3, to_string(s)), s) << to_string(s);
    }
}

TEST_F(SeriesTest, OracleEquivalence)
{
    Sampler rng(universe(3), 12);
    for (int i = 0; i < 500; ++i) {
        const auto failure = oracle::check_instance(rng, 1 + static_cast<unsigned>(i % 5));
        ASSERT_FALSE(failure) << *failure;
    }
}

TEST_F(SeriesTest, ValuationAndOrderAxioms)
{
    const Universe u3 = universe(3);
    Sampler rng(u3, 5);
    const S one = constant(1);
    for (int i = 0; i < 400; ++i) {
        const S a = rng.series();
        const S b = rng.series();
        if (a.stored_zero() || b.stored_zero()) {
            continue;
        }
        const GroupElement va = valuation(a).value();
        const GroupElement vb = valuation(b).value();
        EXPECT_EQ(valuation(a * b), Ext(va + vb));
        EXPECT_EQ(valuation(-a), Ext(va));
        EXPECT_GE(valuation(a + b), min(Ext(va), Ext(vb)));
        const S pa = sign(a) > 0 ? a : -a;
        const S pb = sign(b) > 0 ? b : -b;
        EXPECT_GT(sign(pa + pb), 0);
        EXPECT_GT(sign(pa * pb), 0);
        // (CO): 0 <= a <= b gives va >= vb
        if (compare(pa, pb) <= 0) {
            EXPECT_GE(valuation(pa), valuation(pb));
        }
        const S eps = rng.infinitesimal();
        EXPECT_TRUE(compare(eps, one) < 0);
        EXPECT_GT(sign(one + eps), 0);
        // recomposition
        EXPECT_EQ(recompose(decompose_add(a)), a);
        EXPECT_EQ(recompose(decompose_mul(pa)), pa);
        const MulDecomposition<GroupElement> m = decompose_mul(pa);
        EXPECT_GT(valuation_lower_bound(m.one_unit - one), Ext(GroupElement()));
    }
}

TEST(SeriesWData, Examples)
{
    const Universe ab = make_universe(OrderTypeSpec({"a", "b"}));
    const FinalSegment seg = FinalSegment::from_label(ab, 1);
    const WData in = w_data(S::monomial(GroupElement::basis(ab, {1, 0})), seg);
    EXPECT_TRUE(in.in_ring);
    EXPECT_TRUE(in.is_unit);
    EXPECT_TRUE(in.value.value().is_zero());
    const GroupElement ea = GroupElement::basis(ab, {0, 0});
    const WData out = w_data(S::monomial(-ea), seg);
    EXPECT_FALSE(out.in_ring);
    EXPECT_EQ(out.value.value(), -ea);
    const WData ideal = w_data(S::monomial(ea), seg);
    EXPECT_TRUE(ideal.in_ideal);
    const FinalSegment all = FinalSegment::all(ab);
    Sampler rng(ab, 2);
    for (int i = 0; i < 50; ++i) {
        const S a = rng.positive_infinite();
        EXPECT_TRUE(w_data(a, all).value.value().is_zero());
    }
    EXPECT_TRUE(w_data(S(), seg).value.is_infinite());
}

// a -> -wa on positives is an order-preserving homomorphism whose kernel is
// the w-units.
TEST(SeriesWData, ValuationHomomorphism)
{
    const Universe u3 = universe(3);
    Sampler rng(u3, 9);
    const std::vector<FinalSegment> segs{FinalSegment::all(u3), FinalSegment::from_label(u3, 1),
                                         FinalSegment::cut(u3, 1, 0), FinalSegment::from_label(u3, 2),
                                         FinalSegment::cut(u3, 0, -2)};
    for (const FinalSegment &seg : segs) {
        for (int i = 0; i < 100; ++i) {
            const S a = rng.positive_with_value(rng.group_element(), rng.coin());
            const S b = rng.positive_with_value(rng.group_element(), rng.coin());
            const GroupElement wa = w_data(a, seg).value.value();
            const GroupElement wb = w_data(b, seg).value.value();
            EXPECT_EQ(-w_data(a * b, seg).value.value(), -wa + -wb);
            if (compare(a, b) <= 0) {
                EXPECT_LE(-wa, -wb);
            }
            EXPECT_EQ(w_data(a, seg).is_unit, wa.is_zero());
            EXPECT_EQ(w_data(a, seg).in_ring, seg.contains(valuation(a).value()) || wa.sign() > 0);
        }
    }
}

} // namespace
