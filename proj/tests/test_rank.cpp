#include <gtest/gtest.h>

#include <hahnexp/rank.hpp>

#include "helpers.hpp"

using namespace hahnexp;
using namespace testing_support;

namespace
{

using S = Series<GroupElement>;

class RankTest : public ::testing::Test
{
protected:
    Universe z = universe(1);
    Universe ab = make_universe(OrderTypeSpec({"a", "b"}));
    OffsetWindow window{};
    PrecisionPolicy policy{4};

    LogComponents<GroupElement> comps(const Universe &u) const
    {
        return make_components(LogCrossSection(u));
    }
};

TEST_F(RankTest, SegmentBasics)
{
    const FinalSegment c = FinalSegment::cut(ab, 0, 2);
    EXPECT_TRUE(c.contains(IndexPoint{0, 2}));
    EXPECT_FALSE(c.contains(IndexPoint{0, 1}));
    EXPECT_TRUE(c.contains(IndexPoint{1, -100}));
    EXPECT_EQ(c.minimum(), (IndexPoint{0, 2}));
    EXPECT_FALSE(FinalSegment::all(ab).minimum());
    EXPECT_TRUE(FinalSegment::cut(ab, 1, 0).subset_of(FinalSegment::from_label(ab, 1)));
    EXPECT_TRUE(FinalSegment::from_label(ab, 1) < FinalSegment::cut(ab, 0, 3));
    EXPECT_EQ(FinalSegment::label_cut(ab, 0), FinalSegment::from_label(ab, 1));
    EXPECT_THROW(FinalSegment::label_cut(ab, 1), domain_violation);
    EXPECT_THROW(FinalSegment::cut(ab, 2, 0), domain_violation);
    EXPECT_EQ(c.project(GroupElement::basis(ab, {0, 0}) + GroupElement::basis(ab, {0, 5})),
              GroupElement::basis(ab, {0, 0}));
}

TEST_F(RankTest, SegmentText)
{
    for (const FinalSegment &s : enumerate_segments(ab, window)) {
        EXPECT_EQ(parse_final_segment(to_string(s), ab), s) << to_string(s);
    }
    EXPECT_EQ(to_string(FinalSegment::from_label(ab, 1)), "above(a)");
    EXPECT_EQ(to_string(FinalSegment::cut(ab, 0, -2)), "cut(a,-2)");
    EXPECT_EQ(to_string(FinalSegment::all(ab)), "ALL");
    EXPECT_THROW(parse_final_segment("cut(c,0)", ab), parse_error);
    EXPECT_THROW(parse_final_segment("above(b)", ab), domain_violation);
}

TEST_F(RankTest, Enumeration)
{
    const std::vector<FinalSegment> segs = enumerate_segments(ab, window);
    EXPECT_EQ(segs.size(), 2u * 8u);
    EXPECT_TRUE(segs.front().is_all());
    for (std::size_t i = 1; i < segs.size(); ++i) {
        EXPECT_TRUE(segs[i].subset_of(segs[i - 1]));
    }
    EXPECT_EQ(window_points(ab, window).size(), 2u * 9u);
    EXPECT_THROW(enumerate_segments(ab, OffsetWindow{1, 0}), domain_violation);
}

TEST_F(RankTest, ClosureExamples)
{
    EXPECT_TRUE(seg_zeta_closure(FinalSegment::cut(z, 0, 5)).is_all());
    EXPECT_EQ(seg_zeta_closure(FinalSegment::cut(ab, 1, 0)), FinalSegment::from_label(ab, 1));
    const FinalSegment closed = FinalSegment::from_label(ab, 1);
    EXPECT_EQ(seg_zeta_closure(closed), closed);
    for (const FinalSegment &s : enumerate_segments(universe(3), window)) {
        EXPECT_EQ(seg_zeta_closure(seg_zeta_closure(s)), seg_zeta_closure(s));
        EXPECT_TRUE(s.subset_of(seg_zeta_closure(s)));
    }
}

TEST_F(RankTest, CompatibilityExamples)
{
    EXPECT_FALSE(is_compatible(FinalSegment::cut(z, 0, 0)));
    EXPECT_TRUE(is_compatible(FinalSegment::all(z)));
    EXPECT_TRUE(is_compatible(FinalSegment::from_label(ab, 1)));
    EXPECT_FALSE(is_compatible(FinalSegment::cut(ab, 1, 0)));
}

TEST_F(RankTest, ConditionsAgreeAndWitnessesVerify)
{
    for (std::size_t n = 1; n <= 3; ++n) {
        const Universe u = universe(n);
        const auto c = comps(u);
        std::size_t compatible = 0;
        for (const FinalSegment &s : enumerate_segments(u, window)) {
            const CompatibilityVerdicts v = compatibility_verdicts(s, window, c, policy);
            EXPECT_TRUE(v.agree()) << to_string(s);
            EXPECT_EQ(v.f, is_compatible(s));
            if (v.f) {
                ++compatible;
                EXPECT_FALSE(incompatibility_witness(s, window, c, policy));
            } else {
                const auto w = incompatibility_witness(s, window, c, policy);
                ASSERT_TRUE(w) << to_string(s);
                EXPECT_TRUE(verify_incompatibility_witness(*w, s, c, policy));
            }
        }
        EXPECT_EQ(compatible, n);
    }
    // a positive element inside R_w is never a witness
    EXPECT_FALSE(verify_incompatibility_witness(constant(1), FinalSegment::cut(ab, 0, 0), comps(ab), policy));
}

TEST_F(RankTest, SampledCompatibilityChecks)
{
    const Universe u = universe(3);
    const auto c = comps(u);
    Sampler rng(u, 6);
    for (const FinalSegment &s : enumerate_segments(u, window)) {
        const SampledCheck l7 = lemma7_check(s, rng, 20, c, policy);
        EXPECT_TRUE(l7.ok) << l7.failure;
        if (is_compatible(s)) {
            const SampledCheck l = compatible_log_check(s, rng, 20, c, policy);
            EXPECT_TRUE(l.ok) << l.failure;
            const SampledCheck v = compatible_valuation_check(s, rng, 20, c, policy);
            EXPECT_TRUE(v.ok) << v.failure;
        }
    }
}

TEST_F(RankTest, ExponentialRankExamples)
{
    EXPECT_EQ(exponential_rank(z).size(), 1u);
    const std::vector<QuotientSegment> r2 = exponential_rank(ab);
    ASSERT_EQ(r2.size(), 2u);
    EXPECT_EQ(to_string(r2[0]), "{b}");
    EXPECT_EQ(to_string(r2[1]), "{a,b}");
    EXPECT_LT(r2[0], r2[1]);
    EXPECT_EQ(exponential_rank(universe(3)).size(), 3u);
    EXPECT_EQ(epsilon_preimage(r2[0]), FinalSegment::from_label(ab, 1));
    EXPECT_EQ(epsilon(FinalSegment::all(ab)), r2[1]);
    EXPECT_THROW(epsilon(FinalSegment::cut(ab, 0, 0)), domain_violation);
    for (std::size_t n = 1; n <= 5; ++n) {
        const Universe u = universe(n);
        EXPECT_TRUE(same_order_type(principal_exponential_rank(u), *u));
        EXPECT_TRUE(same_order_type(principal_exponential_rank(u), zeta_quotient_order_type(ZetaMap(u))));
    }
}

TEST_F(RankTest, SigmaAndEpsilon)
{
    EXPECT_EQ(sigma(FinalSegment::cut(ab, 0, 1), window), QuotientSegment(ab, 0));
    EXPECT_EQ(sigma(FinalSegment::cut(ab, 1, 3), window), QuotientSegment(ab, 1));
    for (std::size_t n = 1; n <= 4; ++n) {
        const ExhaustiveCheck c = sigma_epsilon_check(universe(n), window);
        EXPECT_TRUE(c.ok) << c.failure;
        EXPECT_GT(c.segments, 0u);
    }
}

TEST_F(RankTest, PrincipalRank)
{
    const PrincipalRankSummary p = principal_rank(z, window);
    EXPECT_EQ(p.principal.size(), 7u);
    EXPECT_FALSE(p.all_is_principal);
    EXPECT_TRUE(p.unions_hold);
    for (std::size_t i = 1; i < p.principal.size(); ++i) {
        EXPECT_TRUE(p.principal[i].subset_of(p.principal[i - 1]));
    }
}

TEST_F(RankTest, ClosedSegmentsHaveNoMinimum)
{
    for (std::size_t n = 1; n <= 5; ++n) {
        const ExhaustiveCheck c = corollary14_check(universe(n), window);
        EXPECT_TRUE(c.ok) << c.failure;
    }
}

TEST_F(RankTest, CofinalityExamples)
{
    const S tb = S::monomial(-GroupElement::basis(ab, {1, 0}));
    const S ta = S::monomial(-GroupElement::basis(ab, {0, 0}));
    EXPECT_TRUE(cofinality_class_check(tb, FinalSegment::from_label(ab, 1)));
    EXPECT_FALSE(cofinality_class_check(tb, FinalSegment::all(ab)));
    EXPECT_TRUE(cofinality_class_check(ta, FinalSegment::all(ab)));
    EXPECT_THROW(cofinality_class_check(ta, FinalSegment::cut(ab, 0, 0)), domain_violation);
}

TEST_F(RankTest, InducedContraction)
{
    const FinalSegment seg = FinalSegment::from_label(ab, 1);
    const S a = S::monomial(-GroupElement::basis(ab, {0, 0}));
    const GroupElement route1 = seg.project(chi_model(ZetaMap(ab), valuation(a).value()));
    const GroupElement route2 = w_data(full_log(a, comps(ab), policy), seg).value.value();
    EXPECT_EQ(route1, -GroupElement::basis(ab, {0, 1}));
    EXPECT_EQ(route2, route1);

    for (std::size_t n : {2u, 3u}) {
        const Universe u = universe(n);
        Sampler rng(u, 15);
        for (const QuotientSegment &q : exponential_rank(u)) {
            const SampledCheck c = theorem15_check(epsilon_preimage(q), rng, 100, comps(u), policy);
            EXPECT_TRUE(c.ok) << c.failure;
        }
    }
    Sampler rng(ab, 1);
    EXPECT_THROW(theorem15_check(FinalSegment::cut(ab, 0, 0), rng, 1, comps(ab), policy), domain_violation);
}

} // namespace
