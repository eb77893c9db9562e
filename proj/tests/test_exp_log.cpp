#include <gtest/gtest.h>

#include <cmath>

#include <hahnexp/contraction.hpp>
#include <hahnexp/exp_log.hpp>
#include <hahnexp/sampling.hpp>

#include "helpers.hpp"

using namespace hahnexp;
using namespace testing_support;

namespace
{

using S = Series<GroupElement>;
using Ext = ExtValue<GroupElement>;

class ExpLogTest : public ::testing::Test
{
protected:
    Universe u = universe(1);
    LogCrossSection h{u};
    LogComponents<GroupElement> comps = make_components(h);
    PrecisionPolicy n2{2};
    PrecisionPolicy n4{4};
    GroupElement e0 = e(u, 0, 0);
};

TEST_F(ExpLogTest, RightExponential)
{
    EXPECT_EQ(rexp(mono(e0), n2), ser(u, "1 + t^{e(t0,0)} + 1/2*t^{2*e(t0,0)} (mod t^{3*e(t0,0)})"));
    EXPECT_TRUE(rexp(S(), n2).is_exact());
    EXPECT_EQ(rexp(S(), n2), constant(1));
    const S eps = ser(u, "t^{e(t0,0)} - 2/3*t^{e(t0,1)}");
    EXPECT_TRUE(agrees_up_to_floor(rexp(eps, n4) * rexp(-eps, n4), constant(1)));
    EXPECT_THROW(rexp(constant(1), n2), domain_violation);
    EXPECT_THROW(rexp(mono(-e0), n2), domain_violation);
}

TEST_F(ExpLogTest, RightLogarithm)
{
    EXPECT_EQ(rlog(ser(u, "1 + t^{e(t0,0)}"), n2), ser(u, "t^{e(t0,0)} - 1/2*t^{2*e(t0,0)} (mod t^{3*e(t0,0)})"));
    EXPECT_TRUE(rlog(constant(1), n2).is_exact_zero());
    EXPECT_THROW(rlog(constant(2), n2), domain_violation);
    const S eps = ser(u, "1/2*t^{e(t0,-1)} + 3*t^{e(t0,0)}");
    EXPECT_TRUE(agrees_up_to_floor(rexp(rlog(constant(1) + eps, n4), n4), constant(1) + eps));
    EXPECT_TRUE(agrees_up_to_floor(rlog(rexp(eps, n4), n4), eps));
}

TEST_F(ExpLogTest, CrossSectionExamples)
{
    EXPECT_EQ(h(e0), mono(-e(u, 0, 1)));
    EXPECT_EQ(h(e0 + e(u, 0, 3, 2)), mono(-e(u, 0, 1)) + mono(-e(u, 0, 4), 2));
    EXPECT_TRUE(h(GroupElement(u)).is_exact_zero());
    EXPECT_EQ(h.preimage(h(e0 - e(u, 0, 2, Rational(1, 3)))), e0 - e(u, 0, 2, Rational(1, 3)));
    EXPECT_FALSE(h.preimage(mono(scale(e0, Rational(-1, 2)) - e(u, 0, 1, Rational(1, 2)))));
}

TEST_F(ExpLogTest, LogarithmExamples)
{
    EXPECT_EQ(full_log(mono(-e0), comps, n4), mono(-e(u, 0, 1)));
    EXPECT_TRUE(full_log(constant(1), comps, n4).is_exact_zero());
    const S a = mono(-e0) * ser(u, "1 + t^{e(t0,0)}");
    EXPECT_EQ(full_log(a, comps, n2),
              ser(u, "t^{-e(t0,1)} + t^{e(t0,0)} - 1/2*t^{2*e(t0,0)} (mod t^{3*e(t0,0)})"));
    EXPECT_THROW(full_log(constant(-1), comps, n2), domain_violation);
    EXPECT_THROW(full_log(mono(-e0, 2), comps, n2), non_monic_residue);
    // modulo the valuation ring the residue does not matter
    EXPECT_EQ(log_mod_finite(mono(-e0, 2), comps), mono(-e(u, 0, 1)).truncated(Ext(GroupElement())));
}

TEST_F(ExpLogTest, ExponentialExamples)
{
    EXPECT_EQ(full_exp(mono(-e(u, 0, 1)), comps, n4), mono(-e0));
    EXPECT_EQ(full_exp(S(), comps, n4), constant(1));
    EXPECT_THROW(full_exp(mono(scale(e0, Rational(-1, 2)) - e(u, 0, 1, Rational(1, 2))), comps, n4), not_in_image);
    EXPECT_THROW(full_exp(constant(2), comps, n4), non_monic_residue);
    // -e0 = h(e_{-1}) is in the image
    EXPECT_EQ(full_exp(mono(-e0), comps, n4), mono(-e(u, 0, -1)));
}

TEST_F(ExpLogTest, InducedContraction)
{
    EXPECT_EQ(chi_from_log(-e0, comps), -e(u, 0, 1));
    EXPECT_EQ(zeta_from_chi({0, 0}, u, comps), (IndexPoint{0, 1}));
    EXPECT_EQ(chi_from_log(-scale(e0, 7) + e(u, 0, 2), comps), -e(u, 0, 1));
    EXPECT_THROW(chi_from_log(e0, comps), domain_violation);

    const Universe u3 = universe(3);
    const auto c3 = make_components(LogCrossSection(u3));
    const ZetaMap z(u3);
    Sampler rng(u3, 21);
    for (int i = 0; i < 300; ++i) {
        const GroupElement g = rng.negative_group_element();
        EXPECT_EQ(chi_from_log(g, c3), chi_model(z, g));
        const IndexPoint p = rng.index();
        EXPECT_EQ(zeta_from_chi(p, u3, c3), z(p));
        // value-equal representatives give the same chi
        const S a = rng.positive_with_value(g, rng.coin());
        const S b = rng.positive_with_value(g, rng.coin());
        EXPECT_EQ(valuation(log_mod_finite(a, c3)), valuation(log_mod_finite(b, c3)));
    }
}

TEST_F(ExpLogTest, AxiomExamples)
{
    EXPECT_TRUE(check_strong(mono(-e0), comps, n4));
    EXPECT_TRUE(check_t1(mono(e0), comps, n4));
    EXPECT_EQ(t1_defect_valuation(mono(e0), comps, n4), scale(e0, 2));
    EXPECT_TRUE(check_growth(mono(-e0), 10, comps, n4));
    EXPECT_THROW(check_strong(mono(e0), comps, n4), domain_violation);
    EXPECT_THROW(check_t1(mono(-e0), comps, n4), domain_violation);
}

TEST_F(ExpLogTest, SampledAxioms)
{
    const Universe u3 = universe(3);
    const auto c3 = make_components(LogCrossSection(u3));
    Sampler rng(u3, 4);
    for (int i = 0; i < 300; ++i) {
        const S a = rng.positive_infinite(rng.coin());
        EXPECT_TRUE(check_strong(a, c3, n4)) << to_string(a);
        for (unsigned n = 1; n <= 10; ++n) {
            EXPECT_TRUE(check_growth(a, n, c3, n4)) << to_string(a);
        }
        const S b = rng.infinitesimal();
        EXPECT_TRUE(check_t1(b, c3, n4)) << to_string(b);
        // the quadratic Mercator term always survives for a nonzero b
        EXPECT_EQ(t1_defect_valuation(b, c3, n4), scale(valuation(b).value(), 2)) << to_string(b);
        const GroupElement g = rng.negative_group_element();
        EXPECT_GT(valuation(LogCrossSection(u3)(g)), Ext(g));
    }
}

TEST_F(ExpLogTest, LogIsAnOrderPreservingHomomorphism)
{
    const Universe u3 = universe(3);
    const auto c3 = make_components(LogCrossSection(u3));
    Sampler rng(u3, 8);
    int decided = 0;
    for (int i = 0; i < 300; ++i) {
        const S a = rng.coin() ? rng.positive_infinite() : rng.one_unit();
        const S b = rng.coin() ? rng.positive_with_value(rng.group_element(), true) : rng.one_unit();
        const S la = full_log(a, c3, n4);
        const S lb = full_log(b, c3, n4);
        EXPECT_TRUE(agrees_up_to_floor(full_log(a * b, c3, n4), la + lb));
        try {
            const int ab = sign(b - a);
            const int lab = sign(lb - la);
            EXPECT_EQ(ab, lab) << to_string(a) << " / " << to_string(b);
            ++decided;
        } catch (const precision_insufficient &) {
        }
        // exp o log on the domain of exp
        EXPECT_TRUE(agrees_up_to_floor(full_exp(la, c3, n4), a));
    }
    EXPECT_GT(decided, 100);
}

TEST_F(ExpLogTest, LogEquivalence)
{
    const Universe u3 = universe(3);
    const auto c3 = make_components(LogCrossSection(u3));
    const ZetaMap z(u3);
    const S a = mono(-e(u3, 0, 0));
    const S b = mono(-e(u3, 0, 3));
    EXPECT_TRUE(log_equivalent(a, b, z));
    // l^3 a = b modulo the valuation ring is undecidable, so the witness is 4
    EXPECT_EQ(log_equiv_witness(a, b, 8, c3), 4u);
    const S c = mono(-e(u3, 1, 0));
    EXPECT_FALSE(log_equivalent(a, c, z));
    EXPECT_FALSE(log_equiv_witness(a, c, 8, c3));
    EXPECT_EQ(log_equiv_witness(a, a, 8, c3), 0u);

    Sampler rng(u3, 17);
    for (int i = 0; i < 300; ++i) {
        const S x = rng.positive_infinite(rng.coin());
        const S y = rng.positive_infinite(rng.coin());
        EXPECT_EQ(log_equivalent(x, y, z), log_equiv_witness(x, y, 8, c3).has_value())
            << to_string(x) << " / " << to_string(y);
        // a < a' < a^2 forces a ~l a'
        const S y2 = x * x * rng.one_unit();
        EXPECT_TRUE(log_equivalent(x, y2, z));
    }
}

TEST_F(ExpLogTest, AssembleAndDecompose)
{
    const Universe u3 = universe(3);
    const LogCrossSection h3(u3);
    const auto c3 = make_components(h3);
    const Logarithm<GroupElement> log = assemble_log(c3);
    Sampler rng(u3, 31);
    CompatibilityProbe<GroupElement> probe;
    for (int i = 0; i < 20; ++i) {
        probe.group_elements.push_back(rng.group_element());
        probe.one_units.push_back(rng.one_unit());
    }
    const LogComponents<GroupElement> back = decompose_log(log, probe);
    const Logarithm<GroupElement> again = assemble_log(back);
    for (int i = 0; i < 100; ++i) {
        const S a = rng.positive_with_value(rng.group_element(), true);
        EXPECT_EQ(again(a, n4), log(a, n4));
        const GroupElement g = rng.group_element();
        EXPECT_EQ(back.cross_section(g), h3(g));
        const S one = rng.one_unit();
        EXPECT_EQ(back.right(one, n4), rlog(one, n4));
    }
    // a map sending 1-units outside the ideal is not compatible with v
    const Logarithm<GroupElement> bad{[](const S &a, const PrecisionPolicy &) { return a - constant(1) + constant(1); }};
    probe.one_units = {constant(1) + mono(e(u3, 0, 0))};
    EXPECT_THROW(decompose_log(bad, probe), domain_violation);
}

TEST_F(ExpLogTest, IntervalResidues)
{
    const Rational width(1, 1000000);
    for (long r : {2L, 3L, 7L, 10L}) {
        for (long d : {1L, 3L}) {
            const Rational q = make_rational(r, d);
            const RationalInterval iv = enclose_log(q, width);
            const double exact = std::log(static_cast<double>(r) / static_cast<double>(d));
            EXPECT_LE(iv.lo.get_d(), exact + 1e-12);
            EXPECT_GE(iv.hi.get_d(), exact - 1e-12);
            EXPECT_LE(iv.width(), width);
            const RationalInterval ex = enclose_exp(q, width);
            EXPECT_LE(ex.lo.get_d(), std::exp(q.get_d()) * (1 + 1e-12));
            EXPECT_GE(ex.hi.get_d(), std::exp(q.get_d()) * (1 - 1e-12));
            EXPECT_LE(ex.width(), width);
        }
    }
    EXPECT_EQ(enclose_log(1, width), (RationalInterval{0, 0}));
    EXPECT_THROW(enclose_log(0, width), domain_violation);

    const auto ic = make_components(h, ResidueLog{ResidueLog::Mode::interval, width});
    const IntervalLog<GroupElement> l = full_log_interval(mono(-e0, 2), ic, n4);
    EXPECT_EQ(l.series_part, mono(-e(u, 0, 1)));
    EXPECT_LE(l.constant.lo.get_d(), std::log(2.0));
    EXPECT_GE(l.constant.hi.get_d(), std::log(2.0));
}

} // namespace
