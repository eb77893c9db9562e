#ifndef HAHNEXP_SUITES_HPP
#define HAHNEXP_SUITES_HPP

// Named invariant suites. Each one draws its samples from a generator seeded
// by (config seed, suite name), so a suite's verdict and witnesses depend
// only on the configuration.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "config.hpp"
#include "contraction.hpp"
#include "errors.hpp"
#include "exp_log.hpp"
#include "group.hpp"
#include "rank.hpp"
#include "sampling.hpp"
#include "segment.hpp"
#include "series.hpp"
#include "tower.hpp"

namespace hahnexp
{

struct SuiteResult {
    explicit SuiteResult(std::string n = {}) : name(std::move(n)) {}

    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string witness; // first counterexample, empty on success
    std::vector<std::pair<std::string, std::string>> details;

    void fail(std::string what)
    {
        if (passed) {
            passed = false;
            witness = std::move(what);
        }
    }
    void note(std::string key, std::string value)
    {
        details.emplace_back(std::move(key), std::move(value));
    }
    void absorb(const SampledCheck &c, const std::string &label)
    {
        checked += c.checked;
        if (!c.ok) {
            fail(label + ": " + c.failure);
        }
    }
};

// FNV-1a, so the stream does not depend on the standard library's hash.
inline std::uint64_t suite_seed(std::uint64_t seed, std::string_view name)
{
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace detail
{

struct SuiteContext {
    Universe u;
    LogComponents<GroupElement> comps;
    PrecisionPolicy policy;
    Sampler rng;

    SuiteContext(const RunConfig &cfg, std::string_view name)
        : u(cfg.universe()), comps(make_components(LogCrossSection(u), cfg.residue_log())),
          policy(cfg.taylor_order), rng(u, suite_seed(cfg.seed, name), cfg.window)
    {
    }
};

// Positive infinite sample; every fourth has a residue other than 1.
inline Series<GroupElement> mixed_positive_infinite(Sampler &rng)
{
    return rng.positive_infinite(rng.below(4) != 0);
}

} // namespace detail

// va < v(l a), and its group form v(h(g)) > g.
inline SuiteResult suite_strong(const RunConfig &cfg)
{
    SuiteResult r{"strong"};
    detail::SuiteContext cx(cfg, r.name);
    const LogCrossSection h(cx.u);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const Series<GroupElement> a = detail::mixed_positive_infinite(cx.rng);
        ++r.checked;
        if (!check_strong(a, cx.comps, cx.policy)) {
            r.fail("v(log a) <= va for a = " + to_string(a));
        }
        const GroupElement g = cx.rng.negative_group_element();
        if (!(valuation(h(g)).value() > g)) {
            r.fail("v(h(g)) <= g for g = " + to_string(g));
        }
    }
    return r;
}

// v(b - l(1 + b)) > vb, and = 2 vb once the quadratic term is kept.
inline SuiteResult suite_t1(const RunConfig &cfg)
{
    SuiteResult r{"t1"};
    detail::SuiteContext cx(cfg, r.name);
    std::size_t quadratic = 0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const Series<GroupElement> b = cx.rng.infinitesimal();
        ++r.checked;
        if (!check_t1(b, cx.comps, cx.policy)) {
            r.fail("v(b - log(1 + b)) <= vb for b = " + to_string(b));
            continue;
        }
        if (cfg.taylor_order >= 2) {
            const GroupElement vb = valuation(b).value();
            const auto d = t1_defect_valuation(b, cx.comps, cx.policy);
            ++quadratic;
            if (!d || !(*d == scale(vb, 2))) {
                r.fail("v(b - log(1 + b)) != 2 vb for b = " + to_string(b));
            }
        }
    }
    r.note("quadratic_checks", std::to_string(quadratic));
    return r;
}

// a > n l(a) for n = 1..10.
inline SuiteResult suite_growth(const RunConfig &cfg)
{
    SuiteResult r{"growth"};
    detail::SuiteContext cx(cfg, r.name);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const Series<GroupElement> a = detail::mixed_positive_infinite(cx.rng);
        for (unsigned n = 1; n <= 10; ++n) {
            ++r.checked;
            if (!check_growth(a, n, cx.comps, cx.policy)) {
                r.fail("a <= " + std::to_string(n) + " log a for a = " + to_string(a));
            }
        }
    }
    return r;
}

namespace detail
{

// chi^n g >= g' and chi^n g' >= g for some n <= bound.
inline bool chi_witness(const ZetaMap &z, const GroupElement &g, const GroupElement &h, unsigned bound)
{
    GroupElement x = g;
    GroupElement y = h;
    for (unsigned n = 0; n <= bound; ++n) {
        if (n > 0) {
            x = chi_model(z, x);
            y = chi_model(z, y);
        }
        if (x >= h && y >= g) {
            return true;
        }
    }
    return false;
}

// A positive infinite element whose value shares the zeta-class of g half
// of the time.
inline Series<GroupElement> partner(Sampler &rng, const GroupElement &g)
{
    if (rng.coin()) {
        return mixed_positive_infinite(rng);
    }
    const IndexPoint p = natural_valuation(g);
    const auto span = static_cast<std::size_t>(rng.window().hi - rng.window().lo + 1);
    const IndexPoint q{p.label, rng.window().lo + static_cast<std::int64_t>(rng.below(span))};
    GroupElement h = GroupElement::basis(g.universe(), q, -rng.positive_coefficient());
    const GroupElement tail = rng.group_element(2);
    std::vector<GroupElement::term_type> later;
    for (const auto &t : tail.terms()) {
        if (t.first > q) {
            later.push_back(t);
        }
    }
    return rng.positive_with_value(h + GroupElement::from_terms(g.universe(), std::move(later)), rng.coin());
}

} // namespace detail

// a ~l a' decided by zeta-classes agrees with the bounded witness search, on
// both the field and the group level.
inline SuiteResult suite_lemma9(const RunConfig &cfg)
{
    SuiteResult r{"lemma9"};
    detail::SuiteContext cx(cfg, r.name);
    const ZetaMap zeta(cx.u);
    std::size_t equivalent = 0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const Series<GroupElement> a = detail::mixed_positive_infinite(cx.rng);
        const GroupElement va = valuation(a).value();
        const Series<GroupElement> b = detail::partner(cx.rng, va);
        const GroupElement vb = valuation(b).value();
        ++r.checked;
        const bool by_class = log_equivalent(a, b, zeta);
        const bool by_search = log_equiv_witness(a, b, cfg.witness_bound, cx.comps).has_value();
        const bool by_chi = chi_equiv(zeta, va, vb);
        const bool by_chi_search = detail::chi_witness(zeta, va, vb, cfg.witness_bound);
        equivalent += by_class;
        if (by_class != by_search || by_class != by_chi || by_chi != by_chi_search) {
            r.fail("decisions differ for a = " + to_string(a) + ", a' = " + to_string(b));
        }
    }
    r.note("equivalent_pairs", std::to_string(equivalent));
    return r;
}

// a < a' < a^n gives a ~l a'; archimedean-equivalent values are
// chi-equivalent, and chi-classes are closed under addition.
inline SuiteResult suite_lemma10(const RunConfig &cfg)
{
    SuiteResult r{"lemma10"};
    detail::SuiteContext cx(cfg, r.name);
    const ZetaMap zeta(cx.u);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const Series<GroupElement> a = cx.rng.positive_infinite(true);
        const GroupElement va = valuation(a).value();
        const unsigned n = 2 + static_cast<unsigned>(cx.rng.below(4));
        // a' = a t^{(r-1) va} (1 + eps) with 1 < r < n
        const Rational r_exp = 1 + Rational(1 + cx.rng.below(2 * (n - 1) - 1), 2);
        const Series<GroupElement> b = (a * cx.rng.one_unit()).shifted(scale(va, r_exp - 1));
        Series<GroupElement> an = Series<GroupElement>::constant(1);
        for (unsigned k = 0; k < n; ++k) {
            an = an * a;
        }
        ++r.checked;
        if (!(sign(b - a) > 0 && sign(an - b) > 0)) {
            r.fail("sample is not between a and a^n: " + to_string(b));
            continue;
        }
        if (!log_equivalent(a, b, zeta) || !log_equiv_witness(a, b, cfg.witness_bound, cx.comps)) {
            r.fail("a = " + to_string(a) + " and a' = " + to_string(b) + " are not log-equivalent");
        }
        const GroupElement vb = valuation(b).value();
        if (arch_equivalent(va, vb) && !chi_equiv(zeta, va, vb)) {
            r.fail("archimedean-equivalent values are not chi-equivalent: " + to_string(va));
        }
        const GroupElement g = cx.rng.negative_group_element();
        const Series<GroupElement> c = detail::partner(cx.rng, g);
        const GroupElement g2 = valuation(c).value();
        if (chi_equiv(zeta, g, g2) && !chi_equiv(zeta, g, g + g2)) {
            r.fail("chi-class of " + to_string(g) + " is not closed under adding " + to_string(g2));
        }
    }
    return r;
}

// The log, window and descriptor criteria agree on every window segment; incompatible
// segments get a verified witness, compatible ones pass the sampled checks.
inline SuiteResult suite_thm12(const RunConfig &cfg)
{
    SuiteResult r{"thm12"};
    detail::SuiteContext cx(cfg, r.name);
    std::size_t compatible = 0;
    std::size_t witnesses = 0;
    const std::size_t per_segment = std::max<std::size_t>(1, cfg.samples / 10);
    for (const FinalSegment &seg : enumerate_segments(cx.u, cfg.window)) {
        ++r.checked;
        const CompatibilityVerdicts v = compatibility_verdicts(seg, cfg.window, cx.comps, cx.policy);
        if (!v.agree()) {
            r.fail("verdicts (log, window, descriptor) = (" + std::to_string(v.c) + "," + std::to_string(v.e) + ","
                   + std::to_string(v.f) + ") on " + to_string(seg));
            continue;
        }
        if (v.f) {
            ++compatible;
            r.absorb(compatible_log_check(seg, cx.rng, per_segment, cx.comps, cx.policy), to_string(seg));
            r.absorb(compatible_valuation_check(seg, cx.rng, per_segment, cx.comps, cx.policy), to_string(seg));
        } else {
            const auto w = incompatibility_witness(seg, cfg.window, cx.comps, cx.policy);
            if (!w || !verify_incompatibility_witness(*w, seg, cx.comps, cx.policy)) {
                r.fail("no verified witness for " + to_string(seg));
            } else {
                ++witnesses;
            }
        }
        r.absorb(lemma7_check(seg, cx.rng, per_segment, cx.comps, cx.policy), to_string(seg));
    }
    r.note("compatible_segments", std::to_string(compatible));
    r.note("witnesses", std::to_string(witnesses));
    return r;
}

// sigma and epsilon on the window, and the principal exponential rank.
inline SuiteResult suite_thm13(const RunConfig &cfg)
{
    SuiteResult r{"thm13"};
    const Universe u = cfg.universe();
    const ExhaustiveCheck c = sigma_epsilon_check(u, cfg.window);
    r.checked = c.segments;
    if (!c.ok) {
        r.fail(c.failure);
    }
    const OrderTypeSpec per = principal_exponential_rank(u);
    const OrderTypeSpec quotient = zeta_quotient_order_type(ZetaMap(u));
    if (!same_order_type(per, quotient) || !same_order_type(per, *u)) {
        r.fail("principal exponential rank " + to_string(per) + " differs from " + to_string(quotient));
    }
    const PrincipalRankSummary pr = principal_rank(u, cfg.window);
    if (pr.all_is_principal || !pr.unions_hold) {
        r.fail("principal rank summary is inconsistent");
    }
    r.note("principal_exponential_rank", to_string(per));
    r.note("exponential_rank_size", std::to_string(exponential_rank(u).size()));
    return r;
}

inline SuiteResult suite_cor14(const RunConfig &cfg)
{
    SuiteResult r{"cor14"};
    const ExhaustiveCheck c = corollary14_check(cfg.universe(), cfg.window);
    r.checked = c.segments;
    if (!c.ok) {
        r.fail(c.failure);
    }
    return r;
}

inline SuiteResult suite_thm15(const RunConfig &cfg)
{
    SuiteResult r{"thm15"};
    detail::SuiteContext cx(cfg, r.name);
    for (const QuotientSegment &q : exponential_rank(cx.u)) {
        const FinalSegment seg = epsilon_preimage(q);
        r.absorb(theorem15_check(seg, cx.rng, cfg.samples, cx.comps, cx.policy), to_string(seg));
    }
    return r;
}

// assemble o decompose and decompose o assemble on sampled inputs.
inline SuiteResult suite_thm16(const RunConfig &cfg)
{
    SuiteResult r{"thm16"};
    detail::SuiteContext cx(cfg, r.name);
    const LogCrossSection h(cx.u);
    const Logarithm<GroupElement> log = assemble_log(cx.comps);
    CompatibilityProbe<GroupElement> probe{{}, {}, cx.policy};
    for (std::size_t i = 0; i < 20; ++i) {
        probe.group_elements.push_back(cx.rng.group_element());
        probe.one_units.push_back(cx.rng.one_unit());
    }
    const LogComponents<GroupElement> back = decompose_log(log, probe);
    const Logarithm<GroupElement> again = assemble_log(back);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const GroupElement g = cx.rng.coin() ? cx.rng.group_element() : GroupElement(cx.u);
        const Series<GroupElement> a = cx.rng.positive_with_value(g, true);
        const Series<GroupElement> u1 = cx.rng.one_unit();
        const GroupElement g2 = cx.rng.group_element();
        ++r.checked;
        if (!(again(a, cx.policy) == log(a, cx.policy))) {
            r.fail("assemble(decompose(l)) differs from l at " + to_string(a));
        }
        if (!(back.cross_section(g2) == h(g2)) || !(back.cross_section(g2) == cx.comps.cross_section(g2))) {
            r.fail("decomposed cross-section differs at " + to_string(g2));
        }
        if (!(back.right(u1, cx.policy) == cx.comps.right(u1, cx.policy))) {
            r.fail("decomposed right logarithm differs at " + to_string(u1));
        }
        if (!(back.mid.exact(1) == cx.comps.mid.exact(1))) {
            r.fail("decomposed residue logarithm differs at 1");
        }
    }
    return r;
}

// v(h_n(g)) > g at each stage, and the extension properties of h_n and l_n.
inline SuiteResult suite_tower27(const RunConfig &cfg)
{
    SuiteResult r{"tower27"};
    detail::SuiteContext cx(cfg, r.name);
    const StageTower tower(cx.u, cfg.depth, cfg.max_depth, cfg.residue_log());
    for (unsigned n = 0; n <= cfg.depth; ++n) {
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            const StageElement g = sample_negative_stage(cx.rng, n);
            ++r.checked;
            if (!tower.check27(g, n)) {
                r.fail("v(h(g)) > g fails at stage " + std::to_string(n) + " for " + to_string(g));
            }
            if (n == 0) {
                continue;
            }
            const StageElement low = sample_negative_stage(cx.rng, n - 1);
            if (!(tower.h(n, tower.embed(low, n)) == tower.embed(tower.h(n - 1, low), n))) {
                r.fail("h_" + std::to_string(n) + " does not extend h_" + std::to_string(n - 1) + " at "
                       + to_string(low));
            }
            const Series<StageElement> a = sample_positive_infinite_stage(cx.rng, n - 1);
            if (!(tower.log(a, n, cx.policy) == tower.embed(tower.log(a, n - 1, cx.policy), n))) {
                r.fail("l_" + std::to_string(n) + " does not extend l_" + std::to_string(n - 1) + " at "
                       + to_string(a));
            }
            const Series<StageElement> u1 =
                Series<StageElement>::constant(1) + sample_infinitesimal_stage(cx.rng, n - 1);
            if (!(tower.components(n).right(u1, cx.policy) == tower.components(n - 1).right(u1, cx.policy))) {
                r.fail("right logarithm changes between stages at " + to_string(u1));
            }
        }
    }
    return r;
}

// Descent to stage 0, exp o log, the growth of the exp domain, and
// log-equivalence of every sampled element to a stage-0 element.
inline SuiteResult suite_descent(const RunConfig &cfg)
{
    SuiteResult r{"descent"};
    detail::SuiteContext cx(cfg, r.name);
    const StageTower tower(cx.u, cfg.depth, cfg.max_depth, cfg.residue_log());
    const ZetaMap zeta(cx.u);
    unsigned max_k = 0;
    for (unsigned n = 0; n <= cfg.depth; ++n) {
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            const Series<StageElement> a = sample_positive_infinite_stage(cx.rng, n);
            ++r.checked;
            const unsigned k = tower.descent(a);
            max_k = std::max(max_k, k);
            if (k > n) {
                r.fail("descent of " + to_string(a) + " takes " + std::to_string(k) + " steps");
            }
            Series<StageElement> base = a;
            for (unsigned j = 0; j < k; ++j) {
                base = log_mod_finite(base, tower.components(cfg.depth));
            }
            if (!log_equiv_witness(a, base, cfg.witness_bound, tower.components(cfg.depth))) {
                r.fail(to_string(a) + " is not log-equivalent to a stage-0 element");
            }
            const Series<StageElement> l = tower.log(a, n, cx.policy);
            if (!agrees_up_to_floor(tower.exp(l, n, cx.policy), a)) {
                r.fail("exp(log a) != a at stage " + std::to_string(n) + " for " + to_string(a));
            }
        }
        if (n > 0) {
            const Series<StageElement> w = tower.exp_domain_witness(n);
            if (!tower.in_exp_domain(w, n) || tower.in_exp_domain(w, n - 1)) {
                r.fail("exp-domain witness fails at stage " + std::to_string(n));
            } else {
                r.note("domain_witness_" + std::to_string(n), to_string(w));
            }
        }
    }
    r.note("max_descent", std::to_string(max_k));
    return r;
}

inline SuiteResult suite_restricted(const RunConfig &cfg)
{
    SuiteResult r{"restricted"};
    detail::SuiteContext cx(cfg, r.name);
    const StageTower tower(cx.u, cfg.depth, cfg.max_depth, cfg.residue_log());
    const Series<StageElement> simple =
        Series<StageElement>::monomial(StageElement::base(GroupElement::basis(cx.u, {0, 0})));
    ++r.checked;
    if (!tower.restricted_exp_agreement(simple, 0, cx.policy)
        || !tower.restricted_exp_agreement(Series<StageElement>(), 0, cx.policy)) {
        r.fail("restricted exp disagrees at t^{e(" + cx.u->label(0) + ",0)} or 0");
    }
    for (unsigned n = 0; n <= cfg.depth; ++n) {
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            const Series<StageElement> a = sample_infinitesimal_stage(cx.rng, n);
            ++r.checked;
            if (!tower.restricted_exp_agreement(a, n, cx.policy)) {
                r.fail("restricted exp disagrees at " + to_string(a));
            }
        }
    }
    return r;
}

inline const std::map<std::string, std::function<SuiteResult(const RunConfig &)>> &suite_table()
{
    static const std::map<std::string, std::function<SuiteResult(const RunConfig &)>> table{
        {"strong", suite_strong},   {"t1", suite_t1},         {"growth", suite_growth},
        {"lemma9", suite_lemma9},   {"lemma10", suite_lemma10}, {"thm12", suite_thm12},
        {"thm13", suite_thm13},     {"cor14", suite_cor14},   {"thm15", suite_thm15},
        {"thm16", suite_thm16},     {"tower27", suite_tower27}, {"descent", suite_descent},
        {"restricted", suite_restricted},
    };
    return table;
}

inline std::vector<std::string> suite_names()
{
    std::vector<std::string> out;
    for (const auto &[name, fn] : suite_table()) {
        out.push_back(name);
    }
    return out;
}

// Runs a suite; library errors become a failed result carrying the message.
inline SuiteResult run_suite(const std::string &name, const RunConfig &cfg)
{
    const auto &table = suite_table();
    const auto it = table.find(name);
    if (it == table.end()) {
        throw domain_violation("unknown suite '" + name + "'");
    }
    cfg.validate();
    try {
        return it->second(cfg);
    } catch (const error &e) {
        SuiteResult r{name};
        r.fail(std::string("error: ") + e.what());
        return r;
    }
}

} // namespace hahnexp

#endif
