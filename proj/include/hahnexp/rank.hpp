#ifndef HAHNEXP_RANK_HPP
#define HAHNEXP_RANK_HPP

// Rank calculus over the final segments of Gamma: compatibility of the
// coarsening w with the logarithm, the map to final segments of
// Gamma / ~zeta, the exponential and principal ranks, and the two-route
// check of the induced contraction on wK.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contraction.hpp"
#include "errors.hpp"
#include "exp_log.hpp"
#include "group.hpp"
#include "sampling.hpp"
#include "segment.hpp"
#include "series.hpp"

namespace hahnexp
{

// Every point (t, n) with n in [lo - 1, hi + 1]: one step of margin on each
// side so cuts at the window edges still see their neighbours.
inline std::vector<IndexPoint> window_points(const Universe &u, const OffsetWindow &w)
{
    if (w.lo > w.hi) {
        throw domain_violation("empty offset window");
    }
    std::vector<IndexPoint> out;
    for (std::size_t t = 0; t < u->size(); ++t) {
        for (std::int64_t n = w.lo - 1; n <= w.hi + 1; ++n) {
            out.push_back({t, n});
        }
    }
    return out;
}

// ALL, every label cut, and every cut (t, n) with n in the window.
inline std::vector<FinalSegment> enumerate_segments(const Universe &u, const OffsetWindow &w)
{
    if (w.lo > w.hi) {
        throw domain_violation("empty offset window");
    }
    std::vector<FinalSegment> out;
    for (std::size_t t = 0; t < u->size(); ++t) {
        out.push_back(FinalSegment::from_label(u, t));
        for (std::int64_t n = w.lo; n <= w.hi; ++n) {
            out.push_back(FinalSegment::cut(u, t, n));
        }
    }
    std::sort(out.begin(), out.end(), [](const FinalSegment &a, const FinalSegment &b) { return a > b; });
    return out;
}

// Smallest ~zeta-closed final segment containing seg.
inline FinalSegment seg_zeta_closure(const FinalSegment &seg)
{
    return FinalSegment::from_label(seg.universe(), seg.first_label());
}

inline bool is_compatible(const FinalSegment &seg)
{
    return seg_zeta_closure(seg) == seg;
}

// --- compatibility conditions ----------------------------------------------

// Gamma_w closed under zeta-equivalence, read off the descriptor.
inline bool condition_f(const FinalSegment &seg)
{
    return is_compatible(seg);
}

// Gamma \ Gamma_w closed under zeta, checked point by point on the window.
inline bool condition_e(const FinalSegment &seg, const OffsetWindow &w)
{
    const ZetaMap zeta(seg.universe());
    for (const IndexPoint &p : window_points(seg.universe(), w)) {
        if (!seg.contains(p) && seg.contains(zeta(p))) {
            return false;
        }
    }
    return true;
}

// Negative elements outside G_w built from window points: -e_p, -2e_p + e_q
// and -e_p - e_q / 2 for q > p.
inline std::vector<GroupElement> negative_probe_elements(const Universe &u, const OffsetWindow &w)
{
    const std::vector<IndexPoint> pts = window_points(u, w);
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const GroupElement base = GroupElement::basis(u, pts[i], -1);
        out.push_back(base);
        if (i + 1 < pts.size()) {
            const IndexPoint &q = pts[i + 1 + (i * 7) % (pts.size() - i - 1)];
            out.push_back(scale(base, 2) + GroupElement::basis(u, q));
            out.push_back(base - GroupElement::basis(u, q, Rational(1, 2)));
        }
    }
    return out;
}

// (vK)^{<0} \ G_w closed under chi, with chi computed through the logarithm.
inline bool condition_c(const FinalSegment &seg, const OffsetWindow &w, const LogComponents<GroupElement> &comps,
                        const PrecisionPolicy &policy = PrecisionPolicy{})
{
    for (const GroupElement &g : negative_probe_elements(seg.universe(), w)) {
        if (seg.contains(g)) {
            continue;
        }
        if (seg.contains(chi_from_log(g, comps, policy))) {
            return false;
        }
    }
    return true;
}

struct CompatibilityVerdicts {
    bool c = false;
    bool e = false;
    bool f = false;

    bool agree() const
    {
        return c == e && e == f;
    }
};

inline CompatibilityVerdicts compatibility_verdicts(const FinalSegment &seg, const OffsetWindow &w,
                                                    const LogComponents<GroupElement> &comps,
                                                    const PrecisionPolicy &policy = PrecisionPolicy{})
{
    return {condition_c(seg, w, comps, policy), condition_e(seg, w), condition_f(seg)};
}

// a > 0 outside R_w whose logarithm lands in R_w, which shows that w is not
// compatible. Searched among monomials t^g for the probe elements g.
inline std::optional<Series<GroupElement>> incompatibility_witness(const FinalSegment &seg, const OffsetWindow &w,
                                                                   const LogComponents<GroupElement> &comps,
                                                                   const PrecisionPolicy &policy = PrecisionPolicy{})
{
    for (const GroupElement &g : negative_probe_elements(seg.universe(), w)) {
        const Series<GroupElement> a = Series<GroupElement>::monomial(g);
        if (w_data(a, seg).in_ring) {
            continue;
        }
        if (w_data(full_log(a, comps, policy), seg).in_ring) {
            return a;
        }
    }
    return std::nullopt;
}

// Recomputes the witness property from scratch.
inline bool verify_incompatibility_witness(const Series<GroupElement> &a, const FinalSegment &seg,
                                           const LogComponents<GroupElement> &comps,
                                           const PrecisionPolicy &policy = PrecisionPolicy{})
{
    if (sign(a) <= 0 || w_data(a, seg).in_ring) {
        return false;
    }
    return w_data(full_log(a, comps, policy), seg).in_ring;
}

// Samples a positive element outside R_w with residue 1; requires
// seg != ALL.
inline Series<GroupElement> sample_outside_ring(Sampler &rng, const FinalSegment &seg)
{
    const Universe &u = seg.universe();
    std::vector<IndexPoint> outside;
    for (const IndexPoint &p : window_points(u, rng.window())) {
        if (!seg.contains(p)) {
            outside.push_back(p);
        }
    }
    if (outside.empty()) {
        throw domain_violation("segment leaves no window point outside");
    }
    const IndexPoint lead = outside[rng.below(outside.size())];
    GroupElement g = GroupElement::basis(u, lead, -rng.positive_coefficient());
    const GroupElement tail = rng.group_element(3);
    std::vector<GroupElement::term_type> later;
    for (const auto &t : tail.terms()) {
        if (t.first > lead) {
            later.push_back(t);
        }
    }
    g = g + GroupElement::from_terms(u, std::move(later));
    return rng.positive_with_value(g, true);
}

struct SampledCheck {
    bool ok = true;
    std::size_t checked = 0;
    std::string failure;

    void fail(std::string what)
    {
        if (ok) {
            ok = false;
            failure = std::move(what);
        }
    }
};

// l maps positives outside R_w to positives outside R_w.
inline SampledCheck compatible_log_check(const FinalSegment &seg, Sampler &rng, std::size_t samples,
                                         const LogComponents<GroupElement> &comps, const PrecisionPolicy &policy)
{
    SampledCheck out;
    if (seg.is_all()) {
        return out;
    }
    for (std::size_t i = 0; i < samples; ++i) {
        const Series<GroupElement> a = sample_outside_ring(rng, seg);
        const Series<GroupElement> l = full_log(a, comps, policy);
        ++out.checked;
        if (w_data(l, seg).in_ring || sign(l) <= 0) {
            out.fail("log(" + to_string(a) + ") = " + to_string(l) + " lies in R_w");
        }
    }
    return out;
}

// For compatible seg and sampled a with va in G_w: v(l a) in G_w when
// va != 0, l a in R_w when a is a w-unit, and v f(b) in G_w for sampled
// b with vb in G_w in the domain of f.
inline SampledCheck compatible_valuation_check(const FinalSegment &seg, Sampler &rng, std::size_t samples,
                                               const LogComponents<GroupElement> &comps, const PrecisionPolicy &policy)
{
    SampledCheck out;
    const Universe &u = seg.universe();
    const LogCrossSection h(u);
    for (std::size_t i = 0; i < samples; ++i) {
        GroupElement g = rng.group_element(3);
        if (!seg.contains(g)) {
            std::vector<GroupElement::term_type> inside;
            for (const auto &t : g.terms()) {
                if (seg.contains(t.first)) {
                    inside.push_back(t);
                }
            }
            g = GroupElement::from_terms(u, std::move(inside));
        }
        const Series<GroupElement> a = rng.positive_with_value(g, true);
        const Series<GroupElement> l = full_log(a, comps, policy);
        ++out.checked;
        if (!g.is_zero()) {
            if (!seg.contains(valuation(l).value())) {
                out.fail("v log(" + to_string(a) + ") leaves G_w");
            }
        } else if (!w_data(l, seg).in_ring) {
            out.fail("log of the w-unit " + to_string(a) + " leaves R_w");
        }

        const Series<GroupElement> b = h(g) + (rng.coin() ? rng.infinitesimal(2) : Series<GroupElement>());
        if (!b.is_exact_zero() && !seg.contains(valuation(b).value())) {
            continue;
        }
        const Series<GroupElement> fb = full_exp(b, comps, policy);
        if (!seg.contains(valuation(fb).value())) {
            out.fail("v exp(" + to_string(b) + ") leaves G_w");
        }
    }
    return out;
}

// l(1 + I_w) in I_w via v y = v l(1 + y) on sampled y in I_w.
inline SampledCheck lemma7_check(const FinalSegment &seg, Sampler &rng, std::size_t samples,
                                 const LogComponents<GroupElement> &comps, const PrecisionPolicy &policy)
{
    SampledCheck out;
    for (std::size_t i = 0; i < samples; ++i) {
        const Series<GroupElement> y = rng.infinitesimal(3);
        if (!w_data(y, seg).in_ideal) {
            continue;
        }
        const Series<GroupElement> l = full_log(Series<GroupElement>::constant(1) + y, comps, policy);
        ++out.checked;
        if (valuation(l) != valuation(y) || !w_data(l, seg).in_ideal) {
            out.fail("log(1 + " + to_string(y) + ") = " + to_string(l));
        }
    }
    return out;
}

// --- quotient segments -------------------------------------------------------

// Final segment of Gamma / ~zeta, i.e. the labels from `first` upwards.
class QuotientSegment
{
public:
    QuotientSegment(Universe u, std::size_t first) : universe_(std::move(u)), first_(first)
    {
        if (!universe_ || first_ >= universe_->size()) {
            throw domain_violation("quotient segment outside the order type");
        }
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }
    std::size_t first_label() const noexcept
    {
        return first_;
    }
    // T is finite, so every quotient segment has a minimum.
    std::optional<std::size_t> minimum() const noexcept
    {
        return first_;
    }
    bool contains(std::size_t label) const noexcept
    {
        return label >= first_;
    }
    std::vector<std::size_t> labels() const
    {
        std::vector<std::size_t> out;
        for (std::size_t t = first_; t < universe_->size(); ++t) {
            out.push_back(t);
        }
        return out;
    }

    // Inclusion order.
    friend std::strong_ordering operator<=>(const QuotientSegment &a, const QuotientSegment &b)
    {
        return b.first_ <=> a.first_;
    }
    friend bool operator==(const QuotientSegment &a, const QuotientSegment &b)
    {
        return same_universe(a.universe_, b.universe_) && a.first_ == b.first_;
    }

private:
    Universe universe_;
    std::size_t first_;
};

inline std::string to_string(const QuotientSegment &q)
{
    std::string out = "{";
    bool first = true;
    for (std::size_t t : q.labels()) {
        out += (first ? "" : ",") + q.universe()->label(t);
        first = false;
    }
    return out + "}";
}

// sigma(S): the set of classes met by S, computed by scanning the window.
// Returns nullopt if that set is not upward closed.
inline std::optional<QuotientSegment> sigma(const FinalSegment &seg, const OffsetWindow &w)
{
    std::set<std::size_t> met;
    for (const IndexPoint &p : window_points(seg.universe(), w)) {
        if (seg.contains(p)) {
            met.insert(p.label);
        }
    }
    if (met.empty()) {
        return std::nullopt;
    }
    const std::size_t first = *met.begin();
    for (std::size_t t = first; t < seg.universe()->size(); ++t) {
        if (!met.count(t)) {
            return std::nullopt;
        }
    }
    return QuotientSegment(seg.universe(), first);
}

// epsilon on compatible segments, read off the descriptor.
inline QuotientSegment epsilon(const FinalSegment &seg)
{
    if (!is_compatible(seg)) {
        throw domain_violation("epsilon is defined on compatible segments only");
    }
    return QuotientSegment(seg.universe(), seg.first_label());
}

inline FinalSegment epsilon_preimage(const QuotientSegment &q)
{
    return FinalSegment::from_label(q.universe(), q.first_label());
}

// All final segments of Gamma / ~zeta, ordered by inclusion.
inline std::vector<QuotientSegment> exponential_rank(const Universe &u)
{
    std::vector<QuotientSegment> out;
    for (std::size_t t = u->size(); t-- > 0;) {
        out.emplace_back(u, t);
    }
    return out;
}

// Order type of the quotient segments possessing a minimum, labelled by
// that minimum and listed in the order of the minima.
inline OrderTypeSpec principal_exponential_rank(const Universe &u)
{
    std::vector<std::size_t> minima;
    for (const QuotientSegment &q : exponential_rank(u)) {
        if (auto m = q.minimum()) {
            minima.push_back(*m);
        }
    }
    std::sort(minima.begin(), minima.end());
    std::vector<std::string> labels;
    for (std::size_t m : minima) {
        labels.push_back(u->label(m));
    }
    return OrderTypeSpec(std::move(labels));
}

struct PrincipalRankSummary {
    std::vector<FinalSegment> principal; // window cuts, by inclusion
    bool all_is_principal = false;
    bool unions_hold = true; // each segment is the union of the cuts inside it
    std::string order_type = "Gamma reversed";
};

inline PrincipalRankSummary principal_rank(const Universe &u, const OffsetWindow &w)
{
    PrincipalRankSummary out;
    const std::vector<FinalSegment> segs = enumerate_segments(u, w);
    for (const FinalSegment &s : segs) {
        if (s.minimum()) {
            out.principal.push_back(s);
        }
    }
    out.all_is_principal = FinalSegment::all(u).minimum().has_value();
    for (const FinalSegment &s : segs) {
        for (const IndexPoint &p : window_points(u, w)) {
            if (s.contains(p)) {
                const FinalSegment c = FinalSegment::cut(u, p.label, p.offset);
                if (!c.subset_of(s) || !c.contains(p)) {
                    out.unions_hold = false;
                }
            }
        }
    }
    return out;
}

// --- exhaustive window checks -------------------------------------------------

struct ExhaustiveCheck {
    bool ok = true;
    std::size_t segments = 0;
    std::string failure;

    void fail(std::string what)
    {
        if (ok) {
            ok = false;
            failure = std::move(what);
        }
    }
};

// sigma is a well-defined, injective, surjective, order-preserving map on
// ~-classes of window segments; epsilon agrees with it on compatible
// segments and is injective and order preserving there.
inline ExhaustiveCheck sigma_epsilon_check(const Universe &u, const OffsetWindow &w)
{
    ExhaustiveCheck out;
    const std::vector<FinalSegment> segs = enumerate_segments(u, w);
    out.segments = segs.size();
    std::vector<QuotientSegment> images;
    for (const FinalSegment &s : segs) {
        auto q = sigma(s, w);
        if (!q) {
            out.fail("sigma(" + to_string(s) + ") is not a final segment");
            return out;
        }
        images.push_back(*q);
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = 0; j < segs.size(); ++j) {
            const bool same_class = seg_zeta_closure(segs[i]) == seg_zeta_closure(segs[j]);
            if (same_class != (images[i] == images[j])) {
                out.fail("sigma does not separate the classes of " + to_string(segs[i]) + " and "
                         + to_string(segs[j]));
            }
            if (segs[i].subset_of(segs[j]) && !(images[i] <= images[j])) {
                out.fail("sigma reverses " + to_string(segs[i]) + " <= " + to_string(segs[j]));
            }
        }
    }
    for (const QuotientSegment &q : exponential_rank(u)) {
        if (std::find(images.begin(), images.end(), q) == images.end()) {
            out.fail("sigma misses " + to_string(q));
        }
    }
    std::vector<std::pair<FinalSegment, QuotientSegment>> compat;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (is_compatible(segs[i])) {
            const QuotientSegment e = epsilon(segs[i]);
            if (!(e == images[i])) {
                out.fail("epsilon and sigma differ on " + to_string(segs[i]));
            }
            compat.emplace_back(segs[i], e);
        }
    }
    for (const auto &[s, e] : compat) {
        for (const auto &[s2, e2] : compat) {
            if ((s == s2) != (e == e2)) {
                out.fail("epsilon is not injective at " + to_string(s));
            }
            if ((s <=> s2) != (e <=> e2)) {
                out.fail("epsilon does not preserve the order of " + to_string(s) + " and " + to_string(s2));
            }
        }
        if (!(epsilon_preimage(e) == s)) {
            out.fail("epsilon preimage of " + to_string(e) + " is not " + to_string(s));
        }
    }
    if (compat.size() != u->size()) {
        out.fail("compatible segments do not match the exponential rank");
    }
    return out;
}

// No ~zeta-closed final segment has a minimum: besides the descriptor test,
// every window point of a closed segment has its zeta-predecessor inside.
inline ExhaustiveCheck corollary14_check(const Universe &u, const OffsetWindow &w)
{
    ExhaustiveCheck out;
    const ZetaMap zeta(u);
    for (const FinalSegment &s : enumerate_segments(u, w)) {
        ++out.segments;
        if (!is_compatible(s)) {
            continue;
        }
        if (s.minimum()) {
            out.fail(to_string(s) + " is closed and has a minimum");
        }
        for (const IndexPoint &p : window_points(u, w)) {
            if (s.contains(p) && !s.contains(zeta.inverse(p))) {
                out.fail(to_string(p, *u) + " is the least point of " + to_string(s));
            }
        }
        // f-principal: some class lies entirely inside the segment, below
        // every point of other classes.
        const std::size_t first = s.first_label();
        for (const IndexPoint &p : window_points(u, w)) {
            if (p.label == first && !s.contains(p)) {
                out.fail("class " + u->label(first) + " is not inside " + to_string(s));
            }
            if (s.contains(p) && p.label != first && !(IndexPoint{first, w.hi + 1} < p)) {
                out.fail("class " + u->label(first) + " is not initial in " + to_string(s));
            }
        }
    }
    return out;
}

// Class-level form of cofinality: [v_G va]_zeta is the least class of
// epsilon(seg).
inline bool cofinality_class_check(const Series<GroupElement> &a, const FinalSegment &seg)
{
    detail::require_positive_infinite(a);
    if (!is_compatible(seg)) {
        throw domain_violation("cofinality criterion needs a compatible segment");
    }
    return natural_valuation(valuation(a).value()).label == epsilon(seg).first_label();
}

// Two routes to chi_w(wa): project chi(va) into G / G_w, or take w(l a)
// directly. Also checks zeta_w(v_G wa) = zeta(v_G wa) outside Gamma_w.
inline SampledCheck theorem15_check(const FinalSegment &seg, Sampler &rng, std::size_t samples,
                                    const LogComponents<GroupElement> &comps, const PrecisionPolicy &policy)
{
    if (!is_compatible(seg)) {
        throw domain_violation("induced contraction needs a compatible segment");
    }
    SampledCheck out;
    if (seg.is_all()) {
        return out;
    }
    const ZetaMap zeta(seg.universe());
    for (std::size_t i = 0; i < samples; ++i) {
        const Series<GroupElement> a = sample_outside_ring(rng, seg);
        const GroupElement va = valuation(a).value();
        const GroupElement route1 = seg.project(chi_model(zeta, va));
        const WData wl = w_data(full_log(a, comps, policy), seg);
        ++out.checked;
        if (wl.value.is_infinite() || !(wl.value.value() == route1)) {
            out.fail("chi_w routes differ at " + to_string(a));
            continue;
        }
        const IndexPoint cls = natural_valuation(seg.project(va));
        const IndexPoint induced = natural_valuation(wl.value.value());
        if (!(induced == zeta(cls)) || seg.contains(induced)) {
            out.fail("zeta_w differs from zeta at " + to_string(cls, *seg.universe()));
        }
    }
    return out;
}

} // namespace hahnexp

#endif
