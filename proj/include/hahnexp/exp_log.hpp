#ifndef HAHNEXP_EXP_LOG_HPP
#define HAHNEXP_EXP_LOG_HPP

// Logarithms on Q((G)) assembled from three pieces: a logarithmic
// cross-section h acting on the monomials, the residue logarithm, and the
// canonical Taylor right logarithm on 1-units.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contraction.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "residue_log.hpp"
#include "series.hpp"

namespace hahnexp
{

struct PrecisionPolicy {
    unsigned taylor_order = 4;

    explicit PrecisionPolicy(unsigned order = 4) : taylor_order(order)
    {
        if (order < 1) {
            throw domain_violation("taylor order must be at least 1");
        }
    }
};

namespace detail
{

template <OrderedGroup E>
E positive_valuation(const Series<E> &eps, const char *what)
{
    const ExtValue<E> lb = valuation_lower_bound(eps);
    if (lb.is_infinite()) {
        return E{};
    }
    if (lb.value().sign() <= 0) {
        if (eps.stored_zero()) {
            throw indeterminate_valuation();
        }
        throw domain_violation(what);
    }
    return lb.value();
}

} // namespace detail

// sum_{i<=N} eps^i / i!, floor min(propagated, (N+1) v(eps)).
template <OrderedGroup E>
Series<E> rexp(const Series<E> &eps, const PrecisionPolicy &policy)
{
    const E v = detail::positive_valuation(eps, "right exponential needs v(eps) > 0");
    if (eps.is_exact_zero()) {
        return Series<E>::constant(1);
    }
    Series<E> sum = Series<E>::constant(1);
    Series<E> power = Series<E>::constant(1);
    for (unsigned i = 1; i <= policy.taylor_order; ++i) {
        power = power * eps;
        sum += scale(power, Rational(1) / factorial(i));
    }
    return sum.truncated(ExtValue<E>(scale(v, Rational(policy.taylor_order + 1))));
}

// Mercator series of u = 1 + eps: sum_{i<=N} (-1)^(i+1) eps^i / i.
template <OrderedGroup E>
Series<E> rlog(const Series<E> &u, const PrecisionPolicy &policy)
{
    const Series<E> eps = u - Series<E>::constant(1);
    const ExtValue<E> lb = valuation_lower_bound(eps);
    if (!lb.is_infinite() && lb.value().sign() <= 0) {
        if (eps.stored_zero()) {
            throw precision_insufficient("1-unit test is not decidable below the error floor");
        }
        throw domain_violation("right logarithm needs a 1-unit");
    }
    if (eps.is_exact_zero()) {
        return Series<E>();
    }
    const E v = lb.value();
    Series<E> sum;
    Series<E> power = Series<E>::constant(1);
    for (unsigned i = 1; i <= policy.taylor_order; ++i) {
        power = power * eps;
        const Rational c = Rational(i % 2 == 1 ? 1 : -1, i);
        sum += scale(power, c);
    }
    return sum.truncated(ExtValue<E>(scale(v, Rational(policy.taylor_order + 1))));
}

// The strong logarithmic cross-section h(sum g_gamma e_gamma) =
// sum g_gamma t^{-e_{zeta gamma}}, a lifting of s o zeta.
class LogCrossSection
{
public:
    explicit LogCrossSection(Universe u) : zeta_(u), section_(std::move(u)) {}

    const Universe &universe() const noexcept
    {
        return zeta_.universe();
    }
    const ZetaMap &zeta() const noexcept
    {
        return zeta_;
    }

    Series<GroupElement> operator()(const GroupElement &g) const
    {
        GroupElement::unify(universe(), g.universe());
        std::vector<Series<GroupElement>::term_type> terms;
        terms.reserve(g.terms().size());
        for (const auto &[p, c] : g.terms()) {
            terms.emplace_back(section_(zeta_(p)), c);
        }
        return Series<GroupElement>(std::move(terms));
    }

    // The induced map on archimedean classes: v(h(g)) = s(zeta(v_G g)).
    GroupElement induced(const IndexPoint &p) const
    {
        return section_(zeta_(p));
    }

    // a is in the image iff it is exact and every exponent is -e_delta.
    std::optional<GroupElement> preimage(const Series<GroupElement> &a) const
    {
        if (!a.is_exact()) {
            return std::nullopt;
        }
        std::vector<GroupElement::term_type> terms;
        for (const auto &[e, c] : a.terms()) {
            if (e.terms().size() != 1 || e.terms().front().second != -1) {
                return std::nullopt;
            }
            terms.emplace_back(zeta_.inverse(e.terms().front().first), c);
        }
        return GroupElement::from_terms(universe(), std::move(terms));
    }

private:
    ZetaMap zeta_;
    GroupCrossSection section_;
};

// The three components of a logarithm compatible with v. The preimage of
// the cross-section is optional; without it exp is unavailable.
template <OrderedGroup E>
struct LogComponents {
    std::function<Series<E>(const E &)> cross_section;
    std::function<std::optional<E>(const Series<E> &)> cross_section_preimage;
    ResidueLog mid;
    std::function<Series<E>(const Series<E> &, const PrecisionPolicy &)> right;
};

inline LogComponents<GroupElement> make_components(const LogCrossSection &h, ResidueLog mid = {})
{
    return {
        [h](const GroupElement &g) { return h(g); },
        [h](const Series<GroupElement> &a) { return h.preimage(a); },
        mid,
        [](const Series<GroupElement> &u, const PrecisionPolicy &p) { return rlog(u, p); },
    };
}

// l(a) = h(-va) + log(r) + l_R(1 + eps) for a = r t^va (1 + eps); the
// residue must be 1.
template <OrderedGroup E>
Series<E> full_log(const Series<E> &a, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    if (sign(a) <= 0) {
        throw domain_violation("logarithm of a nonpositive element");
    }
    const MulDecomposition<E> d = decompose_mul(a);
    const std::optional<Rational> mid = comps.mid.exact(d.residue);
    if (!mid) {
        throw non_monic_residue("residue " + to_string(d.residue) + " has no exact logarithm");
    }
    return comps.cross_section(-d.exponent) + Series<E>::constant(*mid) + comps.right(d.one_unit, policy);
}

// l(a) for a positive infinite a, known modulo the valuation ring. The
// residue and 1-unit components only contribute finite terms, so this is
// defined for every residue.
template <OrderedGroup E>
Series<E> log_mod_finite(const Series<E> &a, const LogComponents<E> &comps)
{
    if (sign(a) <= 0) {
        throw domain_violation("logarithm of a nonpositive element");
    }
    const E v = a.leading().first;
    if (v.sign() >= 0) {
        throw domain_violation("log modulo the valuation ring needs a positive infinite element");
    }
    return comps.cross_section(-v).truncated(ExtValue<E>(E{}));
}

// full_log when the residue is 1, log_mod_finite otherwise.
template <OrderedGroup E>
Series<E> log_of_infinite(const Series<E> &a, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    if (!a.stored_zero() && a.leading().second == 1) {
        return full_log(a, comps, policy);
    }
    return log_mod_finite(a, comps);
}

// Logarithm with the residue part enclosed in an interval (reporting only).
template <OrderedGroup E>
struct IntervalLog {
    Series<E> series_part;
    RationalInterval constant;
};

template <OrderedGroup E>
IntervalLog<E> full_log_interval(const Series<E> &a, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    if (sign(a) <= 0) {
        throw domain_violation("logarithm of a nonpositive element");
    }
    const MulDecomposition<E> d = decompose_mul(a);
    return {comps.cross_section(-d.exponent) + comps.right(d.one_unit, policy), comps.mid.enclose(d.residue)};
}

// Partial inverse of full_log: a = a_inf + r + eps with a_inf = h(g) gives
// f(a) = t^{-g} exp(r) rexp(eps).
template <OrderedGroup E>
Series<E> full_exp(const Series<E> &a, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    const AddDecomposition<E> d = decompose_add(a);
    if (!comps.cross_section_preimage) {
        throw not_in_image("cross-section has no computable preimage");
    }
    std::optional<E> g = d.infinite_part.is_exact_zero() ? std::optional<E>(E{})
                                                         : comps.cross_section_preimage(d.infinite_part);
    if (!g) {
        throw not_in_image("infinite part " + terms_to_string(d.infinite_part)
                           + " is not in the image of the cross-section");
    }
    const std::optional<Rational> mid = comps.mid.exact_exp(d.constant);
    if (!mid) {
        throw non_monic_residue("constant " + to_string(d.constant) + " has no exact exponential");
    }
    return rexp(d.infinitesimal, policy).shifted(-*g, *mid);
}

// chi(g) = v(l(t^g)) for g < 0.
template <OrderedGroup E>
E chi_from_log(const E &g, const LogComponents<E> &comps, const PrecisionPolicy &policy = PrecisionPolicy{})
{
    if (g.sign() >= 0) {
        throw domain_violation("contraction is defined on negative elements only");
    }
    return valuation(full_log(Series<E>::monomial(g), comps, policy)).value();
}

// zeta(gamma) = v_G chi(s(gamma)).
inline IndexPoint zeta_from_chi(const IndexPoint &p, const Universe &u, const LogComponents<GroupElement> &comps)
{
    return natural_valuation(chi_from_log(GroupElement::basis(u, p, -1), comps));
}

namespace detail
{

template <OrderedGroup E>
void require_positive_infinite(const Series<E> &a)
{
    if (sign(a) <= 0 || a.leading().first.sign() >= 0) {
        throw domain_violation("expected a positive infinite element");
    }
}

} // namespace detail

// va < v(l a).
template <OrderedGroup E>
bool check_strong(const Series<E> &a, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    detail::require_positive_infinite(a);
    return valuation(a) < valuation(log_of_infinite(a, comps, policy));
}

// v(b - l(1 + b)) > vb for a nonzero infinitesimal b.
template <OrderedGroup E>
bool check_t1(const Series<E> &b, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    const ExtValue<E> vb = valuation(b);
    if (vb.is_infinite() || vb.value().sign() <= 0) {
        throw domain_violation("T1 axiom is stated for nonzero infinitesimals");
    }
    const Series<E> diff = b - full_log(Series<E>::constant(1) + b, comps, policy);
    if (!diff.stored_zero()) {
        return valuation(diff) > vb;
    }
    if (diff.floor() > vb) {
        return true;
    }
    throw precision_insufficient();
}

// v(b - l(1 + b)), or nullopt when it lies at or beyond the floor.
template <OrderedGroup E>
std::optional<E> t1_defect_valuation(const Series<E> &b, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    const Series<E> diff = b - full_log(Series<E>::constant(1) + b, comps, policy);
    if (diff.stored_zero()) {
        return std::nullopt;
    }
    return valuation(diff).value();
}

// a > n l(a) for a positive infinite a.
template <OrderedGroup E>
bool check_growth(const Series<E> &a, unsigned n, const LogComponents<E> &comps, const PrecisionPolicy &policy)
{
    detail::require_positive_infinite(a);
    const Series<E> l = log_of_infinite(a, comps, policy);
    return sign(a - scale(l, Rational(n))) > 0;
}

// n-fold logarithm of a positive infinite element modulo the valuation ring.
template <OrderedGroup E>
Series<E> iterate_log(Series<E> a, unsigned n, const LogComponents<E> &comps)
{
    for (unsigned i = 0; i < n; ++i) {
        a = log_mod_finite(a, comps);
    }
    return a;
}

// Smallest n <= bound with l^n a <= a' and l^n a' <= a, by iteration.
// Comparisons that cannot be decided modulo the valuation ring do not count
// as witnesses.
template <OrderedGroup E>
std::optional<unsigned> log_equiv_witness(const Series<E> &a, const Series<E> &b, unsigned bound,
                                          const LogComponents<E> &comps)
{
    detail::require_positive_infinite(a);
    detail::require_positive_infinite(b);
    Series<E> la = a;
    Series<E> lb = b;
    const auto leq = [](const Series<E> &x, const Series<E> &y) -> std::optional<bool> {
        try {
            return sign(y - x) >= 0;
        } catch (const precision_insufficient &) {
            return std::nullopt;
        }
    };
    for (unsigned n = 0; n <= bound; ++n) {
        if (n > 0) {
            la = log_mod_finite(la, comps);
            lb = log_mod_finite(lb, comps);
        }
        const auto x = leq(la, b);
        const auto y = leq(lb, a);
        if (x.value_or(false) && y.value_or(false)) {
            return n;
        }
    }
    return std::nullopt;
}

// Class-level decision of a ~l a': v_G va ~zeta v_G va'.
inline bool log_equivalent(const Series<GroupElement> &a, const Series<GroupElement> &b, const ZetaMap &zeta)
{
    detail::require_positive_infinite(a);
    detail::require_positive_infinite(b);
    return zeta.equivalent(natural_valuation(valuation(a).value()), natural_valuation(valuation(b).value()));
}

// --- assembling and decomposing logarithms --------------------------------

template <OrderedGroup E>
struct Logarithm {
    std::function<Series<E>(const Series<E> &, const PrecisionPolicy &)> apply;

    Series<E> operator()(const Series<E> &a, const PrecisionPolicy &policy) const
    {
        return apply(a, policy);
    }
};

template <OrderedGroup E>
Logarithm<E> assemble_log(LogComponents<E> comps)
{
    return {[comps = std::move(comps)](const Series<E> &a, const PrecisionPolicy &p) { return full_log(a, comps, p); }};
}

// Sample points used to validate that a logarithm is compatible with v
// while decomposing it.
template <OrderedGroup E>
struct CompatibilityProbe {
    std::vector<E> group_elements;
    std::vector<Series<E>> one_units;
    PrecisionPolicy policy{};
};

// Recovers (h, l on residues, l_R) from a logarithm compatible with v:
// h(g) = l(t^{-g}), l_R = l restricted to 1-units. Throws domain_violation
// with a witness if a probe shows the logarithm is not compatible with v.
template <OrderedGroup E>
LogComponents<E> decompose_log(const Logarithm<E> &log, const CompatibilityProbe<E> &probe)
{
    for (const E &g : probe.group_elements) {
        const Series<E> image = log(Series<E>::monomial(-g), probe.policy);
        for (const auto &t : image.terms()) {
            if (t.first.sign() >= 0) {
                throw domain_violation("logarithm maps a monomial outside the complement of the valuation ring");
            }
        }
        if (!image.is_exact()) {
            throw domain_violation("logarithm of a monomial is not exact");
        }
    }
    for (const Series<E> &u : probe.one_units) {
        const Series<E> image = log(u, probe.policy);
        const ExtValue<E> lb = valuation_lower_bound(image);
        if (!lb.is_infinite() && lb.value().sign() <= 0) {
            throw domain_violation("logarithm maps a 1-unit outside the valuation ideal");
        }
    }
    if (!log(Series<E>::constant(1), probe.policy).is_exact_zero()) {
        throw domain_violation("logarithm of 1 is not 0");
    }
    LogComponents<E> comps;
    comps.cross_section = [log](const E &g) { return log(Series<E>::monomial(-g), PrecisionPolicy{}); };
    comps.mid = ResidueLog{};
    comps.right = [log](const Series<E> &u, const PrecisionPolicy &p) { return log(u, p); };
    return comps;
}

} // namespace hahnexp

#endif
