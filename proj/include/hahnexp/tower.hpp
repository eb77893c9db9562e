#ifndef HAHNEXP_TOWER_HPP
#define HAHNEXP_TOWER_HPP

// The staged chain G_0 in G_1 in ... with G_n := A_{n-1}, the negative-support
// part of K_{n-1} = Q((G_{n-1})), and K_n = Q((G_n)). The embedding of
// G_{n-1} into G_n is h_{n-1}, so h_n acts on a stage-n element by
// re-reading it one stage higher.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contraction.hpp"
#include "errors.hpp"
#include "exp_log.hpp"
#include "group.hpp"
#include "sampling.hpp"
#include "series.hpp"
#include "text.hpp"

namespace hahnexp
{

// Element of G_n. Stage 0 wraps a GroupElement; stage n >= 1 is a finite sum
// of q * t^x with x a negative stage-(n-1) element. A default-constructed
// element is a zero that works at every stage.
class StageElement
{
public:
    using term_type = std::pair<StageElement, Rational>;

    StageElement() = default;

    static StageElement base(GroupElement g)
    {
        auto node = std::make_shared<Node>();
        node->base = std::move(g);
        Universe u = node->base.universe();
        return StageElement(std::move(u), std::move(node));
    }

    // Exponents are lifted to stage - 1; each must be negative.
    static StageElement from_terms(Universe u, unsigned stage, std::vector<term_type> terms)
    {
        if (stage == 0) {
            throw domain_violation("stage-0 elements are group elements");
        }
        for (auto &t : terms) {
            if (t.first.stage() >= stage) {
                throw domain_violation("exponent of a stage-" + std::to_string(stage)
                                       + " element must live below that stage");
            }
            t.first = t.first.lifted(stage - 1);
        }
        std::sort(terms.begin(), terms.end(), [](const term_type &a, const term_type &b) { return a.first < b.first; });
        std::vector<term_type> merged;
        for (auto &t : terms) {
            if (!merged.empty() && merged.back().first == t.first) {
                merged.back().second += t.second;
            } else {
                merged.push_back(std::move(t));
            }
        }
        std::erase_if(merged, [](const term_type &t) { return t.second == 0; });
        for (const auto &t : merged) {
            if (t.first.sign() >= 0) {
                throw domain_violation("exponents of a stage element must be negative");
            }
            u = GroupElement::unify(u, t.first.universe());
        }
        auto node = std::make_shared<Node>();
        node->stage = stage;
        node->terms = std::move(merged);
        return StageElement(std::move(u), std::move(node));
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }
    unsigned stage() const noexcept
    {
        return node_ ? node_->stage : 0;
    }
    const GroupElement &base_value() const
    {
        static const GroupElement zero;
        if (stage() != 0) {
            throw domain_violation("not a stage-0 element");
        }
        return node_ ? node_->base : zero;
    }
    const std::vector<term_type> &terms() const noexcept
    {
        static const std::vector<term_type> none;
        return node_ ? node_->terms : none;
    }

    bool is_zero() const noexcept
    {
        return !node_ || (node_->stage == 0 ? node_->base.is_zero() : node_->terms.empty());
    }
    int sign() const
    {
        if (is_zero()) {
            return 0;
        }
        if (node_->stage == 0) {
            return node_->base.sign();
        }
        return hahnexp::sign(node_->terms.front().second);
    }

    // The same element read at stage `to` >= stage().
    StageElement lifted(unsigned to) const
    {
        if (is_zero()) {
            return *this;
        }
        if (to < stage()) {
            throw domain_violation("cannot lift a stage element downwards");
        }
        StageElement x = *this;
        while (x.stage() < to) {
            x = x.raised();
        }
        return x;
    }

    // One step up the chain, memoized per node.
    StageElement raised() const
    {
        if (is_zero()) {
            return *this;
        }
        std::call_once(node_->once, [this] { node_->up = make_raised(); });
        return StageElement(universe_, node_->up);
    }

    friend StageElement operator+(const StageElement &a, const StageElement &b)
    {
        return combine(a, b, false);
    }
    friend StageElement operator-(const StageElement &a, const StageElement &b)
    {
        return combine(a, b, true);
    }
    StageElement operator-() const
    {
        return scale(*this, -1);
    }
    friend StageElement scale(const StageElement &a, const Rational &q)
    {
        if (a.is_zero() || q == 0) {
            return StageElement();
        }
        if (a.stage() == 0) {
            return base(hahnexp::scale(a.node_->base, q));
        }
        std::vector<term_type> terms = a.node_->terms;
        for (auto &t : terms) {
            t.second *= q;
        }
        return from_terms(a.universe_, a.stage(), std::move(terms));
    }

    friend bool operator==(const StageElement &a, const StageElement &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return a.is_zero() && b.is_zero();
        }
        const unsigned s = std::max(a.stage(), b.stage());
        return same_stage_compare(a.lifted(s), b.lifted(s)) == 0;
    }
    friend std::strong_ordering operator<=>(const StageElement &a, const StageElement &b)
    {
        int c = 0;
        if (a.is_zero()) {
            c = -b.sign();
        } else if (b.is_zero()) {
            c = a.sign();
        } else {
            const unsigned s = std::max(a.stage(), b.stage());
            c = same_stage_compare(a.lifted(s), b.lifted(s));
        }
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    struct Node {
        unsigned stage = 0;
        GroupElement base;
        std::vector<term_type> terms;
        mutable std::once_flag once;
        mutable std::shared_ptr<const Node> up;
    };

    StageElement(Universe u, std::shared_ptr<const Node> node) : universe_(std::move(u)), node_(std::move(node)) {}

    std::shared_ptr<const Node> make_raised() const
    {
        auto node = std::make_shared<Node>();
        node->stage = node_->stage + 1;
        if (node_->stage == 0) {
            // h_0(g) = sum g_gamma t^{-e_{zeta gamma}}, already in increasing
            // order of exponent.
            const ZetaMap zeta(universe_);
            for (const auto &[p, c] : node_->base.terms()) {
                node->terms.emplace_back(base(GroupElement::basis(universe_, zeta(p), -1)), c);
            }
        } else {
            for (const auto &[x, c] : node_->terms) {
                node->terms.emplace_back(x.raised(), c);
            }
        }
        return node;
    }

    // -1, 0, 1 for a < b, a = b, a > b at a common stage.
    static int same_stage_compare(const StageElement &a, const StageElement &b)
    {
        if (a.stage() == 0) {
            const auto c = a.base_value() <=> b.base_value();
            return c < 0 ? -1 : c > 0 ? 1 : 0;
        }
        const auto &x = a.terms();
        const auto &y = b.terms();
        std::size_t i = 0;
        for (; i < x.size() && i < y.size(); ++i) {
            const auto c = x[i].first <=> y[i].first;
            if (c < 0) {
                return hahnexp::sign(x[i].second);
            }
            if (c > 0) {
                return -hahnexp::sign(y[i].second);
            }
            if (x[i].second != y[i].second) {
                return x[i].second < y[i].second ? -1 : 1;
            }
        }
        if (i < x.size()) {
            return hahnexp::sign(x[i].second);
        }
        if (i < y.size()) {
            return -hahnexp::sign(y[i].second);
        }
        return 0;
    }

    static StageElement combine(const StageElement &a, const StageElement &b, bool subtract)
    {
        if (b.is_zero()) {
            return a;
        }
        if (a.is_zero()) {
            return subtract ? -b : b;
        }
        const Universe u = GroupElement::unify(a.universe_, b.universe_);
        const unsigned s = std::max(a.stage(), b.stage());
        const StageElement x = a.lifted(s);
        const StageElement y = b.lifted(s);
        if (s == 0) {
            return base(subtract ? x.node_->base - y.node_->base : x.node_->base + y.node_->base);
        }
        std::vector<term_type> terms = x.node_->terms;
        for (const auto &[e, c] : y.node_->terms) {
            terms.emplace_back(e, subtract ? Rational(-c) : c);
        }
        return from_terms(u, s, std::move(terms));
    }

    Universe universe_;
    std::shared_ptr<const Node> node_;
};

inline std::string to_string(const StageElement &x);

inline std::string stage_terms_to_string(const std::vector<StageElement::term_type> &terms)
{
    return terms_to_string(Series<StageElement>(terms));
}

inline std::string to_string(const StageElement &x)
{
    if (x.is_zero() && !x.universe()) {
        return "0";
    }
    const std::string head = "s" + std::to_string(x.stage()) + "{";
    if (x.stage() == 0) {
        return head + to_string(x.base_value()) + "}";
    }
    return head + stage_terms_to_string(x.terms()) + "}";
}

inline StageElement parse_stage_element(text::Cursor &cur, const Universe &u)
{
    if (cur.peek() == '0') {
        cur.expect("0");
        return StageElement();
    }
    cur.expect("s");
    const std::size_t stage_pos = cur.pos;
    const std::int64_t stage = cur.integer();
    if (stage < 0 || stage > 64) {
        throw parse_error("stage out of range", stage_pos);
    }
    cur.expect("{");
    StageElement out;
    if (stage == 0) {
        out = StageElement::base(parse_group_element(cur, u));
    } else {
        const std::size_t body = cur.pos;
        const Series<StageElement> s = parse_series<StageElement>(
            cur, [&u](text::Cursor &c) { return parse_stage_element(c, u); });
        if (!s.is_exact()) {
            throw parse_error("stage elements carry no error floor", body);
        }
        try {
            out = StageElement::from_terms(u, static_cast<unsigned>(stage), s.terms());
        } catch (const domain_violation &e) {
            throw parse_error(e.what(), body);
        }
    }
    cur.expect("}");
    return out;
}

inline StageElement parse_stage_element(std::string_view s, const Universe &u)
{
    text::Cursor cur{s};
    StageElement x = parse_stage_element(cur, u);
    cur.expect_end();
    return x;
}

inline Series<StageElement> parse_stage_series(std::string_view s, const Universe &u)
{
    text::Cursor cur{s};
    Series<StageElement> a =
        parse_series<StageElement>(cur, [&u](text::Cursor &c) { return parse_stage_element(c, u); });
    cur.expect_end();
    return a;
}

// --- stage maps ------------------------------------------------------------------

// Highest stage among the exponents and the floor of a.
inline unsigned series_stage(const Series<StageElement> &a)
{
    unsigned s = 0;
    for (const auto &t : a.terms()) {
        s = std::max(s, t.first.stage());
    }
    if (!a.is_exact()) {
        s = std::max(s, a.floor().value().stage());
    }
    return s;
}

inline Series<StageElement> embed_series(const Series<StageElement> &a, unsigned to)
{
    std::vector<Series<StageElement>::term_type> terms;
    for (const auto &[e, c] : a.terms()) {
        terms.emplace_back(e.lifted(to), c);
    }
    ExtValue<StageElement> floor = a.is_exact() ? ExtValue<StageElement>::infinity()
                                                : ExtValue<StageElement>(a.floor().value().lifted(to));
    return Series<StageElement>(std::move(terms), std::move(floor));
}

inline Series<StageElement> from_base_series(const Series<GroupElement> &a)
{
    std::vector<Series<StageElement>::term_type> terms;
    for (const auto &[e, c] : a.terms()) {
        terms.emplace_back(StageElement::base(e), c);
    }
    ExtValue<StageElement> floor = a.is_exact() ? ExtValue<StageElement>::infinity()
                                                : ExtValue<StageElement>(StageElement::base(a.floor().value()));
    return Series<StageElement>(std::move(terms), std::move(floor));
}

// The preimage of x under the embedding of the previous stage, if any.
inline std::optional<StageElement> lower_one(const StageElement &x)
{
    if (x.stage() == 0) {
        throw domain_violation("stage 0 has no predecessor");
    }
    if (x.is_zero()) {
        return StageElement();
    }
    if (x.stage() == 1) {
        const ZetaMap zeta(x.universe());
        std::vector<GroupElement::term_type> terms;
        for (const auto &[e, c] : x.terms()) {
            const GroupElement &g = e.base_value();
            if (g.terms().size() != 1 || g.terms().front().second != -1) {
                return std::nullopt;
            }
            terms.emplace_back(zeta.inverse(g.terms().front().first), c);
        }
        return StageElement::base(GroupElement::from_terms(x.universe(), std::move(terms)));
    }
    std::vector<StageElement::term_type> terms;
    for (const auto &[e, c] : x.terms()) {
        auto y = lower_one(e);
        if (!y) {
            return std::nullopt;
        }
        terms.emplace_back(std::move(*y), c);
    }
    return StageElement::from_terms(x.universe(), x.stage() - 1, std::move(terms));
}

// x read at stage k <= x.stage(), if it lies in the embedded G_k.
inline std::optional<StageElement> lower_to(StageElement x, unsigned k)
{
    while (x.stage() > k) {
        auto y = lower_one(x);
        if (!y) {
            return std::nullopt;
        }
        x = std::move(*y);
    }
    return x.lifted(k);
}

// h_n: G_n -> A_n, g lifted to stage n and read one stage higher.
inline Series<StageElement> stage_cross_section(unsigned n, const StageElement &g)
{
    if (g.stage() > n) {
        throw domain_violation("element lies beyond stage " + std::to_string(n));
    }
    const StageElement up = g.lifted(n).raised();
    return Series<StageElement>(up.is_zero() ? std::vector<Series<StageElement>::term_type>{} : up.terms());
}

// g with h_n(g) = a, if a is exact, has negative support inside G_n and
// comes from the embedded A_{n-1}.
inline std::optional<StageElement> stage_cross_section_preimage(unsigned n, const Universe &u,
                                                                const Series<StageElement> &a)
{
    if (!a.is_exact()) {
        return std::nullopt;
    }
    std::vector<StageElement::term_type> terms;
    for (const auto &[e, c] : a.terms()) {
        if (e.stage() > n || e.sign() >= 0) {
            return std::nullopt;
        }
        terms.emplace_back(e.lifted(n), c);
    }
    if (terms.empty()) {
        return StageElement();
    }
    return lower_one(StageElement::from_terms(u, n + 1, std::move(terms)));
}

inline LogComponents<StageElement> stage_components(const Universe &u, unsigned n, ResidueLog mid = {})
{
    return {
        [n](const StageElement &g) { return stage_cross_section(n, g); },
        [n, u](const Series<StageElement> &a) { return stage_cross_section_preimage(n, u, a); },
        mid,
        [](const Series<StageElement> &x, const PrecisionPolicy &p) { return rlog(x, p); },
    };
}

// --- the tower -----------------------------------------------------------------

class StageTower
{
public:
    StageTower(Universe tau, unsigned depth, unsigned max_depth = 3, ResidueLog mid = {})
        : universe_(std::move(tau)), depth_(depth), mid_(mid), cache_(std::make_shared<Cache>())
    {
        if (!universe_ || universe_->empty()) {
            throw domain_violation("tower needs a nonempty order type");
        }
        if (depth_ > max_depth) {
            throw depth_exceeded("depth " + std::to_string(depth_) + " exceeds the bound "
                                 + std::to_string(max_depth));
        }
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }
    unsigned depth() const noexcept
    {
        return depth_;
    }

    // Components of the logarithm l_n on K_n; filled once per stage.
    const LogComponents<StageElement> &components(unsigned n) const
    {
        check_stage(n);
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto &slot = cache_->components[n];
        if (!slot) {
            slot = std::make_shared<const LogComponents<StageElement>>(stage_components(universe_, n, mid_));
        }
        return *slot;
    }

    StageElement embed(const StageElement &x, unsigned to) const
    {
        check_stage(to);
        return x.lifted(to);
    }
    Series<StageElement> embed(const Series<StageElement> &a, unsigned to) const
    {
        check_stage(to);
        if (series_stage(a) > to) {
            throw domain_violation("cannot embed into a lower stage");
        }
        return embed_series(a, to);
    }

    Series<StageElement> h(unsigned n, const StageElement &g) const
    {
        check_stage(n);
        return stage_cross_section(n, g);
    }

    // v(h_n(g)) > g for g < 0.
    bool check27(const StageElement &g, unsigned n) const
    {
        if (g.sign() >= 0) {
            throw domain_violation("v(h_n(g)) > g is stated for negative elements");
        }
        return valuation(h(n, g)).value() > g.lifted(n);
    }

    Series<StageElement> log(const Series<StageElement> &a, unsigned n, const PrecisionPolicy &policy) const
    {
        require_within(a, n);
        return full_log(a, components(n), policy);
    }

    Series<StageElement> exp(const Series<StageElement> &a, unsigned n, const PrecisionPolicy &policy) const
    {
        require_within(a, n);
        return full_exp(a, components(n), policy);
    }

    // The infinite part of a lies in the image of h_n.
    bool in_exp_domain(const Series<StageElement> &a, unsigned n) const
    {
        require_within(a, n);
        const AddDecomposition<StageElement> d = decompose_add(a);
        return d.infinite_part.is_exact_zero()
               || stage_cross_section_preimage(n, universe_, d.infinite_part).has_value();
    }

    // Infinite part of a in the embedded A_0.
    static bool infinite_part_in_base(const Series<StageElement> &a)
    {
        for (const auto &[e, c] : a.terms()) {
            if (e.sign() < 0 && !lower_to(e, 0)) {
                return false;
            }
        }
        return true;
    }

    // Least k <= depth + 1 with the infinite part of l^k a in A_0.
    unsigned descent(const Series<StageElement> &a) const
    {
        detail::require_positive_infinite(a);
        require_within(a, depth_);
        Series<StageElement> x = a;
        for (unsigned k = 0; k <= depth_ + 1; ++k) {
            if (k > 0) {
                x = log_mod_finite(x, components(depth_));
            }
            if (infinite_part_in_base(x)) {
                return k;
            }
        }
        throw no_descent("no descent to stage 0 within " + std::to_string(depth_ + 1) + " logarithms");
    }

    // t^{w_n} with w_0 = -e(t0,0)/2 - e(t0,1)/2 and w_n = -t^{w_{n-1}}: in the
    // domain of exp at stage n but not at stage n - 1.
    Series<StageElement> exp_domain_witness(unsigned n) const
    {
        check_stage(n);
        if (n == 0) {
            throw domain_violation("stage 0 has no predecessor");
        }
        StageElement w = StageElement::base(GroupElement::basis(universe_, {0, 0}, Rational(-1, 2))
                                            + GroupElement::basis(universe_, {0, 1}, Rational(-1, 2)));
        for (unsigned k = 1; k < n; ++k) {
            w = StageElement::from_terms(universe_, k, {{w, Rational(-1)}});
        }
        return Series<StageElement>::monomial(w);
    }

    // exp(a) for an infinitesimal a against the Taylor expansion
    // sum eps^i / i!, compared termwise below the floor.
    bool restricted_exp_agreement(const Series<StageElement> &a, unsigned n, const PrecisionPolicy &policy) const
    {
        const ExtValue<StageElement> lb = valuation_lower_bound(a);
        if (!lb.is_infinite() && lb.value().sign() < 0) {
            throw domain_violation("restricted exponential needs v(a) >= 0");
        }
        if (a.coeff(StageElement()) != 0) {
            throw non_monic_residue("restricted exponential in monic mode needs residue 0");
        }
        const Series<StageElement> f = exp(a, n, policy);
        Series<StageElement> expansion = Series<StageElement>::constant(1);
        Series<StageElement> power = Series<StageElement>::constant(1);
        Integer fact = 1;
        for (unsigned i = 1; i <= policy.taylor_order; ++i) {
            power = power * a;
            fact *= i;
            expansion = expansion + scale(power, Rational(1) / Rational(fact));
        }
        const Series<StageElement> diff = f - expansion;
        return diff.stored_zero();
    }

private:
    struct Cache {
        std::mutex mutex;
        std::map<unsigned, std::shared_ptr<const LogComponents<StageElement>>> components;
    };

    void check_stage(unsigned n) const
    {
        if (n > depth_) {
            throw depth_exceeded("stage " + std::to_string(n) + " is beyond the tower depth "
                                 + std::to_string(depth_));
        }
    }
    void require_within(const Series<StageElement> &a, unsigned n) const
    {
        check_stage(n);
        if (series_stage(a) > n) {
            throw domain_violation("element lies beyond stage " + std::to_string(n));
        }
    }

    Universe universe_;
    unsigned depth_;
    ResidueLog mid_;
    std::shared_ptr<Cache> cache_;
};

// --- sampling at a stage ----------------------------------------------------------

inline StageElement sample_negative_stage(Sampler &rng, unsigned n, std::size_t max_terms = 3)
{
    if (n == 0) {
        return StageElement::base(rng.negative_group_element(max_terms));
    }
    if (rng.below(4) == 0) {
        return sample_negative_stage(rng, n - 1, max_terms).lifted(n);
    }
    for (;;) {
        std::vector<StageElement::term_type> terms;
        const std::size_t k = 1 + rng.below(max_terms);
        for (std::size_t i = 0; i < k; ++i) {
            terms.emplace_back(sample_negative_stage(rng, n - 1, 2), rng.coefficient());
        }
        StageElement x = StageElement::from_terms(rng.universe(), n, std::move(terms));
        if (!x.is_zero()) {
            return x.sign() < 0 ? x : -x;
        }
    }
}

// Nonzero exact infinitesimal of K_n.
inline Series<StageElement> sample_infinitesimal_stage(Sampler &rng, unsigned n, std::size_t max_terms = 2)
{
    for (;;) {
        std::vector<Series<StageElement>::term_type> terms;
        const std::size_t k = 1 + rng.below(max_terms);
        for (std::size_t i = 0; i < k; ++i) {
            terms.emplace_back(-sample_negative_stage(rng, n, 2), rng.coefficient());
        }
        Series<StageElement> s(std::move(terms));
        if (!s.stored_zero()) {
            return s;
        }
    }
}

// t^g (1 + eps) with g < 0 at stage n and residue 1.
inline Series<StageElement> sample_positive_infinite_stage(Sampler &rng, unsigned n)
{
    Series<StageElement> unit = Series<StageElement>::constant(1);
    if (rng.coin()) {
        unit = unit + sample_infinitesimal_stage(rng, n);
    }
    return unit.shifted(sample_negative_stage(rng, n));
}

} // namespace hahnexp

#endif
