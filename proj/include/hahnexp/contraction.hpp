#ifndef HAHNEXP_CONTRACTION_HPP
#define HAHNEXP_CONTRACTION_HPP

// The successor automorphism zeta of Gamma, its equivalence classes, and
// the model contraction chi = s o zeta o v_G on the negative cone of G.

#include <utility>

#include "errors.hpp"
#include "group.hpp"

namespace hahnexp
{

// zeta(t, n) = (t, n + 1) on Gamma = sum over T of copies of Z.
class ZetaMap
{
public:
    explicit ZetaMap(Universe u) : universe_(std::move(u))
    {
        if (!universe_ || universe_->empty()) {
            throw domain_violation("zeta needs a nonempty order type");
        }
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }

    IndexPoint operator()(const IndexPoint &p) const
    {
        return {p.label, p.offset + 1};
    }
    IndexPoint inverse(const IndexPoint &p) const
    {
        return {p.label, p.offset - 1};
    }
    IndexPoint power(const IndexPoint &p, std::int64_t n) const
    {
        return {p.label, p.offset + n};
    }

    // Two points are zeta-equivalent iff they lie in the same copy of Z.
    bool equivalent(const IndexPoint &a, const IndexPoint &b) const
    {
        return a.label == b.label;
    }

    // The classes Gamma / ~zeta are the copies of Z, ordered as T.
    OrderTypeSpec quotient_order_type() const
    {
        return *universe_;
    }

private:
    Universe universe_;
};

// s(gamma) = -e_gamma: v_G(s(gamma)) = gamma and s(gamma) < 0.
class GroupCrossSection
{
public:
    explicit GroupCrossSection(Universe u) : universe_(std::move(u)) {}

    GroupElement operator()(const IndexPoint &p) const
    {
        return GroupElement::basis(universe_, p, -1);
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }

private:
    Universe universe_;
};

inline IndexPoint zeta_apply(const ZetaMap &z, const IndexPoint &p)
{
    return z(p);
}

inline bool zeta_equiv(const ZetaMap &z, const IndexPoint &a, const IndexPoint &b)
{
    return z.equivalent(a, b);
}

inline OrderTypeSpec zeta_quotient_order_type(const ZetaMap &z)
{
    return z.quotient_order_type();
}

// chi(g) = s(zeta(v_G g)) for g < 0.
inline GroupElement chi_model(const ZetaMap &z, const GroupElement &g)
{
    if (g.sign() >= 0) {
        throw domain_violation("contraction is defined on negative elements only");
    }
    GroupElement::unify(z.universe(), g.universe());
    return GroupCrossSection(z.universe())(z(natural_valuation(g)));
}

// g ~chi g' decided through the zeta class of their archimedean classes.
inline bool chi_equiv(const ZetaMap &z, const GroupElement &g, const GroupElement &h)
{
    if (g.sign() >= 0 || h.sign() >= 0) {
        throw domain_violation("chi-equivalence is defined on negative elements only");
    }
    return z.equivalent(natural_valuation(g), natural_valuation(h));
}

} // namespace hahnexp

#endif
