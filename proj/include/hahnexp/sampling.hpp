#ifndef HAHNEXP_SAMPLING_HPP
#define HAHNEXP_SAMPLING_HPP

// Seeded sample generators. Supports have at most four points, offsets
// come from the offset window and coefficients from a small rational pool.
// The generators only use raw 64-bit draws of mt19937_64, so a seed fixes
// the stream on every platform.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "group.hpp"
#include "segment.hpp"
#include "series.hpp"

namespace hahnexp
{

class Sampler
{
public:
    Sampler(Universe u, std::uint64_t seed, OffsetWindow window = {})
        : universe_(std::move(u)), rng_(seed), window_(window)
    {
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }
    const OffsetWindow &window() const noexcept
    {
        return window_;
    }

    std::uint64_t next()
    {
        return rng_();
    }
    std::size_t below(std::size_t n)
    {
        return static_cast<std::size_t>(rng_() % n);
    }
    bool coin()
    {
        return (rng_() >> 17) & 1U;
    }

    Rational coefficient()
    {
        static const std::array<std::pair<long, long>, 12> pool{{
            {1, 1}, {-1, 1}, {2, 1}, {-2, 1}, {1, 2}, {-1, 2}, {3, 1}, {-3, 1}, {2, 3}, {-3, 4}, {5, 2}, {-1, 3},
        }};
        const auto &[n, d] = pool[below(pool.size())];
        return make_rational(n, d);
    }
    Rational positive_coefficient()
    {
        Rational c = coefficient();
        return c < 0 ? Rational(-c) : c;
    }

    IndexPoint index()
    {
        const auto span = static_cast<std::size_t>(window_.hi - window_.lo + 1);
        return {below(universe_->size()), window_.lo + static_cast<std::int64_t>(below(span))};
    }

    // Nonzero element with 1..max_terms support points.
    GroupElement group_element(std::size_t max_terms = 4)
    {
        for (;;) {
            std::vector<GroupElement::term_type> terms;
            const std::size_t n = 1 + below(max_terms);
            for (std::size_t i = 0; i < n; ++i) {
                terms.emplace_back(index(), coefficient());
            }
            GroupElement g = GroupElement::from_terms(universe_, std::move(terms));
            if (!g.is_zero()) {
                return g;
            }
        }
    }
    GroupElement negative_group_element(std::size_t max_terms = 4)
    {
        GroupElement g = group_element(max_terms);
        return g.sign() < 0 ? g : -g;
    }
    GroupElement positive_group_element(std::size_t max_terms = 4)
    {
        return -negative_group_element(max_terms);
    }
    // Negative with leading coefficient -1.
    GroupElement negative_normalized(std::size_t max_terms = 4)
    {
        GroupElement g = negative_group_element(max_terms);
        return scale(g, Rational(-1) / g.terms().front().second);
    }

    // Nonzero exact infinitesimal.
    Series<GroupElement> infinitesimal(std::size_t max_terms = 4)
    {
        std::vector<Series<GroupElement>::term_type> terms;
        const std::size_t n = 1 + below(max_terms);
        for (std::size_t i = 0; i < n; ++i) {
            terms.emplace_back(positive_group_element(3), coefficient());
        }
        Series<GroupElement> s(std::move(terms));
        return s.stored_zero() ? infinitesimal(max_terms) : s;
    }

    // 1 + eps with eps a possibly zero exact infinitesimal.
    Series<GroupElement> one_unit(std::size_t max_terms = 3)
    {
        Series<GroupElement> one = Series<GroupElement>::constant(1);
        return coin() ? one + infinitesimal(max_terms) : one;
    }

    // r t^g (1 + eps) with g < 0; r = 1 when monic.
    Series<GroupElement> positive_infinite(bool monic = true)
    {
        return positive_with_value(negative_group_element(), monic);
    }

    Series<GroupElement> positive_with_value(const GroupElement &g, bool monic = true)
    {
        const Rational r = monic ? Rational(1) : positive_coefficient();
        return one_unit().shifted(g, r);
    }

    // Arbitrary exact series with up to max_terms terms.
    Series<GroupElement> series(std::size_t max_terms = 5)
    {
        std::vector<Series<GroupElement>::term_type> terms;
        const std::size_t n = below(max_terms + 1);
        for (std::size_t i = 0; i < n; ++i) {
            GroupElement e = below(5) == 0 ? GroupElement(universe_) : group_element(2);
            terms.emplace_back(std::move(e), coefficient());
        }
        return Series<GroupElement>(std::move(terms));
    }

private:
    Universe universe_;
    std::mt19937_64 rng_;
    OffsetWindow window_;
};

} // namespace hahnexp

#endif
