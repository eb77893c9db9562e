#ifndef HAHNEXP_RESIDUE_LOG_HPP
#define HAHNEXP_RESIDUE_LOG_HPP

// The middle component of a logarithm: the logarithm on the residue field.
// Over Q it is exact only at 1; elsewhere it is enclosed in a rational
// interval for reporting.

#include <optional>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace hahnexp
{

struct RationalInterval {
    Rational lo;
    Rational hi;

    bool contains(const Rational &q) const
    {
        return lo <= q && q <= hi;
    }
    Rational width() const
    {
        return hi - lo;
    }
    friend bool operator==(const RationalInterval &, const RationalInterval &) = default;
};

inline std::string to_string(const RationalInterval &iv)
{
    return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]";
}

namespace detail
{

// Rounds lo down and hi up to multiples of 2^-bits.
inline RationalInterval round_outward(const RationalInterval &iv, unsigned long bits)
{
    Integer scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), bits);
    const Rational lo_scaled = iv.lo * scale;
    const Rational hi_scaled = iv.hi * scale;
    Integer lo_int, hi_int;
    mpz_fdiv_q(lo_int.get_mpz_t(), lo_scaled.get_num_mpz_t(), lo_scaled.get_den_mpz_t());
    mpz_cdiv_q(hi_int.get_mpz_t(), hi_scaled.get_num_mpz_t(), hi_scaled.get_den_mpz_t());
    RationalInterval out{Rational(lo_int, scale), Rational(hi_int, scale)};
    out.lo.canonicalize();
    out.hi.canonicalize();
    return out;
}

inline unsigned long bits_for(const Rational &width)
{
    unsigned long bits = 2;
    Rational step(1, 4);
    while (step * 8 > width) {
        step /= 2;
        ++bits;
    }
    return bits;
}

} // namespace detail

// Encloses log r for r > 0 using log r = 2 atanh((r - 1) / (r + 1)); the
// returned interval has width at most `width`.
inline RationalInterval enclose_log(const Rational &r, const Rational &width)
{
    if (r <= 0) {
        throw domain_violation("logarithm of a nonpositive residue");
    }
    if (width <= 0) {
        throw domain_violation("interval width must be positive");
    }
    if (r == 1) {
        return {0, 0};
    }
    const Rational y = (r - 1) / (r + 1);
    const Rational y2 = y * y;
    Rational power = y; // y^(2k+1)
    Rational sum = 0;
    for (unsigned long k = 0;; ++k) {
        sum += 2 * power / Rational(2 * k + 1);
        power *= y2;
        // |tail| <= 2 |y|^(2k+3) / ((2k+3) (1 - y^2))
        Rational bound = 2 * abs(power) / (Rational(2 * k + 3) * (1 - y2));
        if (bound * 2 <= width) {
            RationalInterval iv = y > 0 ? RationalInterval{sum, sum + bound} : RationalInterval{sum - bound, sum};
            return detail::round_outward(iv, detail::bits_for(width));
        }
    }
}

// Encloses exp q by its Taylor polynomial and a geometric tail bound.
inline RationalInterval enclose_exp(const Rational &q, const Rational &width)
{
    if (width <= 0) {
        throw domain_violation("interval width must be positive");
    }
    if (q == 0) {
        return {1, 1};
    }
    const Rational mag = abs(q);
    Rational term = 1;
    Rational sum = 1;
    for (unsigned long k = 1;; ++k) {
        term *= q / Rational(k);
        sum += term;
        // once k + 2 > 2|q| the tail is at most twice its first term
        Rational next = abs(term) * mag / Rational(k + 1);
        if (Rational(k + 2) > 2 * mag && 4 * next <= width) {
            return detail::round_outward({sum - 2 * next, sum + 2 * next}, detail::bits_for(width));
        }
    }
}

// Residue-field logarithm used as the middle component.
struct ResidueLog {
    enum class Mode { monic, interval };

    Mode mode = Mode::monic;
    Rational width = Rational(1, 1000000);

    // Exact value where one exists: log 1 = 0.
    std::optional<Rational> exact(const Rational &r) const
    {
        if (r == 1) {
            return Rational(0);
        }
        return std::nullopt;
    }

    std::optional<Rational> exact_exp(const Rational &q) const
    {
        if (q == 0) {
            return Rational(1);
        }
        return std::nullopt;
    }

    RationalInterval enclose(const Rational &r) const
    {
        return enclose_log(r, width);
    }

    friend bool operator==(const ResidueLog &, const ResidueLog &) = default;
};

inline std::string to_string(ResidueLog::Mode m)
{
    return m == ResidueLog::Mode::monic ? "monic" : "interval";
}

} // namespace hahnexp

#endif
