#ifndef HAHNEXP_SERIES_HPP
#define HAHNEXP_SERIES_HPP

// Truncated generalized power series Q((E)) over an ordered divisible group
// E. A series is a finite sorted list of terms together with an error floor:
// the true value minus the stored terms has valuation >= floor. A floor of
// +infinity means the stored terms are the exact value.

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "text.hpp"

namespace hahnexp
{

template <class E>
concept OrderedGroup = std::default_initializable<E> && requires(const E a, const E b, const Rational q) {
    { a + b } -> std::same_as<E>;
    { a - b } -> std::same_as<E>;
    { -a } -> std::same_as<E>;
    { a <=> b } -> std::convertible_to<std::strong_ordering>;
    { a == b } -> std::convertible_to<bool>;
    { scale(a, q) } -> std::same_as<E>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.sign() } -> std::convertible_to<int>;
};

// A group element or +infinity (the valuation of zero).
template <OrderedGroup E>
class ExtValue
{
public:
    ExtValue() = default; // +infinity
    ExtValue(E value) : value_(std::move(value)) {}

    static ExtValue infinity()
    {
        return ExtValue();
    }

    bool is_infinite() const noexcept
    {
        return !value_.has_value();
    }
    const E &value() const
    {
        if (!value_) {
            throw domain_violation("value is +infinity");
        }
        return *value_;
    }

    friend bool operator==(const ExtValue &a, const ExtValue &b)
    {
        if (a.is_infinite() || b.is_infinite()) {
            return a.is_infinite() == b.is_infinite();
        }
        return *a.value_ == *b.value_;
    }
    friend std::strong_ordering operator<=>(const ExtValue &a, const ExtValue &b)
    {
        if (a.is_infinite() || b.is_infinite()) {
            return a.is_infinite() <=> b.is_infinite();
        }
        return *a.value_ <=> *b.value_;
    }
    friend ExtValue operator+(const ExtValue &a, const ExtValue &b)
    {
        if (a.is_infinite() || b.is_infinite()) {
            return infinity();
        }
        return ExtValue(*a.value_ + *b.value_);
    }

private:
    std::optional<E> value_;
};

template <OrderedGroup E>
ExtValue<E> min(const ExtValue<E> &a, const ExtValue<E> &b)
{
    return b < a ? b : a;
}

template <OrderedGroup E>
class Series
{
public:
    using exponent_type = E;
    using term_type = std::pair<E, Rational>;
    using floor_type = ExtValue<E>;

    Series() = default; // exact zero

    Series(std::vector<term_type> terms, floor_type floor = floor_type::infinity())
        : terms_(std::move(terms)), floor_(std::move(floor))
    {
        normalize();
    }

    static Series constant(const Rational &c)
    {
        return monomial(E{}, c);
    }
    static Series monomial(E exponent, const Rational &c = 1)
    {
        Series s;
        if (c != 0) {
            s.terms_.emplace_back(std::move(exponent), c);
        }
        return s;
    }
    // Zero known only modulo t^floor.
    static Series unknown_above(E floor)
    {
        Series s;
        s.floor_ = floor_type(std::move(floor));
        return s;
    }

    const std::vector<term_type> &terms() const noexcept
    {
        return terms_;
    }
    const floor_type &floor() const noexcept
    {
        return floor_;
    }
    bool is_exact() const noexcept
    {
        return floor_.is_infinite();
    }
    bool stored_zero() const noexcept
    {
        return terms_.empty();
    }
    bool is_exact_zero() const noexcept
    {
        return terms_.empty() && is_exact();
    }
    const term_type &leading() const
    {
        if (terms_.empty()) {
            throw indeterminate_valuation();
        }
        return terms_.front();
    }
    Rational coeff(const E &exponent) const
    {
        auto it = find(exponent);
        return it != terms_.end() ? it->second : Rational(0);
    }

    // Same value with a floor lowered to at most new_floor.
    Series truncated(const floor_type &new_floor) const
    {
        return Series(terms_, min(floor_, new_floor));
    }

    Series operator-() const
    {
        Series r = *this;
        for (auto &t : r.terms_) {
            t.second = -t.second;
        }
        return r;
    }

    friend Series operator+(const Series &a, const Series &b)
    {
        return merge(a, b, false);
    }
    friend Series operator-(const Series &a, const Series &b)
    {
        return merge(a, b, true);
    }
    Series &operator+=(const Series &b)
    {
        return *this = *this + b;
    }
    Series &operator-=(const Series &b)
    {
        return *this = *this - b;
    }

    // Convolution. With a = A + alpha, b = B + beta (stored parts A, B) the
    // discarded contributions are A*beta, B*alpha and alpha*beta, hence
    // floor = min(v(A) + floor_b, v(B) + floor_a, floor_a + floor_b).
    friend Series operator*(const Series &a, const Series &b)
    {
        floor_type floor = a.floor_ + b.floor_;
        if (!a.terms_.empty()) {
            floor = min(floor, floor_type(a.terms_.front().first) + b.floor_);
        }
        if (!b.terms_.empty()) {
            floor = min(floor, floor_type(b.terms_.front().first) + a.floor_);
        }
        std::vector<term_type> prod;
        prod.reserve(a.terms_.size() * b.terms_.size());
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                E e = ea + eb;
                if (floor.is_infinite() || e < floor.value()) {
                    prod.emplace_back(std::move(e), ca * cb);
                }
            }
        }
        return Series(std::move(prod), std::move(floor));
    }
    Series &operator*=(const Series &b)
    {
        return *this = *this * b;
    }

    // Multiplication by c * t^g.
    Series shifted(const E &g, const Rational &c = 1) const
    {
        if (c == 0) {
            return Series();
        }
        Series r;
        r.terms_.reserve(terms_.size());
        for (const auto &[e, q] : terms_) {
            r.terms_.emplace_back(e + g, q * c);
        }
        r.floor_ = floor_ + floor_type(g);
        return r;
    }

    friend Series scale(const Series &a, const Rational &q)
    {
        if (q == 0) {
            return Series();
        }
        Series r = a;
        for (auto &t : r.terms_) {
            t.second *= q;
        }
        return r;
    }

    // Structural equality: same stored terms and same floor.
    friend bool operator==(const Series &a, const Series &b)
    {
        return a.floor_ == b.floor_ && a.terms_ == b.terms_;
    }

private:
    typename std::vector<term_type>::const_iterator find(const E &e) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const term_type &t, const E &x) { return t.first < x; });
        return (it != terms_.end() && it->first == e) ? it : terms_.end();
    }

    void normalize()
    {
        std::stable_sort(terms_.begin(), terms_.end(),
                         [](const term_type &x, const term_type &y) { return x.first < y.first; });
        std::vector<term_type> out;
        out.reserve(terms_.size());
        for (auto &t : terms_) {
            if (!floor_.is_infinite() && !(t.first < floor_.value())) {
                continue;
            }
            if (!out.empty() && out.back().first == t.first) {
                out.back().second += t.second;
                if (out.back().second == 0) {
                    out.pop_back();
                }
            } else if (t.second != 0) {
                out.push_back(std::move(t));
            }
        }
        terms_ = std::move(out);
    }

    static Series merge(const Series &a, const Series &b, bool subtract)
    {
        Series r;
        r.floor_ = min(a.floor_, b.floor_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        const auto below = [&](const E &e) { return r.floor_.is_infinite() || e < r.floor_.value(); };
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                if (below(i->first)) {
                    r.terms_.push_back(*i);
                }
                ++i;
            } else if (i == a.terms_.end() || j->first < i->first) {
                if (below(j->first)) {
                    r.terms_.emplace_back(j->first, subtract ? Rational(-j->second) : j->second);
                }
                ++j;
            } else {
                Rational c = subtract ? Rational(i->second - j->second) : Rational(i->second + j->second);
                if (c != 0 && below(i->first)) {
                    r.terms_.emplace_back(i->first, std::move(c));
                }
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<term_type> terms_;
    floor_type floor_;
};

// v(a): the minimal stored exponent; +infinity for an exact zero.
template <OrderedGroup E>
ExtValue<E> valuation(const Series<E> &a)
{
    if (a.stored_zero()) {
        if (!a.is_exact()) {
            throw indeterminate_valuation();
        }
        return ExtValue<E>::infinity();
    }
    return ExtValue<E>(a.terms().front().first);
}

// A lower bound for v(a) that is exact whenever the stored part is nonzero.
template <OrderedGroup E>
ExtValue<E> valuation_lower_bound(const Series<E> &a)
{
    return a.stored_zero() ? a.floor() : ExtValue<E>(a.terms().front().first);
}

// Sign of the leading coefficient; 0 for an exact zero.
template <OrderedGroup E>
int sign(const Series<E> &a)
{
    if (a.stored_zero()) {
        if (!a.is_exact()) {
            throw precision_insufficient();
        }
        return 0;
    }
    return hahnexp::sign(a.terms().front().second);
}

template <OrderedGroup E>
std::strong_ordering compare(const Series<E> &a, const Series<E> &b)
{
    const int s = sign(a - b);
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

// a and b agree on every exponent below the smaller of their floors.
template <OrderedGroup E>
bool agrees_up_to_floor(const Series<E> &a, const Series<E> &b)
{
    return (a - b).stored_zero();
}

// Coefficient at exponent 0 of an element of the valuation ring.
template <OrderedGroup E>
Rational residue(const Series<E> &a)
{
    const ExtValue<E> lb = valuation_lower_bound(a);
    if (lb < ExtValue<E>(E{})) {
        throw domain_violation("residue of an element outside the valuation ring");
    }
    if (!a.is_exact() && !(E{} < a.floor().value())) {
        throw precision_insufficient("residue is not determined below the error floor");
    }
    return a.coeff(E{});
}

// a = residue * t^exponent * one_unit with v(one_unit - 1) > 0.
template <OrderedGroup E>
struct MulDecomposition {
    E exponent;
    Rational residue;
    Series<E> one_unit;
};

// a = infinite_part + constant + infinitesimal, infinite_part supported on
// the negative cone.
template <OrderedGroup E>
struct AddDecomposition {
    Series<E> infinite_part;
    Rational constant;
    Series<E> infinitesimal;
};

// Factors out the leading monomial. Valid for any nonzero a with a
// determinable valuation; the residue keeps the sign of a.
template <OrderedGroup E>
MulDecomposition<E> split_leading(const Series<E> &a)
{
    const auto &[g, r] = a.leading();
    Series<E> unit = a.shifted(-g, Rational(1) / r);
    return {g, r, std::move(unit)};
}

template <OrderedGroup E>
MulDecomposition<E> decompose_mul(const Series<E> &a)
{
    if (sign(a) <= 0) {
        throw domain_violation("multiplicative decomposition needs a positive element");
    }
    return split_leading(a);
}

template <OrderedGroup E>
AddDecomposition<E> decompose_add(const Series<E> &a)
{
    const E zero{};
    if (!a.is_exact() && !(zero < a.floor().value())) {
        throw precision_insufficient("constant term is not determined below the error floor");
    }
    std::vector<typename Series<E>::term_type> inf, small;
    Rational constant = 0;
    for (const auto &t : a.terms()) {
        if (t.first.sign() < 0) {
            inf.push_back(t);
        } else if (t.first.is_zero()) {
            constant = t.second;
        } else {
            small.push_back(t);
        }
    }
    return {Series<E>(std::move(inf)), constant, Series<E>(std::move(small), a.floor())};
}

template <OrderedGroup E>
Series<E> recompose(const MulDecomposition<E> &d)
{
    return d.one_unit.shifted(d.exponent, d.residue);
}

template <OrderedGroup E>
Series<E> recompose(const AddDecomposition<E> &d)
{
    return d.infinite_part + Series<E>::constant(d.constant) + d.infinitesimal;
}

// Inverse by the geometric expansion of the 1-unit up to taylor_order:
// a = r t^g (1 + eps), a^-1 = r^-1 t^-g sum_{i<=N} (-eps)^i with the
// truncation floor -g + (N+1) v(eps).
template <OrderedGroup E>
Series<E> invert(const Series<E> &a, unsigned taylor_order)
{
    if (a.stored_zero()) {
        if (a.is_exact()) {
            throw domain_violation("inverse of zero");
        }
        throw indeterminate_valuation();
    }
    const auto d = split_leading(a);
    const Series<E> eps = d.one_unit - Series<E>::constant(1);
    Series<E> sum = Series<E>::constant(1);
    if (!eps.is_exact_zero()) {
        const Series<E> neg = -eps;
        Series<E> power = Series<E>::constant(1);
        for (unsigned i = 1; i <= taylor_order; ++i) {
            power = power * neg;
            sum = sum + power;
        }
        const ExtValue<E> v_eps = valuation_lower_bound(eps);
        sum = sum.truncated(ExtValue<E>(scale(v_eps.value(), Rational(taylor_order + 1))));
    }
    return sum.shifted(-d.exponent, Rational(1) / d.residue);
}

// --- text form ------------------------------------------------------------

// `q*t^{g} + ...` followed by `(exact)` or `(mod t^{g})`; the exponent
// printer is found by argument-dependent lookup.
template <OrderedGroup E>
std::string terms_to_string(const Series<E> &a)
{
    using hahnexp::to_string;
    if (a.stored_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[e, c] : a.terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) {
                out += "-";
            }
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (e.is_zero()) {
            out += to_string(mag);
        } else {
            if (mag != 1) {
                out += to_string(mag) + "*";
            }
            out += "t^{" + to_string(e) + "}";
        }
        first = false;
    }
    return out;
}

template <OrderedGroup E>
std::string to_string(const Series<E> &a)
{
    using hahnexp::to_string;
    std::string out = terms_to_string(a);
    if (a.is_exact()) {
        out += " (exact)";
    } else {
        out += " (mod t^{" + to_string(a.floor().value()) + "})";
    }
    return out;
}

// Parses a series; parse_exponent(cursor) reads one exponent. The floor
// suffix is optional and defaults to exact.
template <OrderedGroup E, class ParseExponent>
Series<E> parse_series(text::Cursor &cur, ParseExponent &&parse_exponent)
{
    std::vector<typename Series<E>::term_type> terms;
    bool negate = false;
    if (cur.accept("-")) {
        negate = true;
    } else {
        cur.accept("+");
    }
    for (;;) {
        Rational c = 1;
        E e{};
        bool have_coeff = false;
        if (cur.at_digit()) {
            c = cur.rational();
            have_coeff = true;
        }
        if (!have_coeff || cur.accept("*")) {
            cur.expect("t^{");
            e = parse_exponent(cur);
            cur.expect("}");
        }
        terms.emplace_back(std::move(e), negate ? Rational(-c) : c);
        if (cur.accept("+")) {
            negate = false;
        } else if (cur.accept("-")) {
            negate = true;
        } else {
            break;
        }
    }
    ExtValue<E> floor = ExtValue<E>::infinity();
    if (cur.accept("(")) {
        if (cur.accept("exact")) {
            cur.expect(")");
        } else {
            cur.expect("mod");
            cur.expect("t^{");
            floor = ExtValue<E>(parse_exponent(cur));
            cur.expect("}");
            cur.expect(")");
        }
    }
    for (const auto &t : terms) {
        if (!floor.is_infinite() && !(t.first < floor.value()) && t.second != 0) {
            cur.fail("term at or above the error floor");
        }
    }
    return Series<E>(std::move(terms), std::move(floor));
}

} // namespace hahnexp

#endif
