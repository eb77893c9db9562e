#ifndef HAHNEXP_GROUP_HPP
#define HAHNEXP_GROUP_HPP

// The divisible value group G: the Hahn sum of copies of Q over the index
// set Gamma = sum over a finite ordered label set T of copies of Z.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "text.hpp"

namespace hahnexp
{

// A finite totally ordered set of label atoms; list order is the order.
class OrderTypeSpec
{
public:
    OrderTypeSpec() = default;
    explicit OrderTypeSpec(std::vector<std::string> labels) : labels_(std::move(labels))
    {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].empty()) {
                throw domain_violation("empty label");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (labels_[i] == labels_[j]) {
                    throw domain_violation("duplicate label '" + labels_[i] + "'");
                }
            }
        }
    }

    // Labels t0, t1, ..., t{n-1}.
    static OrderTypeSpec of_size(std::size_t n)
    {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back("t" + std::to_string(i));
        }
        return OrderTypeSpec(std::move(labels));
    }

    std::size_t size() const noexcept
    {
        return labels_.size();
    }
    bool empty() const noexcept
    {
        return labels_.empty();
    }
    const std::string &label(std::size_t i) const
    {
        return labels_.at(i);
    }
    const std::vector<std::string> &labels() const noexcept
    {
        return labels_;
    }
    std::size_t index_of(std::string_view name) const
    {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == name) {
                return i;
            }
        }
        throw domain_violation("unknown label '" + std::string(name) + "'");
    }

    friend bool operator==(const OrderTypeSpec &, const OrderTypeSpec &) = default;

private:
    std::vector<std::string> labels_;
};

// Finite order types are isomorphic exactly when they have the same size.
inline bool same_order_type(const OrderTypeSpec &a, const OrderTypeSpec &b)
{
    return a.size() == b.size();
}

inline std::string to_string(const OrderTypeSpec &t)
{
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += (i ? ", " : "") + t.label(i);
    }
    return out + "]";
}

using Universe = std::shared_ptr<const OrderTypeSpec>;

inline Universe make_universe(OrderTypeSpec spec)
{
    if (spec.empty()) {
        throw domain_violation("order type must be nonempty");
    }
    return std::make_shared<const OrderTypeSpec>(std::move(spec));
}

inline bool same_universe(const Universe &a, const Universe &b)
{
    return a == b || (a && b && *a == *b);
}

// A point (t, n) of Gamma, ordered lexicographically.
struct IndexPoint {
    std::size_t label = 0;
    std::int64_t offset = 0;

    friend auto operator<=>(const IndexPoint &, const IndexPoint &) = default;
};

inline std::string to_string(const IndexPoint &p, const OrderTypeSpec &t)
{
    return "(" + t.label(p.label) + "," + std::to_string(p.offset) + ")";
}

// Element of G: finite-support map Gamma -> Q, sorted by index, no zero
// coefficients. A default-constructed element is a zero that adopts the
// universe of whatever it is combined with.
class GroupElement
{
public:
    using term_type = std::pair<IndexPoint, Rational>;

    GroupElement() = default;
    explicit GroupElement(Universe u) : universe_(std::move(u)) {}

    static GroupElement basis(Universe u, IndexPoint p, const Rational &c = 1)
    {
        check_point(u, p);
        GroupElement g(std::move(u));
        if (c != 0) {
            g.terms_.emplace_back(p, c);
        }
        return g;
    }

    // Sorts, merges repeated indices and drops zeros.
    static GroupElement from_terms(Universe u, std::vector<term_type> terms)
    {
        for (const auto &[p, c] : terms) {
            check_point(u, p);
        }
        std::stable_sort(terms.begin(), terms.end(),
                         [](const term_type &a, const term_type &b) { return a.first < b.first; });
        GroupElement g(std::move(u));
        for (auto &t : terms) {
            if (!g.terms_.empty() && g.terms_.back().first == t.first) {
                g.terms_.back().second += t.second;
                if (g.terms_.back().second == 0) {
                    g.terms_.pop_back();
                }
            } else if (t.second != 0) {
                g.terms_.push_back(std::move(t));
            }
        }
        return g;
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }
    const std::vector<term_type> &terms() const noexcept
    {
        return terms_;
    }
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }
    // Sign of the coefficient at the minimal support index.
    int sign() const
    {
        return terms_.empty() ? 0 : hahnexp::sign(terms_.front().second);
    }
    Rational coeff(const IndexPoint &p) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                                   [](const term_type &t, const IndexPoint &q) { return t.first < q; });
        return (it != terms_.end() && it->first == p) ? it->second : Rational(0);
    }

    GroupElement operator-() const
    {
        GroupElement r = *this;
        for (auto &t : r.terms_) {
            t.second = -t.second;
        }
        return r;
    }

    friend GroupElement operator+(const GroupElement &a, const GroupElement &b)
    {
        return merge(a, b, false);
    }
    friend GroupElement operator-(const GroupElement &a, const GroupElement &b)
    {
        return merge(a, b, true);
    }
    GroupElement &operator+=(const GroupElement &b)
    {
        return *this = *this + b;
    }
    GroupElement &operator-=(const GroupElement &b)
    {
        return *this = *this - b;
    }

    friend bool operator==(const GroupElement &a, const GroupElement &b)
    {
        unify(a.universe_, b.universe_);
        return a.terms_ == b.terms_;
    }

    // Lexicographic order: the sign of a - b is the sign of the coefficient
    // of a - b at its minimal support index.
    friend std::strong_ordering operator<=>(const GroupElement &a, const GroupElement &b)
    {
        unify(a.universe_, b.universe_);
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            Rational diff;
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                diff = i->second;
                ++i;
            } else if (i == a.terms_.end() || j->first < i->first) {
                diff = -j->second;
                ++j;
            } else {
                diff = i->second - j->second;
                ++i;
                ++j;
            }
            if (diff != 0) {
                return diff > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
            }
        }
        return std::strong_ordering::equal;
    }

    static Universe unify(const Universe &a, const Universe &b)
    {
        if (!a) {
            return b;
        }
        if (!b || same_universe(a, b)) {
            return a;
        }
        throw universe_mismatch();
    }

private:
    static void check_point(const Universe &u, const IndexPoint &p)
    {
        if (!u) {
            throw domain_violation("basis element needs a universe");
        }
        if (p.label >= u->size()) {
            throw domain_violation("label index outside the order type");
        }
    }

    static GroupElement merge(const GroupElement &a, const GroupElement &b, bool subtract)
    {
        GroupElement r(unify(a.universe_, b.universe_));
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                r.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                r.terms_.emplace_back(j->first, subtract ? Rational(-j->second) : j->second);
                ++j;
            } else {
                Rational c = subtract ? Rational(i->second - j->second) : Rational(i->second + j->second);
                if (c != 0) {
                    r.terms_.emplace_back(i->first, std::move(c));
                }
                ++i;
                ++j;
            }
        }
        return r;
    }

    Universe universe_;
    std::vector<term_type> terms_;
};

inline GroupElement scale(const GroupElement &a, const Rational &q)
{
    if (q == 0) {
        return GroupElement(a.universe());
    }
    std::vector<GroupElement::term_type> terms = a.terms();
    for (auto &t : terms) {
        t.second *= q;
    }
    return GroupElement::from_terms(a.universe(), std::move(terms));
}

inline std::strong_ordering compare(const GroupElement &a, const GroupElement &b)
{
    return a <=> b;
}

inline GroupElement abs(const GroupElement &a)
{
    return a.sign() < 0 ? -a : a;
}

// Natural valuation v_G: the minimal support index, i.e. the archimedean
// class. Bigger elements have smaller class.
inline IndexPoint natural_valuation(const GroupElement &a)
{
    if (a.is_zero()) {
        throw domain_violation("natural valuation of zero");
    }
    return a.terms().front().first;
}

inline bool arch_equivalent(const GroupElement &a, const GroupElement &b)
{
    if (a.is_zero() || b.is_zero()) {
        throw domain_violation("archimedean class of zero");
    }
    GroupElement::unify(a.universe(), b.universe());
    return natural_valuation(a) == natural_valuation(b);
}

// Text form: `q1*e(label,int) + q2*e(label,int) + ...`, `0` for zero.
inline std::string to_string(const GroupElement &g)
{
    if (g.is_zero()) {
        return "0";
    }
    const OrderTypeSpec &t = *g.universe();
    std::string out;
    bool first = true;
    for (const auto &[p, c] : g.terms()) {
        Rational mag = c;
        if (first) {
            if (c < 0) {
                out += "-";
                mag = -c;
            }
        } else {
            out += c < 0 ? " - " : " + ";
            mag = c < 0 ? Rational(-c) : c;
        }
        if (mag != 1) {
            out += to_string(mag) + "*";
        }
        out += "e" + to_string(p, t);
        first = false;
    }
    return out;
}

namespace detail
{

inline GroupElement parse_group_term(text::Cursor &cur, const Universe &u, bool negate)
{
    Rational coeff = 1;
    if (cur.at_digit()) {
        coeff = cur.rational();
        cur.expect("*");
    }
    cur.expect("e(");
    const std::size_t label_pos = cur.pos;
    const std::string label = cur.identifier();
    std::size_t label_index = 0;
    try {
        label_index = u->index_of(label);
    } catch (const domain_violation &) {
        throw parse_error("unknown label '" + label + "'", label_pos);
    }
    cur.expect(",");
    const std::int64_t offset = cur.integer();
    cur.expect(")");
    if (cur.accept("/")) {
        const std::size_t den_pos = cur.pos;
        const std::int64_t den = cur.integer();
        if (den <= 0) {
            throw parse_error("divisor must be positive", den_pos);
        }
        coeff /= Rational(static_cast<long>(den));
    }
    if (negate) {
        coeff = -coeff;
    }
    return GroupElement::basis(u, IndexPoint{label_index, offset}, coeff);
}

} // namespace detail

// Parses a group element at the cursor; stops at the first character that
// cannot continue the sum.
inline GroupElement parse_group_element(text::Cursor &cur, const Universe &u)
{
    if (!u) {
        throw domain_violation("parsing needs a universe");
    }
    if (cur.peek() == '0' && !cur.src.substr(cur.pos).starts_with("0/")) {
        const std::size_t save = cur.pos;
        ++cur.pos;
        if (!cur.starts_with("*")) {
            return GroupElement(u);
        }
        cur.pos = save;
    }
    bool negate = false;
    if (cur.accept("-")) {
        negate = true;
    } else {
        cur.accept("+");
    }
    GroupElement g = detail::parse_group_term(cur, u, negate);
    for (;;) {
        const std::size_t save = cur.pos;
        if (cur.accept("+")) {
            negate = false;
        } else if (cur.accept("-")) {
            negate = true;
        } else {
            break;
        }
        if (!(cur.at_digit() || cur.starts_with("e("))) {
            cur.pos = save;
            break;
        }
        g += detail::parse_group_term(cur, u, negate);
    }
    return g;
}

inline GroupElement parse_group_element(std::string_view s, const Universe &u)
{
    text::Cursor cur{s};
    GroupElement g = parse_group_element(cur, u);
    cur.expect_end();
    return g;
}

} // namespace hahnexp

#endif
