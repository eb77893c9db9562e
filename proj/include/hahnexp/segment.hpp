#ifndef HAHNEXP_SEGMENT_HPP
#define HAHNEXP_SEGMENT_HPP

// Nonempty final segments Gamma_w of Gamma. Each one fixes a convex
// subgroup G_w (elements supported inside Gamma_w) and hence a coarsening
// w of the natural valuation with wK = G / G_w.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "series.hpp"

namespace hahnexp
{

// Finite window of offsets used wherever the infinite family of final
// segments of Gamma has to be enumerated.
struct OffsetWindow {
    std::int64_t lo = -3;
    std::int64_t hi = 3;
};

// Stored as its starting point: either a point (t, n) (the segment
// {(t,m) : m >= n} plus all later copies) or a whole copy t (all of copy t
// and later copies).
class FinalSegment
{
public:
    static FinalSegment all(Universe u)
    {
        return FinalSegment(std::move(u), 0, std::nullopt);
    }
    static FinalSegment cut(Universe u, std::size_t label, std::int64_t offset)
    {
        check_label(u, label);
        return FinalSegment(std::move(u), label, offset);
    }
    // {(t, n) : t > label}; rejected when empty.
    static FinalSegment label_cut(Universe u, std::size_t label)
    {
        check_label(u, label);
        if (label + 1 >= u->size()) {
            throw domain_violation("label cut above the last label is empty");
        }
        return FinalSegment(std::move(u), label + 1, std::nullopt);
    }
    // {(t, n) : t >= label}.
    static FinalSegment from_label(Universe u, std::size_t label)
    {
        check_label(u, label);
        return FinalSegment(std::move(u), label, std::nullopt);
    }

    const Universe &universe() const noexcept
    {
        return universe_;
    }
    std::size_t first_label() const noexcept
    {
        return label_;
    }
    bool is_all() const noexcept
    {
        return label_ == 0 && !offset_;
    }
    bool is_cut() const noexcept
    {
        return offset_.has_value();
    }
    std::optional<IndexPoint> minimum() const
    {
        if (offset_) {
            return IndexPoint{label_, *offset_};
        }
        return std::nullopt;
    }

    bool contains(const IndexPoint &p) const
    {
        if (p.label != label_) {
            return p.label > label_;
        }
        return !offset_ || p.offset >= *offset_;
    }

    // g in G_w: every support index lies in the segment.
    bool contains(const GroupElement &g) const
    {
        GroupElement::unify(universe_, g.universe());
        for (const auto &[p, c] : g.terms()) {
            if (!contains(p)) {
                return false;
            }
        }
        return true;
    }

    // The class of g in G / G_w, represented by its coordinates outside the
    // segment (they form an initial segment of Gamma, so the quotient order
    // is again lexicographic).
    GroupElement project(const GroupElement &g) const
    {
        GroupElement::unify(universe_, g.universe());
        std::vector<GroupElement::term_type> kept;
        for (const auto &t : g.terms()) {
            if (!contains(t.first)) {
                kept.push_back(t);
            }
        }
        return GroupElement::from_terms(universe_, std::move(kept));
    }

    bool subset_of(const FinalSegment &other) const
    {
        return start_key() >= other.start_key();
    }

    // Inclusion order.
    friend std::strong_ordering operator<=>(const FinalSegment &a, const FinalSegment &b)
    {
        return b.start_key() <=> a.start_key();
    }
    friend bool operator==(const FinalSegment &a, const FinalSegment &b)
    {
        return same_universe(a.universe_, b.universe_) && a.label_ == b.label_ && a.offset_ == b.offset_;
    }

private:
    FinalSegment(Universe u, std::size_t label, std::optional<std::int64_t> offset)
        : universe_(std::move(u)), label_(label), offset_(offset)
    {
    }

    static void check_label(const Universe &u, std::size_t label)
    {
        if (!u || label >= u->size()) {
            throw domain_violation("label outside the order type");
        }
    }

    // A whole copy starts "at -infinity" of its label.
    std::tuple<std::size_t, bool, std::int64_t> start_key() const
    {
        return {label_, offset_.has_value(), offset_.value_or(0)};
    }

    Universe universe_;
    std::size_t label_;
    std::optional<std::int64_t> offset_;
};

inline std::string to_string(const FinalSegment &s)
{
    const OrderTypeSpec &t = *s.universe();
    if (s.is_all()) {
        return "ALL";
    }
    if (auto m = s.minimum()) {
        return "cut" + to_string(*m, t);
    }
    return "above(" + t.label(s.first_label() - 1) + ")";
}

inline FinalSegment parse_final_segment(std::string_view text, const Universe &u)
{
    text::Cursor cur{text};
    if (cur.accept("ALL")) {
        cur.expect_end();
        return FinalSegment::all(u);
    }
    const bool is_cut = cur.accept("cut");
    if (!is_cut) {
        cur.expect("above");
    }
    cur.expect("(");
    const std::size_t label_pos = cur.pos;
    const std::string name = cur.identifier();
    std::size_t label = 0;
    try {
        label = u->index_of(name);
    } catch (const domain_violation &) {
        throw parse_error("unknown label '" + name + "'", label_pos);
    }
    if (is_cut) {
        cur.expect(",");
        const std::int64_t n = cur.integer();
        cur.expect(")");
        cur.expect_end();
        return FinalSegment::cut(u, label, n);
    }
    cur.expect(")");
    cur.expect_end();
    return FinalSegment::label_cut(u, label);
}

// Data of an element relative to the coarsening w attached to a segment.
struct WData {
    bool in_ring = false;        // a in R_w
    bool in_ideal = false;       // a in I_w
    bool is_unit = false;        // wa = 0
    ExtValue<GroupElement> value; // wa, +infinity for a = 0
};

inline WData w_data(const Series<GroupElement> &a, const FinalSegment &seg)
{
    const ExtValue<GroupElement> va = valuation(a);
    if (va.is_infinite()) {
        return {true, true, false, ExtValue<GroupElement>::infinity()};
    }
    GroupElement wa = seg.project(va.value());
    const int s = wa.sign();
    return {s >= 0, s > 0, s == 0, ExtValue<GroupElement>(std::move(wa))};
}

} // namespace hahnexp

#endif
