#ifndef HAHNEXP_EXPR_HPP
#define HAHNEXP_EXPR_HPP

// Small expression language over Q((G)):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer)?
//   primary := rational | 't^{' group '}' | 'e(' label ',' int ')'
//            | name '(' expr ')' | '(' expr ')'
//   name    := log | exp | v | vG | chi
//
// Values are series, group elements, valuations (possibly +inf) or index
// points; log in interval mode may also return a series plus an interval.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "errors.hpp"
#include "exp_log.hpp"
#include "group.hpp"
#include "series.hpp"
#include "text.hpp"

namespace hahnexp
{

using EvalValue = std::variant<Series<GroupElement>, GroupElement, ExtValue<GroupElement>, IndexPoint,
                               IntervalLog<GroupElement>>;

inline std::string eval_kind(const EvalValue &v)
{
    static const char *names[] = {"series", "group", "valuation", "index", "interval-log"};
    return names[v.index()];
}

inline std::string to_string(const EvalValue &v, const OrderTypeSpec &t)
{
    struct Visitor {
        const OrderTypeSpec &t;
        std::string operator()(const Series<GroupElement> &s) const
        {
            return to_string(s);
        }
        std::string operator()(const GroupElement &g) const
        {
            return to_string(g);
        }
        std::string operator()(const ExtValue<GroupElement> &e) const
        {
            return e.is_infinite() ? "+inf" : to_string(e.value());
        }
        std::string operator()(const IndexPoint &p) const
        {
            return to_string(p, t);
        }
        std::string operator()(const IntervalLog<GroupElement> &l) const
        {
            return terms_to_string(l.series_part) + " + " + to_string(l.constant) + " "
                   + (l.series_part.is_exact() ? "(exact)" : "(mod t^{" + to_string(l.series_part.floor().value()) + "})");
        }
    };
    return std::visit(Visitor{t}, v);
}

class Evaluator
{
public:
    Evaluator(Universe u, LogComponents<GroupElement> comps, PrecisionPolicy policy)
        : universe_(std::move(u)), comps_(std::move(comps)), policy_(policy)
    {
    }

    EvalValue evaluate(std::string_view text) const
    {
        text::Cursor cur{text};
        EvalValue v = expr(cur);
        cur.expect_end();
        return v;
    }

private:
    using S = Series<GroupElement>;

    // A series that is an exact constant, read as a rational.
    static std::optional<Rational> as_scalar(const EvalValue &v)
    {
        if (const S *s = std::get_if<S>(&v)) {
            if (!s->is_exact()) {
                return std::nullopt;
            }
            if (s->stored_zero()) {
                return Rational(0);
            }
            if (s->terms().size() == 1 && s->terms().front().first.is_zero()) {
                return s->terms().front().second;
            }
        }
        return std::nullopt;
    }

    EvalValue expr(text::Cursor &cur) const
    {
        EvalValue acc = term(cur);
        for (;;) {
            const std::size_t at = cur.pos;
            bool minus = false;
            if (cur.accept("+")) {
                minus = false;
            } else if (cur.accept("-")) {
                minus = true;
            } else {
                return acc;
            }
            EvalValue rhs = term(cur);
            if (std::holds_alternative<S>(acc) && std::holds_alternative<S>(rhs)) {
                acc = minus ? std::get<S>(acc) - std::get<S>(rhs) : std::get<S>(acc) + std::get<S>(rhs);
            } else if (std::holds_alternative<GroupElement>(acc) && std::holds_alternative<GroupElement>(rhs)) {
                const auto &a = std::get<GroupElement>(acc);
                const auto &b = std::get<GroupElement>(rhs);
                acc = minus ? a - b : a + b;
            } else {
                throw parse_error("cannot add " + eval_kind(acc) + " and " + eval_kind(rhs), at);
            }
        }
    }

    EvalValue term(text::Cursor &cur) const
    {
        EvalValue acc = unary(cur);
        for (;;) {
            const std::size_t at = cur.pos;
            bool divide = false;
            if (cur.accept("*")) {
                divide = false;
            } else if (cur.accept("/")) {
                divide = true;
            } else {
                return acc;
            }
            EvalValue rhs = unary(cur);
            if (std::holds_alternative<S>(acc) && std::holds_alternative<S>(rhs)) {
                const S &b = std::get<S>(rhs);
                acc = divide ? std::get<S>(acc) * invert(b, policy_.taylor_order) : std::get<S>(acc) * b;
            } else if (std::holds_alternative<GroupElement>(acc) && as_scalar(rhs)) {
                const Rational q = *as_scalar(rhs);
                if (divide && q == 0) {
                    throw parse_error("division by zero", at);
                }
                acc = scale(std::get<GroupElement>(acc), divide ? Rational(1 / q) : q);
            } else if (!divide && as_scalar(acc) && std::holds_alternative<GroupElement>(rhs)) {
                acc = scale(std::get<GroupElement>(rhs), *as_scalar(acc));
            } else {
                throw parse_error(std::string("cannot ") + (divide ? "divide " : "multiply ") + eval_kind(acc)
                                      + " and " + eval_kind(rhs),
                                  at);
            }
        }
    }

    EvalValue unary(text::Cursor &cur) const
    {
        const std::size_t at = cur.pos;
        if (cur.accept("-")) {
            EvalValue v = unary(cur);
            if (S *s = std::get_if<S>(&v)) {
                return -*s;
            }
            if (GroupElement *g = std::get_if<GroupElement>(&v)) {
                return -*g;
            }
            throw parse_error("cannot negate " + eval_kind(v), at);
        }
        return power(cur);
    }

    EvalValue power(text::Cursor &cur) const
    {
        EvalValue base = primary(cur);
        if (cur.starts_with("^")) {
            const std::size_t at = cur.pos;
            cur.expect("^");
            const std::int64_t n = cur.integer();
            S *s = std::get_if<S>(&base);
            if (!s) {
                throw parse_error("only series can be raised to a power", at);
            }
            if (n > 64 || n < -64) {
                throw parse_error("exponent out of range", at);
            }
            S b = n < 0 ? invert(*s, policy_.taylor_order) : *s;
            S out = S::constant(1);
            for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) {
                out = out * b;
            }
            return out;
        }
        return base;
    }

    EvalValue primary(text::Cursor &cur) const
    {
        const std::size_t at = cur.pos;
        if (cur.accept("(")) {
            EvalValue v = expr(cur);
            cur.expect(")");
            return v;
        }
        if (cur.at_digit()) {
            return S::constant(cur.rational());
        }
        if (cur.accept("t^{")) {
            GroupElement g = parse_group_element(cur, universe_);
            cur.expect("}");
            return S::monomial(std::move(g));
        }
        const std::string name = cur.identifier();
        if (name == "e") {
            cur.expect("(");
            const std::size_t label_pos = cur.pos;
            const std::string label = cur.identifier();
            std::size_t index = 0;
            try {
                index = universe_->index_of(label);
            } catch (const domain_violation &) {
                throw parse_error("unknown label '" + label + "'", label_pos);
            }
            cur.expect(",");
            const std::int64_t n = cur.integer();
            cur.expect(")");
            return GroupElement::basis(universe_, {index, n});
        }
        if (name != "log" && name != "exp" && name != "v" && name != "vG" && name != "chi") {
            throw parse_error("unknown function '" + name + "'", at);
        }
        cur.expect("(");
        EvalValue arg = expr(cur);
        cur.expect(")");
        return apply(name, std::move(arg), at);
    }

    EvalValue apply(const std::string &name, EvalValue arg, std::size_t at) const
    {
        if (name == "vG" || name == "chi") {
            const GroupElement *g = std::get_if<GroupElement>(&arg);
            if (!g) {
                throw parse_error(name + " expects a group element", at);
            }
            if (name == "vG") {
                return natural_valuation(*g);
            }
            return chi_from_log(*g, comps_, policy_);
        }
        const S *s = std::get_if<S>(&arg);
        if (!s) {
            throw parse_error(name + " expects a series", at);
        }
        if (name == "v") {
            return valuation(*s);
        }
        if (name == "exp") {
            return full_exp(*s, comps_, policy_);
        }
        if (comps_.mid.mode == ResidueLog::Mode::interval && sign(*s) > 0 && !s->stored_zero()
            && s->leading().second != 1) {
            return full_log_interval(*s, comps_, policy_);
        }
        return full_log(*s, comps_, policy_);
    }

    Universe universe_;
    LogComponents<GroupElement> comps_;
    PrecisionPolicy policy_;
};

} // namespace hahnexp

#endif
