#ifndef HAHNEXP_TESTS_HELPERS_HPP
#define HAHNEXP_TESTS_HELPERS_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <hahnexp/group.hpp>
#include <hahnexp/series.hpp>
#include <hahnexp/text.hpp>

namespace testing_support
{

using namespace hahnexp;

inline Universe universe(std::size_t n)
{
    return make_universe(OrderTypeSpec::of_size(n));
}

inline GroupElement e(const Universe &u, std::size_t label, std::int64_t offset, const Rational &c = 1)
{
    return GroupElement::basis(u, {label, offset}, c);
}

inline GroupElement G(const Universe &u, std::string_view text)
{
    return parse_group_element(text, u);
}

inline Series<GroupElement> ser(const Universe &u, std::string_view text)
{
    text::Cursor cur{text};
    Series<GroupElement> s =
        parse_series<GroupElement>(cur, [&u](text::Cursor &c) { return parse_group_element(c, u); });
    cur.expect_end();
    return s;
}

inline Series<GroupElement> mono(const GroupElement &g, const Rational &c = 1)
{
    return Series<GroupElement>::monomial(g, c);
}

inline Series<GroupElement> constant(const Rational &c)
{
    return Series<GroupElement>::constant(c);
}

} // namespace testing_support

#endif
