#ifndef HAHNEXP_TEXT_HPP
#define HAHNEXP_TEXT_HPP

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "rational.hpp"

namespace hahnexp::text
{

// Minimal recursive-descent helper shared by the grammars of the library.
struct Cursor {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws()
    {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
            ++pos;
        }
    }
    bool at_end()
    {
        skip_ws();
        return pos >= src.size();
    }
    char peek()
    {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool starts_with(std::string_view s)
    {
        skip_ws();
        return src.substr(pos).starts_with(s);
    }
    bool accept(std::string_view s)
    {
        if (starts_with(s)) {
            pos += s.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view s)
    {
        if (!accept(s)) {
            fail("expected '" + std::string(s) + "'");
        }
    }
    [[noreturn]] void fail(const std::string &msg) const
    {
        throw parse_error(msg, pos);
    }
    void expect_end()
    {
        if (!at_end()) {
            fail("unexpected trailing input");
        }
    }

    std::string identifier()
    {
        skip_ws();
        const std::size_t start = pos;
        while (pos < src.size()
               && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
            ++pos;
        }
        if (start == pos) {
            fail("expected an identifier");
        }
        return std::string(src.substr(start, pos - start));
    }

    std::int64_t integer()
    {
        skip_ws();
        const std::size_t start = pos;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
            ++pos;
        }
        const std::size_t digits = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            ++pos;
        }
        if (digits == pos) {
            pos = start;
            fail("expected an integer");
        }
        try {
            return std::stoll(std::string(src.substr(start, pos - start)));
        } catch (const std::out_of_range &) {
            pos = start;
            fail("integer out of range");
        }
    }

    Rational rational()
    {
        skip_ws();
        return parse_rational(src, pos);
    }

    bool at_digit()
    {
        skip_ws();
        return pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]));
    }
};

} // namespace hahnexp::text

#endif
