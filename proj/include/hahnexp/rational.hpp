#ifndef HAHNEXP_RATIONAL_HPP
#define HAHNEXP_RATIONAL_HPP

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "errors.hpp"

namespace hahnexp
{

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign(const Rational &q)
{
    return sgn(q);
}

// p or p/q, canonical form.
inline std::string to_string(const Rational &q)
{
    return q.get_str();
}

// Reads an optionally signed integer or fraction p/q starting at pos;
// advances pos past it.
inline Rational parse_rational(std::string_view text, std::size_t &pos)
{
    const std::size_t start = pos;
    std::string buf;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        if (text[pos] == '-') {
            buf.push_back('-');
        }
        ++pos;
    }
    const auto digits = [&] {
        std::string d;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            d.push_back(text[pos++]);
        }
        return d;
    };
    const std::string num = digits();
    if (num.empty()) {
        throw parse_error("expected a rational number", start);
    }
    buf += num;
    if (pos < text.size() && text[pos] == '/') {
        const std::size_t slash = pos++;
        const std::string den = digits();
        if (den.empty()) {
            throw parse_error("expected a denominator", slash + 1);
        }
        if (den.find_first_not_of('0') == std::string::npos) {
            throw parse_error("zero denominator", slash + 1);
        }
        buf += '/';
        buf += den;
    }
    Rational q(buf);
    q.canonicalize();
    return q;
}

inline Rational parse_rational(std::string_view text)
{
    std::size_t pos = 0;
    Rational q = parse_rational(text, pos);
    if (pos != text.size()) {
        throw parse_error("trailing characters after rational", pos);
    }
    return q;
}

inline Rational factorial(unsigned n)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

} // namespace hahnexp

#endif
