#ifndef HAHNEXP_ERRORS_HPP
#define HAHNEXP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hahnexp
{

// Base of every error raised by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands built over different index universes.
struct universe_mismatch : error {
    universe_mismatch() : error("operands belong to different index universes") {}
};

// Input outside the mathematical domain of an operation (zero where a
// valuation is required, nonnegative input to a contraction, ...).
struct domain_violation : error {
    using error::error;
};

// The stored part of a series is zero but its floor is finite, so the
// valuation is not known.
struct indeterminate_valuation : error {
    indeterminate_valuation() : error("valuation is undetermined below the error floor") {}
};

// An order comparison cannot be decided from the terms below the floor.
struct precision_insufficient : error {
    using error::error;
    precision_insufficient() : error("sign is not determined below the error floor") {}
};

// The infinite part of an argument of exp is not in the image of the
// logarithmic cross-section.
struct not_in_image : error {
    using error::error;
};

// Residue different from 1 handed to the monic logarithm.
struct non_monic_residue : error {
    using error::error;
};

// Iterated logarithms never reached the base stage.
struct no_descent : error {
    using error::error;
};

// Tower depth above the configured bound.
struct depth_exceeded : error {
    using error::error;
};

// Text input that does not follow the grammar; carries the byte offset.
struct parse_error : error {
    parse_error(const std::string &msg, std::size_t pos)
        : error(msg + " at position " + std::to_string(pos)), position(pos)
    {
    }
    std::size_t position;
};

} // namespace hahnexp

#endif
