#ifndef HAHNEXP_CONFIG_HPP
#define HAHNEXP_CONFIG_HPP

// Run configuration shared by the command-line driver and the suites, and
// its plain key = value file format.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "rational.hpp"
#include "residue_log.hpp"
#include "segment.hpp"

namespace hahnexp
{

struct RunConfig {
    std::vector<std::string> tau{"t0"};
    unsigned depth = 2;
    unsigned max_depth = 3;
    unsigned taylor_order = 4;
    OffsetWindow window{};
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    ResidueLog::Mode mode = ResidueLog::Mode::monic;
    Rational interval_width{1, 1000000};
    unsigned witness_bound = 8;

    void validate() const
    {
        if (tau.empty()) {
            throw domain_violation("tau must name at least one label");
        }
        OrderTypeSpec check(tau);
        if (taylor_order < 1) {
            throw domain_violation("taylor order must be at least 1");
        }
        if (samples < 1) {
            throw domain_violation("samples must be at least 1");
        }
        if (depth > max_depth) {
            throw depth_exceeded("depth " + std::to_string(depth) + " exceeds max_depth "
                                 + std::to_string(max_depth));
        }
        if (window.lo > window.hi) {
            throw domain_violation("offset window is empty");
        }
        if (interval_width <= 0) {
            throw domain_violation("interval width must be positive");
        }
    }

    Universe universe() const
    {
        return make_universe(OrderTypeSpec(tau));
    }
    ResidueLog residue_log() const
    {
        return {mode, interval_width};
    }
};

namespace detail
{

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_unsigned(const std::string &key, const std::string &value)
{
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw domain_violation("'" + key + "' expects a nonnegative integer, got '" + value + "'");
    }
    try {
        const unsigned long long v = std::stoull(value);
        if (v > static_cast<unsigned long long>(static_cast<T>(-1))) {
            throw std::out_of_range(key);
        }
        return static_cast<T>(v);
    } catch (const std::out_of_range &) {
        throw domain_violation("'" + key + "' is out of range");
    }
}

} // namespace detail

// "a,b,c" or a size n meaning t0..t{n-1}.
inline std::vector<std::string> parse_tau(const std::string &value)
{
    const std::string v = detail::trim(value);
    if (!v.empty() && v.find_first_not_of("0123456789") == std::string::npos) {
        const auto n = detail::parse_unsigned<std::size_t>("tau", v);
        if (n == 0) {
            throw domain_violation("tau must be nonempty");
        }
        return OrderTypeSpec::of_size(n).labels();
    }
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) {
            throw domain_violation("empty label in tau");
        }
        for (char c : item) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
                throw domain_violation("label '" + item + "' must be alphanumeric");
            }
        }
        out.push_back(item);
    }
    if (out.empty()) {
        throw domain_violation("tau must be nonempty");
    }
    OrderTypeSpec check(out);
    return out;
}

// "lo..hi" or "lo,hi".
inline OffsetWindow parse_window(const std::string &value)
{
    std::string v = detail::trim(value);
    std::size_t sep = v.find("..");
    std::size_t len = 2;
    if (sep == std::string::npos) {
        sep = v.find(',');
        len = 1;
    }
    if (sep == std::string::npos) {
        throw domain_violation("window expects lo..hi, got '" + v + "'");
    }
    try {
        std::size_t used = 0;
        const std::string lo = detail::trim(v.substr(0, sep));
        const std::string hi = detail::trim(v.substr(sep + len));
        OffsetWindow w{std::stoll(lo, &used), 0};
        if (used != lo.size()) {
            throw std::invalid_argument(lo);
        }
        w.hi = std::stoll(hi, &used);
        if (used != hi.size()) {
            throw std::invalid_argument(hi);
        }
        if (w.lo > w.hi) {
            throw domain_violation("window lower bound exceeds upper bound");
        }
        return w;
    } catch (const std::logic_error &) {
        throw domain_violation("window expects integers lo..hi, got '" + v + "'");
    }
}

inline ResidueLog::Mode parse_mode(const std::string &value)
{
    const std::string v = detail::trim(value);
    if (v == "monic") {
        return ResidueLog::Mode::monic;
    }
    if (v == "interval") {
        return ResidueLog::Mode::interval;
    }
    throw domain_violation("mode must be monic or interval, got '" + v + "'");
}

inline void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value)
{
    if (key == "tau") {
        cfg.tau = parse_tau(value);
    } else if (key == "depth") {
        cfg.depth = detail::parse_unsigned<unsigned>(key, value);
    } else if (key == "max_depth") {
        cfg.max_depth = detail::parse_unsigned<unsigned>(key, value);
    } else if (key == "order" || key == "taylor_order") {
        cfg.taylor_order = detail::parse_unsigned<unsigned>(key, value);
    } else if (key == "window") {
        cfg.window = parse_window(value);
    } else if (key == "samples") {
        cfg.samples = detail::parse_unsigned<std::size_t>(key, value);
    } else if (key == "seed") {
        cfg.seed = detail::parse_unsigned<std::uint64_t>(key, value);
    } else if (key == "mode") {
        cfg.mode = parse_mode(value);
    } else if (key == "interval_width") {
        cfg.interval_width = parse_rational(value);
    } else if (key == "witness_bound") {
        cfg.witness_bound = detail::parse_unsigned<unsigned>(key, value);
    } else {
        throw domain_violation("unknown configuration key '" + key + "'");
    }
}

// One "key = value" per line; '#' starts a comment.
inline void apply_config_text(RunConfig &cfg, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = detail::trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw domain_violation("config line " + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(cfg, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
        } catch (const error &e) {
            throw domain_violation("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void apply_config_file(RunConfig &cfg, const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw domain_violation("cannot read config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

} // namespace hahnexp

#endif
