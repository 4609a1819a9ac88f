#pragma once

#include <array>
#include <charconv>
#include <compare>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fxnet {

/// Error type thrown by every failing operation in the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Three-letter uppercase currency identifier (ISO-4217 style; precious
/// metals such as XAU/XAG/XPT use the same shape).
struct CurrencyCode {
    std::array<char, 3> chars{};

    static CurrencyCode parse(std::string_view text) {
        if (text.size() != 3)
            throw Error("invalid currency code '" + std::string(text) + "': must be 3 characters");
        CurrencyCode code;
        for (int i = 0; i < 3; ++i) {
            const char c = text[i];
            if (c < 'A' || c > 'Z')
                throw Error("invalid currency code '" + std::string(text) + "': A-Z only");
            code.chars[static_cast<std::size_t>(i)] = c;
        }
        return code;
    }

    std::string str() const { return std::string(chars.begin(), chars.end()); }

    auto operator<=>(const CurrencyCode&) const = default;
};

/// Shortest decimal form that parses back to exactly the same double; used
/// for lossless CSV round-trips.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

/// Fixed-point decimal with the given number of digits after the point.
inline std::string format_fixed(double v, int precision) {
    std::array<char, 64> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.*f", precision, v);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

/// Strict double parser: the whole field must be consumed.
inline double parse_double(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw Error("malformed number '" + std::string(text) + "'");
    return value;
}

}  // namespace fxnet
