#pragma once

#include <charconv>
#include <string>

namespace mflat::detail {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;  // the buffer is large enough for any double
    return std::string(buf, end);
}

}  // namespace mflat::detail
