#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace lwcov {

/// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff...][Z]`. Fractional digits beyond the
/// millisecond are truncated. Throws ValidationError on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_timestamp(Timestamp t);

}  // namespace lwcov
