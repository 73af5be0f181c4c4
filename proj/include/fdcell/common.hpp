#pragma once

#include <string_view>

namespace fdcell {

/// Link direction.
enum class Direction { Uplink, Downlink };

inline std::string_view to_string(Direction d) { return d == Direction::Uplink ? "UL" : "DL"; }

inline Direction opposite(Direction d) {
    return d == Direction::Uplink ? Direction::Downlink : Direction::Uplink;
}

enum class OutputFormat { Csv, Json };

/// Returned when the build has no version injected.
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace fdcell
