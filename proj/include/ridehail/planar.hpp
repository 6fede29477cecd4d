#pragma once

#include <compare>
#include <cstdint>

namespace ridehail {

// Planar position in whole meters. x is easting, y is northing. zone is the
// UTM zone the coordinates live in (positive = northern hemisphere, negative
// = southern); zone 0 marks synthetic maps that never went through a
// projection. All attack math runs on these integers.
//
// A scenario always lives in a single plane, so identity and ordering are
// the coordinates alone; zone rides along for unprojection and reporting.
struct PlanarPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int32_t zone = 0;

    friend constexpr bool operator==(const PlanarPoint& a, const PlanarPoint& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend constexpr auto operator<=>(const PlanarPoint& a, const PlanarPoint& b) {
        return a.x != b.x ? a.x <=> b.x : a.y <=> b.y;
    }
};

// Exact squared Euclidean distance; fits int64 for any pair of points less
// than ~2e9 m apart, far beyond any zone this tool handles.
constexpr std::int64_t squared_distance(const PlanarPoint& a, const PlanarPoint& b) {
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace ridehail
