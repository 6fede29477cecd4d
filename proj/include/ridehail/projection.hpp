#pragma once

#include <stdexcept>

#include "ridehail/planar.hpp"

namespace ridehail::projection {

// Latitude outside the transverse Mercator validity band (|lat| > 84 deg).
struct OutOfBand : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Planar coordinates outside the zone's valid easting/northing range, or a
// synthetic point (zone 0) that never came from a projection.
struct OutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GeoPoint {
    double latitude_deg = 0.0;   // [-90, 90]
    double longitude_deg = 0.0;  // [-180, 180)
};

// UTM zone containing this longitude (1..60).
int utm_zone_of(double longitude_deg);

// WGS84 transverse Mercator with standard UTM parameters (scale 0.9996,
// 500 km false easting, 10000 km false northing in the south), rounded to
// whole meters. forced_zone pins the zone when a region straddles a zone
// boundary; 0 means "use the point's natural zone".
PlanarPoint project(const GeoPoint& g, int forced_zone = 0);

// Inverse projection. Requires a point produced by project (or at least a
// nonzero zone and in-range easting/northing).
GeoPoint unproject(const PlanarPoint& p);

// Geodesic distance on the WGS84 ellipsoid, via Vincenty-style iteration on
// the auxiliary sphere. Used by tests to state round-trip error in meters.
double geodesic_distance_m(const GeoPoint& a, const GeoPoint& b);

}  // namespace ridehail::projection
