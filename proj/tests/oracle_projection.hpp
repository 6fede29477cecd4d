#pragma once

// Test-side transverse Mercator reference built on the classic USGS series
// (Snyder, geodetic-latitude expansion in e^2). Deliberately a different
// formulation from the library's conformal-latitude series so the two can
// cross-check each other to sub-millimeter agreement.

#include <cmath>

namespace oracle {

struct TmResult {
    double easting;
    double northing;  // without false northing
};

inline TmResult snyder_forward(double lat_deg, double lon_deg, double lon0_deg) {
    constexpr double a = 6378137.0;
    constexpr double f = 1.0 / 298.257223563;
    constexpr double k0 = 0.9996;
    const double d2r = std::acos(-1.0) / 180.0;

    const double e2 = f * (2.0 - f);
    const double ep2 = e2 / (1.0 - e2);
    const double phi = lat_deg * d2r;
    const double dlam = (lon_deg - lon0_deg) * d2r;

    const double sinp = std::sin(phi), cosp = std::cos(phi), tanp = std::tan(phi);
    const double nu = a / std::sqrt(1.0 - e2 * sinp * sinp);
    const double t = tanp * tanp;
    const double c = ep2 * cosp * cosp;
    const double big_a = dlam * cosp;

    const double e4 = e2 * e2, e6 = e4 * e2;
    const double m =
        a * ((1.0 - e2 / 4.0 - 3.0 * e4 / 64.0 - 5.0 * e6 / 256.0) * phi -
             (3.0 * e2 / 8.0 + 3.0 * e4 / 32.0 + 45.0 * e6 / 1024.0) * std::sin(2.0 * phi) +
             (15.0 * e4 / 256.0 + 45.0 * e6 / 1024.0) * std::sin(4.0 * phi) -
             (35.0 * e6 / 3072.0) * std::sin(6.0 * phi));

    const double a2 = big_a * big_a, a3 = a2 * big_a, a4 = a3 * big_a, a5 = a4 * big_a,
                 a6 = a5 * big_a;
    const double x =
        k0 * nu *
        (big_a + (1.0 - t + c) * a3 / 6.0 +
         (5.0 - 18.0 * t + t * t + 72.0 * c - 58.0 * ep2) * a5 / 120.0);
    const double y =
        k0 * (m + nu * tanp *
                      (a2 / 2.0 + (5.0 - t + 9.0 * c + 4.0 * c * c) * a4 / 24.0 +
                       (61.0 - 58.0 * t + t * t + 600.0 * c - 330.0 * ep2) * a6 / 720.0));

    return {x + 500000.0, y};
}

inline void snyder_inverse(double easting, double northing_no_fn, double lon0_deg,
                           double& lat_deg, double& lon_deg) {
    constexpr double a = 6378137.0;
    constexpr double f = 1.0 / 298.257223563;
    constexpr double k0 = 0.9996;
    const double d2r = std::acos(-1.0) / 180.0;

    const double e2 = f * (2.0 - f);
    const double ep2 = e2 / (1.0 - e2);
    const double e4 = e2 * e2, e6 = e4 * e2;

    const double m = northing_no_fn / k0;
    const double mu = m / (a * (1.0 - e2 / 4.0 - 3.0 * e4 / 64.0 - 5.0 * e6 / 256.0));
    const double e1 = (1.0 - std::sqrt(1.0 - e2)) / (1.0 + std::sqrt(1.0 - e2));
    const double e1_2 = e1 * e1, e1_3 = e1_2 * e1, e1_4 = e1_3 * e1;

    const double phi1 = mu + (3.0 * e1 / 2.0 - 27.0 * e1_3 / 32.0) * std::sin(2.0 * mu) +
                        (21.0 * e1_2 / 16.0 - 55.0 * e1_4 / 32.0) * std::sin(4.0 * mu) +
                        (151.0 * e1_3 / 96.0) * std::sin(6.0 * mu) +
                        (1097.0 * e1_4 / 512.0) * std::sin(8.0 * mu);

    const double sinp1 = std::sin(phi1), cosp1 = std::cos(phi1), tanp1 = std::tan(phi1);
    const double c1 = ep2 * cosp1 * cosp1;
    const double t1 = tanp1 * tanp1;
    const double n1 = a / std::sqrt(1.0 - e2 * sinp1 * sinp1);
    const double r1 = a * (1.0 - e2) / std::pow(1.0 - e2 * sinp1 * sinp1, 1.5);
    const double d = (easting - 500000.0) / (n1 * k0);
    const double d2 = d * d, d3 = d2 * d, d4 = d3 * d, d5 = d4 * d, d6 = d5 * d;

    const double phi =
        phi1 - (n1 * tanp1 / r1) *
                   (d2 / 2.0 -
                    (5.0 + 3.0 * t1 + 10.0 * c1 - 4.0 * c1 * c1 - 9.0 * ep2) * d4 / 24.0 +
                    (61.0 + 90.0 * t1 + 298.0 * c1 + 45.0 * t1 * t1 - 252.0 * ep2 -
                     3.0 * c1 * c1) *
                        d6 / 720.0);
    const double lam = (d - (1.0 + 2.0 * t1 + c1) * d3 / 6.0 +
                        (5.0 - 2.0 * c1 + 28.0 * t1 - 3.0 * c1 * c1 + 8.0 * ep2 +
                         24.0 * t1 * t1) *
                            d5 / 120.0) /
                       cosp1;

    lat_deg = phi / d2r;
    lon_deg = lon0_deg + lam / d2r;
}

}  // namespace oracle
