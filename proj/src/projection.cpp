#include "ridehail/projection.hpp"

#include <cmath>
#include <string>

namespace ridehail::projection {

namespace {

constexpr double kA = 6378137.0;                 // WGS84 semi-major axis
constexpr double kF = 1.0 / 298.257223563;       // WGS84 flattening
constexpr double kK0 = 0.9996;                   // UTM scale on the central meridian
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;
constexpr double kDegToRad = 3.141592653589793238462643383279502884 / 180.0;

// Third flattening and derived constants for the Krueger series.
constexpr double kN = kF / (2.0 - kF);
const double kE = std::sqrt(kF * (2.0 - kF));  // first eccentricity

// Rectifying radius A* = a/(1+n) (1 + n^2/4 + n^4/64 + n^6/256).
const double kRectA = kA / (1.0 + kN) *
                      (1.0 + kN * kN / 4.0 + std::pow(kN, 4) / 64.0 + std::pow(kN, 6) / 256.0);

struct SeriesCoeffs {
    double alpha[6];
    double beta[6];
};

// Krueger series coefficients in the third flattening, through n^6. n ~ 1.7e-3
// for WGS84, so the truncation error is far below a micrometer.
SeriesCoeffs make_coeffs() {
    const double n1 = kN;
    const double n2 = n1 * n1;
    const double n3 = n2 * n1;
    const double n4 = n3 * n1;
    const double n5 = n4 * n1;
    const double n6 = n5 * n1;
    SeriesCoeffs c{};
    c.alpha[0] = n1 / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 +
                 7891 * n6 / 37800;
    c.alpha[1] = 13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 -
                 1983433 * n6 / 1935360;
    c.alpha[2] = 61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440;
    c.alpha[3] = 49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600;
    c.alpha[4] = 34729 * n5 / 80640 - 3418889 * n6 / 1995840;
    c.alpha[5] = 212378941 * n6 / 319334400;

    c.beta[0] = n1 / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 +
                96199 * n6 / 604800;
    c.beta[1] = n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 - 1118711 * n6 / 3870720;
    c.beta[2] = 17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720;
    c.beta[3] = 4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600;
    c.beta[4] = 4583 * n5 / 161280 - 108847 * n6 / 3991680;
    c.beta[5] = 20648693 * n6 / 638668800;
    return c;
}

const SeriesCoeffs kCoeffs = make_coeffs();

// tan(conformal latitude) from tan(geodetic latitude).
double taupf(double tau) {
    const double tau1 = std::hypot(1.0, tau);
    const double sig = std::sinh(kE * std::atanh(kE * tau / tau1));
    return std::hypot(1.0, sig) * tau - sig * tau1;
}

// Inverse of taupf by Newton iteration; converges in a handful of steps.
double tauf(double taup) {
    const double e2m = 1.0 - kE * kE;
    double tau = taup / e2m;
    const double stol = 1e-13 * std::max(1.0, std::fabs(taup));
    for (int i = 0; i < 9; ++i) {
        const double taupa = taupf(tau);
        const double dtau = (taup - taupa) * (1.0 + e2m * tau * tau) /
                            (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
        tau += dtau;
        if (std::fabs(dtau) < stol) break;
    }
    return tau;
}

double central_meridian_deg(int zone) { return zone * 6.0 - 183.0; }

}  // namespace

int utm_zone_of(double longitude_deg) {
    double lon = longitude_deg;
    while (lon < -180.0) lon += 360.0;
    while (lon >= 180.0) lon -= 360.0;
    int zone = static_cast<int>(std::floor((lon + 180.0) / 6.0)) + 1;
    if (zone < 1) zone = 1;
    if (zone > 60) zone = 60;
    return zone;
}

PlanarPoint project(const GeoPoint& g, int forced_zone) {
    if (std::fabs(g.latitude_deg) > 84.0) {
        throw OutOfBand("project: latitude " + std::to_string(g.latitude_deg) +
                        " outside the +-84 deg transverse Mercator band");
    }
    const int zone = forced_zone != 0 ? forced_zone : utm_zone_of(g.longitude_deg);
    const double phi = g.latitude_deg * kDegToRad;
    double dlon = g.longitude_deg - central_meridian_deg(zone);
    while (dlon < -180.0) dlon += 360.0;
    while (dlon > 180.0) dlon -= 360.0;
    const double lam = dlon * kDegToRad;

    const double tau = std::tan(phi);
    const double taup = taupf(tau);
    const double coslam = std::cos(lam);
    const double xi_p = std::atan2(taup, coslam);
    const double eta_p = std::asinh(std::sin(lam) / std::hypot(taup, coslam));

    double xi = xi_p;
    double eta = eta_p;
    for (int j = 0; j < 6; ++j) {
        const double arg = 2.0 * (j + 1);
        xi += kCoeffs.alpha[j] * std::sin(arg * xi_p) * std::cosh(arg * eta_p);
        eta += kCoeffs.alpha[j] * std::cos(arg * xi_p) * std::sinh(arg * eta_p);
    }

    const double easting = kFalseEasting + kK0 * kRectA * eta;
    double northing = kK0 * kRectA * xi;
    const bool south = g.latitude_deg < 0.0;
    if (south) northing += kFalseNorthingSouth;

    PlanarPoint p;
    p.x = std::llround(easting);
    p.y = std::llround(northing);
    p.zone = south ? -zone : zone;
    return p;
}

GeoPoint unproject(const PlanarPoint& p) {
    if (p.zone == 0) {
        throw OutOfRange("unproject: point has no UTM zone (synthetic coordinates)");
    }
    const int zone = p.zone < 0 ? -p.zone : p.zone;
    if (zone > 60) throw OutOfRange("unproject: zone " + std::to_string(zone) + " out of range");
    const bool south = p.zone < 0;
    const double easting = static_cast<double>(p.x);
    double northing = static_cast<double>(p.y);
    if (easting < 100000.0 || easting > 900000.0) {
        throw OutOfRange("unproject: easting " + std::to_string(p.x) +
                         " outside the zone's valid range");
    }
    if (northing < 0.0 || northing > 10000000.0) {
        throw OutOfRange("unproject: northing " + std::to_string(p.y) + " out of range");
    }
    if (south) northing -= kFalseNorthingSouth;

    const double xi = northing / (kK0 * kRectA);
    const double eta = (easting - kFalseEasting) / (kK0 * kRectA);

    double xi_p = xi;
    double eta_p = eta;
    for (int j = 0; j < 6; ++j) {
        const double arg = 2.0 * (j + 1);
        xi_p -= kCoeffs.beta[j] * std::sin(arg * xi) * std::cosh(arg * eta);
        eta_p -= kCoeffs.beta[j] * std::cos(arg * xi) * std::sinh(arg * eta);
    }

    const double sinh_eta = std::sinh(eta_p);
    const double cos_xi = std::cos(xi_p);
    const double taup = std::sin(xi_p) / std::hypot(sinh_eta, cos_xi);
    const double tau = tauf(taup);

    GeoPoint g;
    g.latitude_deg = std::atan(tau) / kDegToRad;
    g.longitude_deg = central_meridian_deg(zone) + std::atan2(sinh_eta, cos_xi) / kDegToRad;
    if (g.longitude_deg >= 180.0) g.longitude_deg -= 360.0;
    if (g.longitude_deg < -180.0) g.longitude_deg += 360.0;
    return g;
}

double geodesic_distance_m(const GeoPoint& a, const GeoPoint& b) {
    // Vincenty inverse formula; falls back to the last iterate for
    // near-antipodal pairs (never relevant at zone scale).
    const double la1 = a.latitude_deg * kDegToRad;
    const double la2 = b.latitude_deg * kDegToRad;
    const double dl = (b.longitude_deg - a.longitude_deg) * kDegToRad;
    const double bax = kA * (1.0 - kF);

    const double u1 = std::atan((1.0 - kF) * std::tan(la1));
    const double u2 = std::atan((1.0 - kF) * std::tan(la2));
    const double su1 = std::sin(u1), cu1 = std::cos(u1);
    const double su2 = std::sin(u2), cu2 = std::cos(u2);

    double lambda = dl;
    double sin_sigma = 0, cos_sigma = 0, sigma = 0, cos_sq_alpha = 1, cos_2sm = 0;
    for (int i = 0; i < 100; ++i) {
        const double sl = std::sin(lambda), cl = std::cos(lambda);
        sin_sigma = std::hypot(cu2 * sl, cu1 * su2 - su1 * cu2 * cl);
        if (sin_sigma == 0.0) return 0.0;
        cos_sigma = su1 * su2 + cu1 * cu2 * cl;
        sigma = std::atan2(sin_sigma, cos_sigma);
        const double sin_alpha = cu1 * cu2 * sl / sin_sigma;
        cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
        cos_2sm = cos_sq_alpha != 0.0 ? cos_sigma - 2.0 * su1 * su2 / cos_sq_alpha : 0.0;
        const double c = kF / 16.0 * cos_sq_alpha * (4.0 + kF * (4.0 - 3.0 * cos_sq_alpha));
        const double prev = lambda;
        lambda = dl + (1.0 - c) * kF * sin_alpha *
                          (sigma + c * sin_sigma *
                                       (cos_2sm + c * cos_sigma *
                                                      (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        if (std::fabs(lambda - prev) < 1e-12) break;
    }
    const double u_sq = cos_sq_alpha * (kA * kA - bax * bax) / (bax * bax);
    const double big_a =
        1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
    const double big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
    const double delta =
        big_b * sin_sigma *
        (cos_2sm + big_b / 4.0 *
                       (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm) -
                        big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                            (-3.0 + 4.0 * cos_2sm * cos_2sm)));
    return bax * big_a * (sigma - delta);
}

}  // namespace ridehail::projection
