#include "lwcov/geo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lwcov/error.hpp"

namespace lwcov {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

double normalize_longitude(double lon_deg) {
    if (!std::isfinite(lon_deg)) {
        throw ValidationError("longitude is not finite");
    }
    if (lon_deg > -180.0 && lon_deg <= 180.0) {
        return lon_deg;
    }
    double wrapped = std::fmod(lon_deg + 180.0, 360.0);
    if (wrapped <= 0.0) {
        wrapped += 360.0;
    }
    return wrapped - 180.0;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg, double alt_m) {
    if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg) || !std::isfinite(alt_m)) {
        throw ValidationError("GeoPoint coordinates must be finite");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        throw ValidationError("latitude " + std::to_string(lat_deg) + " outside [-90, 90]");
    }
    lat_deg_ = lat_deg;
    lon_deg_ = normalize_longitude(lon_deg);
    alt_m_ = alt_m;
}

EarthModel::EarthModel(double radius_m) : radius_m_(radius_m) {
    if (!std::isfinite(radius_m) || radius_m <= 0.0) {
        throw ValidationError("earth radius must be finite and positive");
    }
}

double horizontal_distance(const GeoPoint& p1, const GeoPoint& p2, const EarthModel& earth) {
    const double phi1 = p1.lat_deg() * kDegToRad;
    const double phi2 = p2.lat_deg() * kDegToRad;
    // Absolute differences keep the evaluation order-independent, so the
    // result is bitwise symmetric in (p1, p2).
    const double dphi = std::abs(phi2 - phi1);
    const double dlambda = std::abs(p2.lon_deg() * kDegToRad - p1.lon_deg() * kDegToRad);

    const double s_phi = std::sin(dphi / 2.0);
    const double s_lambda = std::sin(dlambda / 2.0);
    double a = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
    a = std::min(1.0, std::max(0.0, a));

    return 2.0 * earth.radius_m() * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

double link_distance_3d(const GeoPoint& p1, const GeoPoint& p2, const EarthModel& earth) {
    const double horiz = horizontal_distance(p1, p2, earth);
    const double dh = std::abs(p2.alt_m() - p1.alt_m());
    return std::sqrt(horiz * horiz + dh * dh);
}

}  // namespace lwcov
