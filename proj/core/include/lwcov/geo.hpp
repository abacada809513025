#pragma once

namespace lwcov {

/// WGS84-style coordinate triple on a spherical earth.
///
/// Latitude is validated into [-90, 90]; longitude is normalized into
/// (-180, 180]. Altitudes of transmitters and gateways are assumed to share
/// one vertical datum, so they are subtracted directly.
class GeoPoint {
public:
    GeoPoint() = default;

    /// Throws ValidationError on non-finite input or |lat| > 90.
    GeoPoint(double lat_deg, double lon_deg, double alt_m);

    double lat_deg() const noexcept { return lat_deg_; }
    double lon_deg() const noexcept { return lon_deg_; }
    double alt_m() const noexcept { return alt_m_; }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lat_deg_ = 0.0;
    double lon_deg_ = 0.0;
    double alt_m_ = 0.0;
};

class EarthModel {
public:
    static constexpr double kMeanRadiusM = 6'371'000.0;

    constexpr EarthModel() = default;
    /// Throws ValidationError unless radius_m is finite and positive.
    explicit EarthModel(double radius_m);

    constexpr double radius_m() const noexcept { return radius_m_; }

private:
    double radius_m_ = kMeanRadiusM;
};

/// Wraps any finite longitude into (-180, 180].
double normalize_longitude(double lon_deg);

/// Great-circle surface distance (haversine, atan2 form). Altitudes are ignored.
double horizontal_distance(const GeoPoint& p1, const GeoPoint& p2, const EarthModel& earth = {});

/// Straight-line link length combining the surface arc with the altitude difference.
double link_distance_3d(const GeoPoint& p1, const GeoPoint& p2, const EarthModel& earth = {});

}  // namespace lwcov
