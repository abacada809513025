#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "lwcov/error.hpp"
#include "lwcov/geo.hpp"
#include "support/oracles.hpp"

using namespace lwcov;

TEST_CASE("GeoPoint validates and normalizes") {
    CHECK_THROWS_AS(GeoPoint(91.0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(GeoPoint(-90.5, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(GeoPoint(std::nan(""), 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(GeoPoint(0.0, std::numeric_limits<double>::infinity(), 0.0), ValidationError);
    CHECK_THROWS_AS(GeoPoint(0.0, 0.0, std::nan("")), ValidationError);

    CHECK(GeoPoint(0.0, 180.0, 0.0).lon_deg() == 180.0);
    CHECK(GeoPoint(0.0, -180.0, 0.0).lon_deg() == 180.0);
    CHECK(GeoPoint(0.0, 190.0, 0.0).lon_deg() == doctest::Approx(-170.0));
    CHECK(GeoPoint(0.0, -540.0, 0.0).lon_deg() == 180.0);
    CHECK(GeoPoint(0.0, 720.0, -5.0).lon_deg() == 0.0);
    CHECK(GeoPoint(0.0, 0.0, -5.0).alt_m() == -5.0);
}

TEST_CASE("EarthModel rejects non-positive radius") {
    CHECK(EarthModel{}.radius_m() == 6'371'000.0);
    CHECK_THROWS_AS(EarthModel(0.0), ValidationError);
    CHECK_THROWS_AS(EarthModel(-1.0), ValidationError);
}

TEST_CASE("horizontal_distance examples") {
    const GeoPoint p(35.0, -78.0, 0.0);
    CHECK(horizontal_distance(p, p) == 0.0);

    CHECK(std::abs(horizontal_distance(GeoPoint(0, 0, 0), GeoPoint(0, 1, 0)) - 111194.92664455874) < 0.01);

    // Frozen from the 50-digit oracle: 6517.3181569216498... m.
    const double d = horizontal_distance(GeoPoint(35.7275, -78.6960, 0), GeoPoint(35.7850, -78.6820, 0));
    CHECK(std::abs(d - 6517.3181569216498) / 6517.3181569216498 < 1e-6);
    CHECK(std::abs(d - oracle::haversine_hp(35.7275, -78.6960, 35.7850, -78.6820)) / d < 1e-6);

    // Altitude is ignored.
    CHECK(horizontal_distance(GeoPoint(1, 2, 0), GeoPoint(1.5, 2.5, 0)) ==
          horizontal_distance(GeoPoint(1, 2, 300), GeoPoint(1.5, 2.5, -20)));
}

TEST_CASE("horizontal_distance across the antimeridian and at the poles") {
    const double across = horizontal_distance(GeoPoint(0, 179.5, 0), GeoPoint(0, -179.5, 0));
    CHECK(across == doctest::Approx(111194.92664455874).epsilon(1e-9));
    const double antipodal = horizontal_distance(GeoPoint(0, 0, 0), GeoPoint(0, 180, 0));
    CHECK(antipodal == doctest::Approx(6371000.0 * 3.14159265358979323846).epsilon(1e-12));
    CHECK(horizontal_distance(GeoPoint(90, 0, 0), GeoPoint(90, 123, 0)) < 1e-6);
}

TEST_CASE("link_distance_3d examples") {
    // 3 m of arc along the equator plus 4 m of altitude.
    const double three_m_deg = 3.0 / 6371000.0 * 180.0 / 3.14159265358979323846;
    const GeoPoint a(0, 0, 0);
    const GeoPoint b(0, three_m_deg, 4.0);
    CHECK(horizontal_distance(a, b) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(link_distance_3d(a, b) == doctest::Approx(5.0).epsilon(1e-9));

    CHECK(link_distance_3d(GeoPoint(35.7, -78.7, 0), GeoPoint(35.7, -78.7, 150)) == 150.0);
}

TEST_CASE("geo properties over random pairs") {
    std::mt19937_64 rng(20240824);
    std::uniform_real_distribution<double> lat(-89.0, 89.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> alt(-50.0, 500.0);
    std::uniform_real_distribution<double> small(-4e-4, 4e-4);  // well under 100 m

    for (int i = 0; i < 2000; ++i) {
        const GeoPoint a(lat(rng), lon(rng), alt(rng));
        const GeoPoint b(lat(rng), lon(rng), alt(rng));
        const double h = horizontal_distance(a, b);
        const double l = link_distance_3d(a, b);
        CHECK(h >= 0.0);
        CHECK(h == horizontal_distance(b, a));  // bitwise symmetric
        CHECK(l == link_distance_3d(b, a));
        CHECK(l >= h);
        CHECK(l >= std::abs(b.alt_m() - a.alt_m()));
        CHECK(l == doctest::Approx(std::sqrt(h * h + (b.alt_m() - a.alt_m()) * (b.alt_m() - a.alt_m()))).epsilon(1e-15));
        CHECK(horizontal_distance(a, a) == 0.0);
        CHECK(link_distance_3d(a, a) == 0.0);

        const GeoPoint flat(b.lat_deg(), b.lon_deg(), a.alt_m());
        CHECK(link_distance_3d(a, flat) == horizontal_distance(a, flat));

        // Small-angle consistency with the equirectangular approximation.
        const double la = lat(rng), lo = lon(rng) * 0.99;
        const GeoPoint c(la, lo, 0), e(la + small(rng), lo + small(rng), 0);
        const double hv = horizontal_distance(c, e);
        if (hv > 1e-3) {
            const double eq = oracle::equirectangular(c.lat_deg(), c.lon_deg(), e.lat_deg(), e.lon_deg());
            CHECK(std::abs(hv - eq) / eq < 1e-3);
        }
    }
}
