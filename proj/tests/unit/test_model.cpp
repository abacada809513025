#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lwcov/error.hpp"
#include "lwcov/model.hpp"
#include "support/oracles.hpp"

using namespace lwcov;

namespace {

LinkSample at(double d, double pl, double snr = 0.0, int sf = 7) {
    LinkSample s;
    s.distance_m = d;
    s.path_loss_db = pl;
    s.rssi_dbm = 20.0 - pl;
    s.snr_db = snr;
    s.sf = sf;
    return s;
}

// Samples with Gaussian residuals around (a, n), distances log-uniform in [1, 10 km].
std::vector<LinkSample> noisy(double a, double n, double sigma, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logd(0.0, 4.0);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<LinkSample> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double d = std::pow(10.0, logd(rng));
        out.push_back(at(d, a + 10.0 * n * std::log10(d) + noise(rng)));
    }
    return out;
}

}  // namespace

TEST_CASE("predict_path_loss") {
    const PathLossModel m{40.0, 2.0, 0.0};
    CHECK(predict_path_loss(m, 1.0) == 40.0);
    CHECK(predict_path_loss(m, 100.0) == 80.0);
    CHECK(predict_path_loss(PathLossModel{31.5, 2.9, 0.0}, 1000.0) == doctest::Approx(118.5).epsilon(1e-12));
    CHECK_THROWS_AS(predict_path_loss(m, 0.5), DomainError);
    CHECK_THROWS_AS(predict_path_loss(m, std::nan("")), DomainError);

    for (double d = 1.0; d < 1e5; d *= 1.7) {
        CHECK(predict_path_loss(m, d * 1.01) > predict_path_loss(m, d));
        CHECK(predict_path_loss(PathLossModel{55.0, 0.0, 1.0}, d) == 55.0);
    }
}

TEST_CASE("reference form conversion") {
    const PathLossModel m{40.0, 3.0, 5.0};
    CHECK(m.reference_d0_m() == 1.0);
    const auto ref = to_reference_form(m, 100.0);
    CHECK(ref.reference_loss_db == doctest::Approx(100.0));
    CHECK(ref.exponent_n == 3.0);
    // PL(d0) + 10 n log10(d / d0) reproduces the intercept form.
    for (double d : {100.0, 250.0, 5000.0}) {
        CHECK(ref.reference_loss_db + 10.0 * ref.exponent_n * std::log10(d / ref.reference_d0_m) ==
              doctest::Approx(predict_path_loss(m, d)));
    }
}

TEST_CASE("fit_line edge cases") {
    const std::vector<double> x{1.0, 1.0, 1.0};
    const std::vector<double> y{2.0, 3.0, 4.0};
    CHECK_THROWS_AS(fit_line(x, y), DegenerateFitError);
    CHECK_THROWS_AS(fit_line(std::vector<double>{}, std::vector<double>{}), DegenerateFitError);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}), ValidationError);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, INFINITY}), ValidationError);
}

TEST_CASE("fit_path_loss examples") {
    SUBCASE("exact line through two points") {
        const std::vector s{at(1.0, 40.0), at(10.0, 60.0)};
        const auto fit = fit_path_loss(s);
        CHECK(fit.model.intercept_a_db == doctest::Approx(40.0).epsilon(1e-12));
        CHECK(fit.model.exponent_n == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(fit.model.sigma_db == 0.0);
        CHECK(fit.diagnostics.sample_count == 2);
    }

    SUBCASE("noiseless recovery") {
        const auto s = oracle::noiseless_samples(40.0, 2.9, 100, 1.0, 10'000.0);
        const auto fit = fit_path_loss(s);
        CHECK(std::abs(fit.model.intercept_a_db - 40.0) <= 1e-9);
        CHECK(std::abs(fit.model.exponent_n - 2.9) <= 1e-9);
        CHECK(fit.model.sigma_db <= 1e-9);
        CHECK(fit.diagnostics.mae_db <= 1e-9);
    }

    SUBCASE("sigma 8 dB, 20,000 samples") {
        const auto s = noisy(40.0, 2.9, 8.0, 20'000, 7);
        const auto fit = fit_path_loss(s);
        CHECK(std::abs(fit.model.exponent_n - 2.9) <= 0.05);
        CHECK(std::abs(fit.model.sigma_db - 8.0) <= 0.3);
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(fit_path_loss(std::vector{at(5.0, 60.0), at(5.0, 70.0)}), DegenerateFitError);
        CHECK_THROWS_AS(fit_path_loss(std::vector{at(5.0, 60.0)}), DegenerateFitError);
        CHECK_THROWS_AS(fit_path_loss(std::vector{at(5.0, 60.0), at(6.0, NAN)}), ValidationError);
        CHECK_THROWS_AS(fit_path_loss(std::vector{at(0.5, 60.0), at(6.0, 70.0)}), ValidationError);
    }
}

TEST_CASE("fit matches the normal-equation oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = noisy(30.0 + seed, 2.0 + 0.1 * seed, 6.0, 200 + 10 * seed, seed);
        std::vector<double> x, y;
        for (const auto& e : s) {
            x.push_back(std::log10(e.distance_m));
            y.push_back(e.path_loss_db);
        }
        const auto ref = oracle::ols_normal_equations(x, y);
        const auto fit = fit_path_loss(s);
        CHECK(fit.model.intercept_a_db == doctest::Approx(static_cast<double>(ref.intercept)).epsilon(1e-10));
        CHECK(fit.model.exponent_n == doctest::Approx(static_cast<double>(ref.slope / 10)).epsilon(1e-10));
    }
}

TEST_CASE("fit invariants") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> a_dist(10.0, 80.0), n_dist(0.5, 5.0), c_dist(-30.0, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = a_dist(rng), n = n_dist(rng);
        const auto count = static_cast<std::size_t>(2 + trial % 50);

        // Recovery on noiseless data.
        const auto clean = oracle::noiseless_samples(a, n, count, 1.0 + trial, 20'000.0);
        const auto exact = fit_path_loss(clean);
        CHECK(std::abs(exact.model.intercept_a_db - a) <= 1e-9);
        CHECK(std::abs(exact.model.exponent_n - n) <= 1e-9);
        CHECK(exact.model.sigma_db <= 1e-9);

        // Normal equations: residuals sum to zero and are orthogonal to log10(d).
        const auto s = noisy(a, n, 8.0, count + 3, static_cast<std::uint64_t>(trial));
        const auto fit = fit_path_loss(s);
        double sum = 0.0, dot = 0.0;
        for (const auto& e : s) {
            const double r = e.path_loss_db - predict_path_loss(fit.model, e.distance_m);
            sum += r;
            dot += r * std::log10(e.distance_m);
        }
        const double tol = 1e-9 * static_cast<double>(s.size());
        CHECK(std::abs(sum) <= tol);
        CHECK(std::abs(dot) <= tol);

        // Affine equivariance.
        const double c = c_dist(rng);
        auto shifted = s;
        for (auto& e : shifted) e.path_loss_db += c;
        const auto fit2 = fit_path_loss(shifted);
        CHECK(std::abs(fit2.model.intercept_a_db - (fit.model.intercept_a_db + c)) <= 1e-9);
        CHECK(std::abs(fit2.model.exponent_n - fit.model.exponent_n) <= 1e-9);
        CHECK(std::abs(fit2.model.sigma_db - fit.model.sigma_db) <= 1e-9);

        CHECK(fit.diagnostics.rmse_db >= fit.diagnostics.mae_db);
        CHECK(fit.diagnostics.mae_db >= 0.0);
    }
}

TEST_CASE("mae and rmse") {
    const PathLossModel m{40.0, 2.0, 0.0};
    const std::vector s{at(10.0, 61.0), at(100.0, 79.0)};
    CHECK(mae(s, m) == doctest::Approx(1.0));
    CHECK(rmse(s, m) == doctest::Approx(1.0));
    CHECK(diagnose(s, m).residual_mean_db == doctest::Approx(0.0));

    const std::vector zero{at(1.0, 40.0), at(10.0, 60.0), at(100.0, 80.0)};
    CHECK(mae(zero, m) == 0.0);
    CHECK(rmse(zero, m) == 0.0);

    CHECK_THROWS_AS(mae(std::vector<LinkSample>{}, m), ValidationError);
    CHECK_THROWS_AS(rmse(std::vector<LinkSample>{}, m), ValidationError);

    // Half-normal mean: MAE -> sigma sqrt(2/pi) = 6.3831 for sigma = 8.
    const auto big = noisy(40.0, 2.0, 8.0, 200'000, 11);
    const PathLossModel truth{40.0, 2.0, 8.0};
    CHECK(mae(big, truth) == doctest::Approx(8.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(0.01));
    CHECK(rmse(big, truth) == doctest::Approx(8.0).epsilon(0.01));
}

TEST_CASE("SNR thresholds follow the SX1276 table") {
    CHECK(snr_threshold(7) == -7.5);
    CHECK(snr_threshold(10) == -15.0);
    CHECK_THROWS_AS(snr_threshold(5), ValidationError);
    CHECK_THROWS_AS(snr_threshold(13), ValidationError);

    CHECK(is_demodulable(10, -14.0));
    CHECK_FALSE(is_demodulable(7, -8.0));
    CHECK(is_demodulable(8, -10.0));
    CHECK_FALSE(is_demodulable(8, std::nextafter(-10.0, -11.0)));

    for (std::size_t i = 1; i < kSfTable.size(); ++i) {
        CHECK(kSfTable[i].snr_threshold_db < kSfTable[i - 1].snr_threshold_db);
        CHECK(kSfTable[i].chips_per_symbol == 2 * kSfTable[i - 1].chips_per_symbol);
        CHECK(kSfTable[i].chips_per_symbol == (1u << kSfTable[i].sf));
    }
}

TEST_CASE("data rate mapping") {
    CHECK(dr_to_sf(DataRate::DR0) == SfBandwidth{10, 125'000.0});
    CHECK(dr_to_sf(DataRate::DR1) == SfBandwidth{9, 125'000.0});
    CHECK(dr_to_sf(DataRate::DR2) == SfBandwidth{8, 125'000.0});
    CHECK(dr_to_sf(DataRate::DR3) == SfBandwidth{7, 125'000.0});
    for (DataRate dr : kAllDataRates) {
        CHECK(sf_to_dr(dr_to_sf(dr).sf) == dr);
        CHECK(sf_row(dr_to_sf(dr).sf).sf == dr_to_sf(dr).sf);
        CHECK(parse_data_rate(to_string(dr)) == dr);
    }
    CHECK_THROWS_AS(parse_data_rate("DR7"), ValidationError);
    CHECK_THROWS_AS(sf_to_dr(12), ValidationError);
}

TEST_CASE("standard normal CDF") {
    for (const auto& ref : oracle::kPhiReference) {
        CHECK(std::abs(standard_normal_cdf(ref.x) - ref.phi) <= 1e-7);
    }
    CHECK(standard_normal_cdf(-8.5) == 0.0);
    CHECK(standard_normal_cdf(8.5) == 1.0);
    double prev = 0.0;
    for (double x = -9.0; x <= 9.0; x += 0.01) {
        const double p = standard_normal_cdf(x);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("reception_probability") {
    const double gamma = snr_threshold(10);
    SnrTrend trend{gamma, 0.0, 4.0};
    CHECK(std::abs(reception_probability(trend, 10, 10.0) - 0.5) <= 1e-9);

    trend.intercept_db = gamma + 4.0;
    CHECK(reception_probability(trend, 10, 10.0) == doctest::Approx(0.841345).epsilon(1e-6));

    SnrTrend step{gamma + 0.1, 0.0, 0.0};
    CHECK(reception_probability(step, 10, 50.0) == 1.0);
    step.intercept_db = gamma;
    CHECK(reception_probability(step, 10, 50.0) == 1.0);
    step.intercept_db = gamma - 0.1;
    CHECK(reception_probability(step, 10, 50.0) == 0.0);

    CHECK_THROWS_AS(reception_probability(trend, 5, 10.0), ValidationError);
    CHECK_THROWS_AS(reception_probability(SnrTrend{0, 0, -1}, 7, 10.0), ValidationError);
    CHECK_THROWS_AS(reception_probability(trend, 7, 0.5), DomainError);
}

TEST_CASE("reception_probability properties") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> icpt(-20.0, 60.0), slope(-40.0, -0.01), sig(0.5, 15.0), logd(0.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const SnrTrend t{icpt(rng), slope(rng), sig(rng)};
        const double d1 = std::pow(10.0, logd(rng));
        const double d2 = d1 * (1.0 + logd(rng));
        for (int sf = kMinSf; sf <= kMaxSf; ++sf) {
            const double p = reception_probability(t, sf, d1);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            CHECK(reception_probability(t, sf, d2) <= p);
            if (sf > kMinSf) {
                CHECK(p >= reception_probability(t, sf - 1, d1));
            }
        }
    }
}

TEST_CASE("reception_curve") {
    const SnrTrend t{30.0, -12.0, 6.0};
    const auto two = reception_curve(t, 9, 10.0, 8000.0, 2);
    REQUIRE(two.points.size() == 2);
    CHECK(two.points[0].distance_m == 10.0);
    CHECK(two.points[1].distance_m == 8000.0);

    const auto c = reception_curve(t, 9, 1.0, 20'000.0, 64);
    REQUIRE(c.points.size() == 64);
    CHECK(c.points.back().distance_m == 20'000.0);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        CHECK(c.points[i].p_recv == reception_probability(t, 9, c.points[i].distance_m));
        if (i > 0) {
            CHECK(c.points[i].distance_m > c.points[i - 1].distance_m);
            CHECK(c.points[i].p_recv <= c.points[i - 1].p_recv);
            CHECK(std::log10(c.points[i].distance_m) - std::log10(c.points[i - 1].distance_m) ==
                  doctest::Approx(std::log10(20'000.0) / 63.0));
        }
    }
    CHECK_THROWS_AS(reception_curve(t, 9, 10.0, 100.0, 1), ValidationError);
    CHECK_THROWS_AS(reception_curve(t, 9, 100.0, 10.0, 5), ValidationError);
    CHECK_THROWS_AS(reception_curve(t, 9, 0.1, 10.0, 5), DomainError);
    CHECK_THROWS_AS(reception_curve(t, 4, 1.0, 10.0, 5), ValidationError);
}

TEST_CASE("SNR trend fits") {
    std::vector<LinkSample> s;
    for (double d : {1.0, 10.0, 100.0, 1000.0}) {
        s.push_back(at(d, 0.0, 20.0 - 15.0 * std::log10(d), 7));
        s.push_back(at(d * 2, 0.0, 10.0 - 10.0 * std::log10(d * 2), 10));
    }
    const auto pooled = fit_snr_trend(s);
    CHECK(pooled.slope_db_per_decade < 0.0);
    CHECK(pooled.sigma_db > 0.0);

    const auto per_sf = fit_snr_trends_per_sf(s);
    REQUIRE(per_sf.size() == 2);
    CHECK(per_sf.at(7).intercept_db == doctest::Approx(20.0));
    CHECK(per_sf.at(7).slope_db_per_decade == doctest::Approx(-15.0));
    CHECK(per_sf.at(7).sigma_db == doctest::Approx(0.0).epsilon(1e-9).scale(1));
    CHECK(per_sf.at(10).slope_db_per_decade == doctest::Approx(-10.0));

    s.push_back(at(5.0, 0.0, 3.0, 12));  // a lone SF12 sample cannot be fitted
    CHECK(fit_snr_trends_per_sf(s).size() == 2);
    CHECK(SnrTrend{1.0, -2.0, 0.0}.mean_at(100.0) == doctest::Approx(-3.0));
    CHECK_THROWS_AS(SnrTrend{}.mean_at(0.0), DomainError);
}

TEST_CASE("model JSON") {
    PathLossFit fit;
    fit.model = {40.125, 2.875, 7.5};
    fit.diagnostics = {6.0, 7.5, 0.0, 123};
    const auto text = to_json(fit);
    CHECK(text.find("\"intercept_a_db\": 40.125") != std::string::npos);
    CHECK(text.find("\"reference_d0_m\": 1.0") != std::string::npos);
    CHECK(text.find("intercept_a_db") < text.find("rmse_db"));
    const auto back = path_loss_fit_from_json(text);
    CHECK(back.model.intercept_a_db == 40.125);
    CHECK(back.model.exponent_n == 2.875);
    CHECK(back.model.sigma_db == 7.5);
    CHECK(back.diagnostics.sample_count == 123);
    CHECK(to_json(back) == text);

    CHECK_THROWS_AS(path_loss_fit_from_json("{"), ValidationError);
    CHECK_THROWS_AS(path_loss_fit_from_json("{\"exponent_n\": 2}"), ValidationError);
    CHECK_THROWS_AS(path_loss_fit_from_json(R"({"intercept_a_db":1,"exponent_n":2,"sigma_db":1,"reference_d0_m":10})"),
                    ValidationError);
}
