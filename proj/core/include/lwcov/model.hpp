#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lwcov/ingest.hpp"

namespace lwcov {

/// Log-distance path loss, PL(d) = A + 10 n log10(d) + X_sigma, with the
/// reference distance fixed at 1 m so that A = PL(1 m).
struct PathLossModel {
    static constexpr double kReferenceD0M = 1.0;

    double intercept_a_db = 0.0;
    double exponent_n = 0.0;
    double sigma_db = 0.0;

    double reference_d0_m() const noexcept { return kReferenceD0M; }
};

/// The same model written as PL(d0) + 10 n log10(d / d0) for an arbitrary d0.
struct ReferenceForm {
    double reference_d0_m;
    double reference_loss_db;
    double exponent_n;
};

ReferenceForm to_reference_form(const PathLossModel& model, double d0_m);

/// Deterministic part of the model. Throws DomainError for d < 1 m.
double predict_path_loss(const PathLossModel& model, double distance_m);

struct FitDiagnostics {
    double mae_db = 0.0;
    double rmse_db = 0.0;
    double residual_mean_db = 0.0;
    std::size_t sample_count = 0;
};

struct PathLossFit {
    PathLossModel model;
    FitDiagnostics diagnostics;
};

/// Closed-form least-squares line y = intercept + slope * x.
/// sigma is the residual standard deviation with N - 2 degrees of freedom
/// (zero when N == 2).
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double sigma = 0.0;
    std::size_t n = 0;
};

/// Throws DegenerateFitError if x has fewer than two distinct values and
/// ValidationError on size mismatch or non-finite input.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Pooled regression of path_loss_db on log10(distance_m) over all samples.
PathLossFit fit_path_loss(std::span<const LinkSample> samples);

double mae(std::span<const LinkSample> samples, const PathLossModel& model);
double rmse(std::span<const LinkSample> samples, const PathLossModel& model);
FitDiagnostics diagnose(std::span<const LinkSample> samples, const PathLossModel& model);

/// Mean SNR as a linear function of log10(d) plus Gaussian spread.
struct SnrTrend {
    double intercept_db = 0.0;
    double slope_db_per_decade = 0.0;
    double sigma_db = 0.0;

    /// Throws DomainError for d < 1 m.
    double mean_at(double distance_m) const;
};

SnrTrend fit_snr_trend(std::span<const LinkSample> samples);

/// One trend per SF present in the samples. SFs whose samples cannot support
/// a fit (fewer than two distinct distances) are omitted.
std::map<int, SnrTrend> fit_snr_trends_per_sf(std::span<const LinkSample> samples);

/// Standard normal CDF. Exactly 0 below -8 and 1 above 8.
double standard_normal_cdf(double x);

/// Probability that SNR at distance d reaches the SF threshold under the
/// trend's Gaussian. With sigma == 0 this is a step: 1 if mean >= threshold.
double reception_probability(const SnrTrend& trend, int sf, double distance_m);

struct CurvePoint {
    double distance_m;
    double p_recv;
};

struct ReceptionCurve {
    int sf;
    std::vector<CurvePoint> points;
};

/// Samples reception_probability on a log-spaced grid with both endpoints included.
ReceptionCurve reception_curve(const SnrTrend& trend, int sf, double d_min_m, double d_max_m,
                               std::size_t steps);

// JSON document: {"intercept_a_db", "exponent_n", "sigma_db", "reference_d0_m",
// "sample_count", "mae_db", "rmse_db"}
std::string to_json(const PathLossFit& fit);
/// Throws ValidationError on missing keys or malformed JSON.
PathLossFit path_loss_fit_from_json(const std::string& text);

}  // namespace lwcov
