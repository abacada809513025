#include "lwcov/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lwcov/error.hpp"

namespace lwcov {

namespace {

void require_distance(double distance_m) {
    if (!std::isfinite(distance_m) || distance_m < PathLossModel::kReferenceD0M) {
        throw DomainError("distance " + std::to_string(distance_m) + " m is below the 1 m reference distance");
    }
}

// Regressors and responses for a sample set; throws on non-finite values.
template <typename Response>
void collect(std::span<const LinkSample> samples, Response response, std::vector<double>& x,
             std::vector<double>& y) {
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& s : samples) {
        const double r = response(s);
        if (!std::isfinite(s.distance_m) || !std::isfinite(r)) {
            throw ValidationError("sample for packet " + std::to_string(s.packet_id) + " is not finite");
        }
        if (s.distance_m < PathLossModel::kReferenceD0M) {
            throw ValidationError("sample for packet " + std::to_string(s.packet_id) +
                                  " has distance below 1 m");
        }
        x.push_back(std::log10(s.distance_m));
        y.push_back(r);
    }
}

}  // namespace

ReferenceForm to_reference_form(const PathLossModel& model, double d0_m) {
    return {d0_m, predict_path_loss(model, d0_m), model.exponent_n};
}

double predict_path_loss(const PathLossModel& model, double distance_m) {
    require_distance(distance_m);
    return model.intercept_a_db + 10.0 * model.exponent_n * std::log10(distance_m);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("regression inputs differ in length");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw ValidationError("regression input is not finite");
        }
    }
    bool distinct = false;
    for (std::size_t i = 1; i < x.size() && !distinct; ++i) {
        distinct = x[i] != x[0];
    }
    if (!distinct) {
        throw DegenerateFitError("need at least two distinct distances to fit a line (got " +
                                 std::to_string(x.size()) + " samples)");
    }

    const auto n = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (y[i] - mean_y);
    }

    LineFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    if (x.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            ssr += r * r;
        }
        fit.sigma = std::sqrt(ssr / (n - 2.0));
    }
    return fit;
}

PathLossFit fit_path_loss(std::span<const LinkSample> samples) {
    std::vector<double> x;
    std::vector<double> y;
    collect(samples, [](const LinkSample& s) { return s.path_loss_db; }, x, y);
    const LineFit line = fit_line(x, y);

    PathLossFit out;
    out.model.intercept_a_db = line.intercept;
    out.model.exponent_n = line.slope / 10.0;
    out.model.sigma_db = line.sigma;
    out.diagnostics = diagnose(samples, out.model);
    return out;
}

FitDiagnostics diagnose(std::span<const LinkSample> samples, const PathLossModel& model) {
    if (samples.empty()) {
        throw ValidationError("cannot compute error metrics over zero samples");
    }
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double sum = 0.0;
    for (const auto& s : samples) {
        const double r = s.path_loss_db - predict_path_loss(model, s.distance_m);
        abs_sum += std::abs(r);
        sq_sum += r * r;
        sum += r;
    }
    const auto n = static_cast<double>(samples.size());
    FitDiagnostics d;
    d.mae_db = abs_sum / n;
    d.rmse_db = std::sqrt(sq_sum / n);
    d.residual_mean_db = sum / n;
    d.sample_count = samples.size();
    return d;
}

double mae(std::span<const LinkSample> samples, const PathLossModel& model) {
    return diagnose(samples, model).mae_db;
}

double rmse(std::span<const LinkSample> samples, const PathLossModel& model) {
    return diagnose(samples, model).rmse_db;
}

double SnrTrend::mean_at(double distance_m) const {
    require_distance(distance_m);
    return intercept_db + slope_db_per_decade * std::log10(distance_m);
}

SnrTrend fit_snr_trend(std::span<const LinkSample> samples) {
    std::vector<double> x;
    std::vector<double> y;
    collect(samples, [](const LinkSample& s) { return s.snr_db; }, x, y);
    const LineFit line = fit_line(x, y);
    return {line.intercept, line.slope, line.sigma};
}

std::map<int, SnrTrend> fit_snr_trends_per_sf(std::span<const LinkSample> samples) {
    std::map<int, std::vector<LinkSample>> by_sf;
    for (const auto& s : samples) {
        by_sf[s.sf].push_back(s);
    }
    std::map<int, SnrTrend> trends;
    for (const auto& [sf, group] : by_sf) {
        try {
            trends.emplace(sf, fit_snr_trend(group));
        } catch (const DegenerateFitError&) {
            // Too few distinct distances at this SF; leave it out.
        }
    }
    return trends;
}

double standard_normal_cdf(double x) {
    if (std::isnan(x)) {
        throw ValidationError("standard_normal_cdf of NaN");
    }
    if (x < -8.0) return 0.0;
    if (x > 8.0) return 1.0;
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double reception_probability(const SnrTrend& trend, int sf, double distance_m) {
    const double gamma = snr_threshold(sf);
    if (!std::isfinite(trend.sigma_db) || trend.sigma_db < 0.0) {
        throw ValidationError("SNR trend sigma must be finite and non-negative");
    }
    const double mu = trend.mean_at(distance_m);
    if (trend.sigma_db == 0.0) {
        return mu >= gamma ? 1.0 : 0.0;
    }
    // 1 - Phi((gamma - mu) / sigma) == Phi((mu - gamma) / sigma), evaluated
    // in the second form to keep precision in the upper tail.
    return standard_normal_cdf((mu - gamma) / trend.sigma_db);
}

ReceptionCurve reception_curve(const SnrTrend& trend, int sf, double d_min_m, double d_max_m, std::size_t steps) {
    if (steps < 2) {
        throw ValidationError("reception curve needs at least 2 steps");
    }
    require_distance(d_min_m);
    if (!std::isfinite(d_max_m) || d_max_m <= d_min_m) {
        throw ValidationError("reception curve needs d_max > d_min");
    }
    snr_threshold(sf);

    ReceptionCurve curve{sf, {}};
    curve.points.reserve(steps);
    const double l0 = std::log10(d_min_m);
    const double l1 = std::log10(d_max_m);
    for (std::size_t i = 0; i < steps; ++i) {
        double d;
        if (i == 0) {
            d = d_min_m;
        } else if (i + 1 == steps) {
            d = d_max_m;
        } else {
            d = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(steps - 1));
        }
        curve.points.push_back({d, reception_probability(trend, sf, d)});
    }
    return curve;
}

}  // namespace lwcov
