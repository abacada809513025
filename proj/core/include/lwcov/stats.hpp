#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lwcov/ingest.hpp"

namespace lwcov {

/// Right-continuous step function F(x) = #{v <= x} / N.
class EmpiricalCdf {
public:
    /// Throws ValidationError on empty or non-finite input.
    explicit EmpiricalCdf(std::vector<double> values);

    double operator()(double x) const;

    std::span<const double> sorted_values() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return sorted_.size(); }

    struct Step {
        double value;
        double cum_prob;
    };
    /// One entry per distinct value: the CDF just at that value.
    std::vector<Step> steps() const;

private:
    std::vector<double> sorted_;
};

EmpiricalCdf cdf(std::vector<double> values);

/// Linear interpolation between order statistics at p (N - 1), p in [0, 1].
/// `sorted` must be non-empty and ascending.
double quantile_sorted(std::span<const double> sorted, double p);

struct BoxSummary {
    double min;
    double q1;
    double median;
    double q3;
    double max;
    double mean;
};

/// Five-number summary plus mean; std::nullopt for empty input.
std::optional<BoxSummary> summarize(std::vector<double> values);

/// Strictly increasing edges defining half-open bins [e_i, e_{i+1}).
class BinEdges {
public:
    /// Throws ValidationError unless there are >= 2 finite, strictly increasing edges.
    explicit BinEdges(std::vector<double> edges);

    /// Uniform bins of `width_m` from 0 far enough to contain max_distance_m.
    static BinEdges uniform(double width_m, double max_distance_m);

    std::size_t bin_count() const noexcept { return edges_.size() - 1; }
    double lo(std::size_t bin) const { return edges_.at(bin); }
    double hi(std::size_t bin) const { return edges_.at(bin + 1); }
    std::span<const double> edges() const noexcept { return edges_; }

    /// Bin containing x, or std::nullopt outside [front, back).
    std::optional<std::size_t> locate(double x) const;

private:
    std::vector<double> edges_;
};

inline constexpr std::size_t kDefaultSparseCount = 5;
inline constexpr double kDefaultBinWidthM = 500.0;

struct BinGroupSummary {
    std::size_t bin;
    double lo_m;
    double hi_m;
    int sf;
    std::size_t count;
    std::optional<BoxSummary> summary;  // absent when count == 0
    bool sparse;                        // count < min_count
};

struct DistanceBins {
    BinEdges edges;
    std::vector<BinGroupSummary> groups;  // ordered by (bin, sf)
    std::size_t unbinned = 0;             // samples outside [front, back)
};

/// SNR boxplot statistics per (distance bin, SF). Every SF seen in the input
/// gets a row in every bin, so empty cells are reported with count 0.
DistanceBins boxplot_by_bin(std::span<const LinkSample> samples, const BinEdges& edges,
                            std::size_t min_count = kDefaultSparseCount);

struct MarginRate {
    std::size_t bin;
    double lo_m;
    double hi_m;
    int sf;
    std::size_t n;
    std::optional<double> frac_above_threshold;  // absent when n == 0
};

/// Fraction of received packets per (bin, SF) whose SNR reaches the SF threshold.
std::vector<MarginRate> threshold_margin_rate(std::span<const LinkSample> samples,
                                              const BinEdges& edges);

struct MomentSummary {
    double mean;
    double stddev;  // sample standard deviation, 0 for a single value
};

struct GatewaySummary {
    std::string gateway_id;
    std::size_t count;
    EmpiricalCdf rssi_cdf;
    EmpiricalCdf snr_cdf;
    MomentSummary rssi;
    MomentSummary snr;
};

/// Per-gateway distributions, ordered by gateway id.
std::vector<GatewaySummary> per_gateway_summary(std::span<const LinkSample> samples);

void write_cdf_csv(std::ostream& out, std::span<const GatewaySummary> summaries);
void write_boxplot_csv(std::ostream& out, const DistanceBins& bins);
void write_margin_csv(std::ostream& out, std::span<const MarginRate> rates);

}  // namespace lwcov
