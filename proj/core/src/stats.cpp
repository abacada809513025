#include "lwcov/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "lwcov/csv.hpp"
#include "lwcov/error.hpp"
#include "lwcov/sf_table.hpp"

namespace lwcov {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) {
        throw ValidationError("empirical CDF needs at least one value");
    }
    if (!std::ranges::all_of(sorted_, [](double v) { return std::isfinite(v); })) {
        throw ValidationError("empirical CDF input is not finite");
    }
    std::ranges::sort(sorted_);
}

double EmpiricalCdf::operator()(double x) const {
    const auto le = std::ranges::upper_bound(sorted_, x) - sorted_.begin();
    return static_cast<double>(le) / static_cast<double>(sorted_.size());
}

std::vector<EmpiricalCdf::Step> EmpiricalCdf::steps() const {
    std::vector<Step> out;
    const auto n = static_cast<double>(sorted_.size());
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
        if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) {
            continue;
        }
        out.push_back({sorted_[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

EmpiricalCdf cdf(std::vector<double> values) { return EmpiricalCdf(std::move(values)); }

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw ValidationError("quantile of an empty set");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("quantile probability outside [0, 1]");
    }
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::optional<BoxSummary> summarize(std::vector<double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    std::ranges::sort(values);
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return BoxSummary{values.front(),
                      quantile_sorted(values, 0.25),
                      quantile_sorted(values, 0.5),
                      quantile_sorted(values, 0.75),
                      values.back(),
                      sum / static_cast<double>(values.size())};
}

BinEdges::BinEdges(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) {
        throw ValidationError("bin edges need at least two values");
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (!std::isfinite(edges_[i])) {
            throw ValidationError("bin edges must be finite");
        }
        if (i > 0 && !(edges_[i] > edges_[i - 1])) {
            throw ValidationError("bin edges must be strictly increasing");
        }
    }
}

BinEdges BinEdges::uniform(double width_m, double max_distance_m) {
    if (!std::isfinite(width_m) || width_m <= 0.0) {
        throw ValidationError("bin width must be positive");
    }
    if (!std::isfinite(max_distance_m) || max_distance_m < 0.0) {
        throw ValidationError("maximum distance must be finite and non-negative");
    }
    // Half-open bins: the last edge must lie strictly above the maximum.
    const auto bins = static_cast<std::size_t>(std::floor(max_distance_m / width_m)) + 1;
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = static_cast<double>(i) * width_m;
    }
    return BinEdges(std::move(edges));
}

std::optional<std::size_t> BinEdges::locate(double x) const {
    if (!(x >= edges_.front() && x < edges_.back())) {
        return std::nullopt;
    }
    const auto it = std::ranges::upper_bound(edges_, x);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

namespace {

std::vector<int> distinct_sfs(std::span<const LinkSample> samples) {
    std::set<int> sfs;
    for (const auto& s : samples) {
        sfs.insert(s.sf);
    }
    return {sfs.begin(), sfs.end()};
}

// SNR values per (bin, sf-slot), plus the number of samples outside the edges.
struct Buckets {
    std::vector<int> sfs;
    std::vector<std::vector<double>> cells;  // bin * sfs.size() + slot
    std::size_t unbinned = 0;

    std::vector<double>& at(std::size_t bin, std::size_t slot) { return cells[bin * sfs.size() + slot]; }
};

Buckets bucket(std::span<const LinkSample> samples, const BinEdges& edges) {
    Buckets b;
    b.sfs = distinct_sfs(samples);
    b.cells.resize(edges.bin_count() * b.sfs.size());
    for (const auto& s : samples) {
        const auto bin = edges.locate(s.distance_m);
        if (!bin) {
            ++b.unbinned;
            continue;
        }
        const auto slot = static_cast<std::size_t>(std::ranges::lower_bound(b.sfs, s.sf) - b.sfs.begin());
        b.at(*bin, slot).push_back(s.snr_db);
    }
    return b;
}

MomentSummary moments(std::span<const double> values) {
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    return {mean, sd};
}

void write_opt(std::ostream& out, const std::optional<double>& v) {
    if (v) {
        out << csv::format_double(*v);
    }
}

}  // namespace

DistanceBins boxplot_by_bin(std::span<const LinkSample> samples, const BinEdges& edges, std::size_t min_count) {
    Buckets b = bucket(samples, edges);
    DistanceBins out{edges, {}, b.unbinned};
    out.groups.reserve(b.cells.size());
    for (std::size_t bin = 0; bin < edges.bin_count(); ++bin) {
        for (std::size_t slot = 0; slot < b.sfs.size(); ++slot) {
            auto& cell = b.at(bin, slot);
            const std::size_t count = cell.size();
            out.groups.push_back({bin, edges.lo(bin), edges.hi(bin), b.sfs[slot], count,
                                  summarize(std::move(cell)), count < min_count});
        }
    }
    return out;
}

std::vector<MarginRate> threshold_margin_rate(std::span<const LinkSample> samples, const BinEdges& edges) {
    Buckets b = bucket(samples, edges);
    std::vector<MarginRate> out;
    out.reserve(b.cells.size());
    for (std::size_t bin = 0; bin < edges.bin_count(); ++bin) {
        for (std::size_t slot = 0; slot < b.sfs.size(); ++slot) {
            const int sf = b.sfs[slot];
            const auto& cell = b.at(bin, slot);
            std::optional<double> frac;
            if (!cell.empty()) {
                const auto above = std::ranges::count_if(cell, [sf](double snr) { return is_demodulable(sf, snr); });
                frac = static_cast<double>(above) / static_cast<double>(cell.size());
            }
            out.push_back({bin, edges.lo(bin), edges.hi(bin), sf, cell.size(), frac});
        }
    }
    return out;
}

std::vector<GatewaySummary> per_gateway_summary(std::span<const LinkSample> samples) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_gw;
    for (const auto& s : samples) {
        auto& [rssi, snr] = by_gw[s.gateway_id];
        rssi.push_back(s.rssi_dbm);
        snr.push_back(s.snr_db);
    }
    std::vector<GatewaySummary> out;
    out.reserve(by_gw.size());
    for (auto& [id, values] : by_gw) {
        auto& [rssi, snr] = values;
        const auto rssi_m = moments(rssi);
        const auto snr_m = moments(snr);
        const std::size_t count = rssi.size();
        out.push_back({id, count, EmpiricalCdf(std::move(rssi)), EmpiricalCdf(std::move(snr)), rssi_m, snr_m});
    }
    return out;
}

void write_cdf_csv(std::ostream& out, std::span<const GatewaySummary> summaries) {
    out << "gateway_id,metric,value,cum_prob\n";
    for (const auto& g : summaries) {
        for (const auto& [metric, dist] : {std::pair{"rssi_dbm", &g.rssi_cdf}, std::pair{"snr_db", &g.snr_cdf}}) {
            for (const auto& step : dist->steps()) {
                out << g.gateway_id << ',' << metric << ',' << csv::format_double(step.value) << ','
                    << csv::format_double(step.cum_prob) << '\n';
            }
        }
    }
}

void write_boxplot_csv(std::ostream& out, const DistanceBins& bins) {
    out << "bin_lo_m,bin_hi_m,sf,count,min,q1,median,q3,max,mean\n";
    for (const auto& g : bins.groups) {
        out << csv::format_double(g.lo_m) << ',' << csv::format_double(g.hi_m) << ',' << g.sf << ',' << g.count;
        if (g.summary) {
            const auto& s = *g.summary;
            for (double v : {s.min, s.q1, s.median, s.q3, s.max, s.mean}) {
                out << ',' << csv::format_double(v);
            }
        } else {
            out << ",,,,,,";
        }
        out << '\n';
    }
}

void write_margin_csv(std::ostream& out, std::span<const MarginRate> rates) {
    out << "bin_lo_m,bin_hi_m,sf,n,frac_above_threshold\n";
    for (const auto& r : rates) {
        out << csv::format_double(r.lo_m) << ',' << csv::format_double(r.hi_m) << ',' << r.sf << ',' << r.n << ',';
        write_opt(out, r.frac_above_threshold);
        out << '\n';
    }
}

}  // namespace lwcov
