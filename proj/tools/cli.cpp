#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lwcov/csv.hpp"
#include "lwcov/error.hpp"
#include "lwcov/ingest.hpp"
#include "lwcov/model.hpp"
#include "lwcov/stats.hpp"
#include "lwcov/synth.hpp"

namespace lwcov::cli {

namespace fs = std::filesystem;

namespace {

/// Raised for unusable command-line input that CLI11 cannot detect itself.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
        throw Error("failed to write '" + path.string() + "'");
    }
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) {
        throw Error("cannot create output directory '" + dir + "'");
    }
    return p;
}

template <typename Fn>
auto parse_path(const std::string& path, Fn parse, ParseOptions opts = {}) {
    std::istringstream in(read_file(path));
    opts.source = path;
    return parse(in, opts);
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

template <typename Writer, typename Data>
std::string render(Writer write, const Data& data) {
    std::ostringstream s;
    write(s, data);
    return s.str();
}

std::vector<LinkSample> load_samples(const std::string& path) {
    auto samples = parse_path(path, [](std::istream& in, const ParseOptions& o) { return parse_samples(in, o); });
    if (samples.empty()) {
        throw UsageError("no samples in '" + path + "'");
    }
    return samples;
}

// --- join -----------------------------------------------------------------

struct JoinArgs {
    std::string tx, rx, gateways, out;
    double window_s = 1.25;
    double default_tx_power_dbm = kDefaultTxPowerDbm;
};

JoinResult do_join(const JoinArgs& a) {
    ParseOptions opts;
    opts.default_tx_power_dbm = a.default_tx_power_dbm;
    const auto txs = parse_path(a.tx, [](std::istream& in, const ParseOptions& o) { return parse_transmissions(in, o); }, opts);
    const auto rxs = parse_path(a.rx, [](std::istream& in, const ParseOptions& o) { return parse_receptions(in, o); }, opts);
    const auto gws = parse_path(a.gateways, [](std::istream& in, const ParseOptions& o) { return parse_gateways(in, o); }, opts);
    if (!std::isfinite(a.window_s) || a.window_s < 0.0) {
        throw UsageError("--match-window-s must be non-negative");
    }
    JoinPolicy policy;
    policy.match_window = std::chrono::milliseconds{std::llround(a.window_s * 1000.0)};
    return join_samples(txs, rxs, gws, policy);
}

void write_join_outputs(const fs::path& dir, const JoinResult& r) {
    write_file(dir / "samples.csv", render([](std::ostream& o, const auto& s) { write_samples(o, s); }, r.samples));
    write_file(dir / "rejects.csv", render([](std::ostream& o, const auto& s) { write_rejects(o, s); }, r.rejects));
}

int cmd_join(const JoinArgs& a, std::ostream& out) {
    const auto dir = prepare_out_dir(a.out);
    const auto r = do_join(a);
    write_join_outputs(dir, r);
    out << "samples: " << r.samples.size() << "\nrejects: " << r.rejects.size() << '\n';
    return 0;
}

// --- fit ------------------------------------------------------------------

struct FitArgs {
    std::string samples, out;
    std::optional<double> compare_mae_db;
};

void print_fit(std::ostream& out, const PathLossFit& fit) {
    out << "A_db      " << fmt("%.6f", fit.model.intercept_a_db) << '\n'
        << "n         " << fmt("%.6f", fit.model.exponent_n) << '\n'
        << "sigma_db  " << fmt("%.6f", fit.model.sigma_db) << '\n'
        << "MAE_db    " << fmt("%.6f", fit.diagnostics.mae_db) << '\n'
        << "RMSE_db   " << fmt("%.6f", fit.diagnostics.rmse_db) << '\n'
        << "N         " << fit.diagnostics.sample_count << '\n';
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
    const auto dir = prepare_out_dir(a.out);
    const auto samples = load_samples(a.samples);
    const auto fit = fit_path_loss(samples);
    write_file(dir / "model.json", to_json(fit));
    print_fit(out, fit);
    if (a.compare_mae_db) {
        out << "MAE_ref   " << fmt("%.6f", *a.compare_mae_db) << " (delta "
            << fmt("%+.6f", fit.diagnostics.mae_db - *a.compare_mae_db) << ")\n";
    }
    return 0;
}

// --- report ---------------------------------------------------------------

struct ReportArgs {
    std::string samples, model, out;
    double bin_width_m = kDefaultBinWidthM;
    std::size_t min_count = kDefaultSparseCount;
    std::string sf_trend = "pooled";
    std::size_t curve_steps = 100;
    std::optional<double> curve_min_m, curve_max_m;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
    const auto dir = prepare_out_dir(a.out);
    const auto samples = load_samples(a.samples);

    const PathLossFit fit = a.model.empty() ? fit_path_loss(samples) : path_loss_fit_from_json(read_file(a.model));

    double d_lo = samples.front().distance_m;
    double d_hi = d_lo;
    std::set<int> sfs;
    for (const auto& s : samples) {
        d_lo = std::min(d_lo, s.distance_m);
        d_hi = std::max(d_hi, s.distance_m);
        sfs.insert(s.sf);
    }

    const auto gateways = per_gateway_summary(samples);
    write_file(dir / "cdf.csv", render([](std::ostream& o, const auto& g) { write_cdf_csv(o, g); }, gateways));

    const auto edges = BinEdges::uniform(a.bin_width_m, d_hi);
    const auto bins = boxplot_by_bin(samples, edges, a.min_count);
    write_file(dir / "boxplot.csv", render([](std::ostream& o, const auto& b) { write_boxplot_csv(o, b); }, bins));
    const auto margin = threshold_margin_rate(samples, edges);
    write_file(dir / "margin.csv", render([](std::ostream& o, const auto& m) { write_margin_csv(o, m); }, margin));

    std::map<int, SnrTrend> trends;
    if (a.sf_trend == "pooled") {
        const auto pooled = fit_snr_trend(samples);
        for (int sf : sfs) {
            trends.emplace(sf, pooled);
        }
    } else {
        trends = fit_snr_trends_per_sf(samples);
        for (int sf : sfs) {
            if (!trends.contains(sf)) {
                err << "warning: SF" << sf << " has fewer than two distinct distances; no reception curve\n";
            }
        }
    }
    const double c_min = a.curve_min_m.value_or(std::max(d_lo, PathLossModel::kReferenceD0M));
    const double c_max = a.curve_max_m.value_or(d_hi);
    std::ostringstream curves;
    curves << "sf,distance_m,p_recv\n";
    if (c_max > c_min) {
        for (const auto& [sf, trend] : trends) {
            for (const auto& p : reception_curve(trend, sf, c_min, c_max, a.curve_steps).points) {
                curves << sf << ',' << csv::format_double(p.distance_m) << ',' << csv::format_double(p.p_recv) << '\n';
            }
        }
    } else {
        err << "warning: distance range is empty; reception curves left blank\n";
    }
    write_file(dir / "reception_curves.csv", curves.str());

    std::ostringstream snr;
    snr << "distance_m,snr_db,sf,threshold_db\n";
    for (const auto& s : samples) {
        snr << csv::format_double(s.distance_m) << ',' << csv::format_double(s.snr_db) << ',' << s.sf << ','
            << csv::format_double(snr_threshold(s.sf)) << '\n';
    }
    write_file(dir / "snr_vs_distance.csv", snr.str());

    std::ostringstream pl;
    pl << "distance_m,path_loss_db,predicted_db,residual_db\n";
    for (const auto& s : samples) {
        const double pred = predict_path_loss(fit.model, s.distance_m);
        pl << csv::format_double(s.distance_m) << ',' << csv::format_double(s.path_loss_db) << ','
           << csv::format_double(pred) << ',' << csv::format_double(s.path_loss_db - pred) << '\n';
    }
    write_file(dir / "path_loss_fit.csv", pl.str());

    out << "samples: " << samples.size() << "\ngateways: " << gateways.size() << "\nbins: " << edges.bin_count()
        << "\nMAE_db: " << fmt("%.6f", diagnose(samples, fit.model).mae_db) << '\n';
    return 0;
}

// --- synth / roundtrip ----------------------------------------------------

struct ScenarioArgs {
    std::string scenario, preset, out;
    std::optional<std::uint64_t> seed;
    bool no_gate = false;
};

Scenario load_scenario(const ScenarioArgs& a) {
    Scenario s;
    if (!a.scenario.empty() && !a.preset.empty()) {
        throw UsageError("give either --scenario or --preset, not both");
    }
    if (!a.scenario.empty()) {
        s = scenario_from_json(read_file(a.scenario));
    } else if (a.preset == "shadowing-recovery") {
        s = presets::shadowing_recovery(1);
    } else if (a.preset == "helikite-hover") {
        s = presets::helikite_hover(1);
    } else if (a.preset.empty()) {
        throw UsageError("one of --scenario or --preset is required");
    } else {
        throw UsageError("unknown preset '" + a.preset + "' (shadowing-recovery, helikite-hover)");
    }
    if (a.seed) {
        s.seed = *a.seed;
    }
    return s;
}

void write_campaign(const fs::path& dir, const CampaignFiles& files) {
    write_file(dir / "transmissions.csv", files.transmissions_csv);
    write_file(dir / "receptions.csv", files.receptions_csv);
    write_file(dir / "gateways.csv", files.gateways_csv);
}

int cmd_synth(const ScenarioArgs& a, std::ostream& out) {
    const auto dir = prepare_out_dir(a.out);
    const auto scenario = load_scenario(a);
    const auto campaign = simulate(scenario, {.apply_demod_gate = !a.no_gate});
    write_campaign(dir, render(campaign));
    out << "transmissions: " << campaign.transmissions.size() << "\nreceptions: " << campaign.receptions.size()
        << "\ngateways: " << campaign.gateways.size() << '\n';
    return 0;
}

int cmd_roundtrip(const ScenarioArgs& a, std::ostream& out) {
    const auto dir = prepare_out_dir(a.out);
    const auto scenario = load_scenario(a);
    write_file(dir / "scenario.json", to_json(scenario));
    write_campaign(dir, generate(scenario, {.apply_demod_gate = !a.no_gate}));

    JoinArgs j;
    j.tx = (dir / "transmissions.csv").string();
    j.rx = (dir / "receptions.csv").string();
    j.gateways = (dir / "gateways.csv").string();
    const auto joined = do_join(j);
    write_join_outputs(dir, joined);
    if (joined.samples.empty()) {
        throw UsageError("no samples survived the join");
    }
    const auto fit = fit_path_loss(joined.samples);
    write_file(dir / "model.json", to_json(fit));

    const auto& truth = scenario.channel;
    const double mae_expected = truth.sigma_db * std::sqrt(2.0 / std::numbers::pi);
    struct Row {
        const char* name;
        double truth;
        double recovered;
    };
    const Row rows[] = {
        {"A_db", truth.intercept_a_db, fit.model.intercept_a_db},
        {"n", truth.exponent_n, fit.model.exponent_n},
        {"sigma_db", truth.sigma_db, fit.model.sigma_db},
        {"MAE_db", mae_expected, fit.diagnostics.mae_db},
        {"RMSE_db", truth.sigma_db, fit.diagnostics.rmse_db},
    };

    nlohmann::ordered_json report;
    report["seed"] = scenario.seed;
    report["sample_count"] = joined.samples.size();
    report["reject_count"] = joined.rejects.size();
    out << "parameter        truth    recovered        delta\n";
    for (const auto& r : rows) {
        out << std::string(r.name) << std::string(9 - std::string(r.name).size(), ' ') << fmt("%12.6f", r.truth) << fmt(" %12.6f", r.recovered) << fmt(" %+12.6f", r.recovered - r.truth)
            << '\n';
        report["parameters"][r.name] = {{"truth", r.truth}, {"recovered", r.recovered}, {"delta", r.recovered - r.truth}};
    }
    out << "N = " << joined.samples.size() << ", rejects = " << joined.rejects.size() << '\n';
    write_file(dir / "roundtrip.json", report.dump(2) + "\n");
    return 0;
}

void print_diagnostic(std::ostream& err, const std::exception& e) {
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        err << "error: parse: " << pe->source() << '\n';
        for (const auto& issue : pe->issues()) {
            err << "  line " << issue.line << ": " << issue.message << '\n';
        }
        return;
    }
    const char* kind = "runtime";
    if (dynamic_cast<const UsageError*>(&e)) kind = "usage";
    else if (dynamic_cast<const UnknownGatewayError*>(&e)) kind = "join";
    else if (dynamic_cast<const DegenerateFitError*>(&e)) kind = "fit";
    else if (dynamic_cast<const ValidationError*>(&e)) kind = "validation";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
    err << "error: " << kind << ": " << e.what() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lwcov: LoRaWAN coverage and propagation-model toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(LWCOV_VERSION), "Print the version number and exit");

    JoinArgs join_args;
    auto* join = app.add_subcommand("join", "Match receptions to transmissions and emit link samples");
    join->add_option("--tx", join_args.tx, "transmissions.csv")->required()->check(CLI::ExistingFile);
    join->add_option("--rx", join_args.rx, "receptions.csv")->required()->check(CLI::ExistingFile);
    join->add_option("--gateways", join_args.gateways, "gateways.csv")->required()->check(CLI::ExistingFile);
    join->add_option("--out", join_args.out, "Output directory (samples.csv, rejects.csv)")->required();
    join->add_option("--match-window-s", join_args.window_s,
                     "Timestamp window for receptions without a packet id")->capture_default_str();
    join->add_option("--tx-power-dbm", join_args.default_tx_power_dbm,
                     "Transmit power for rows with an empty tx_power_dbm")->capture_default_str();

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit the log-distance path loss model to samples.csv");
    fit->add_option("--samples", fit_args.samples, "samples.csv")->required()->check(CLI::ExistingFile);
    fit->add_option("--out", fit_args.out, "Output directory (model.json)")->required();
    fit->add_option("--compare-mae-db", fit_args.compare_mae_db, "Reference MAE to report a delta against");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Emit plot-ready CSV tables for a sample set");
    report->add_option("--samples", report_args.samples, "samples.csv")->required()->check(CLI::ExistingFile);
    report->add_option("--model", report_args.model, "model.json (fitted from the samples when omitted)")
        ->check(CLI::ExistingFile);
    report->add_option("--out", report_args.out, "Output directory")->required();
    report->add_option("--bin-width-m", report_args.bin_width_m, "Distance bin width")
        ->capture_default_str()->check(CLI::PositiveNumber);
    report->add_option("--min-count", report_args.min_count, "Bins with fewer samples are flagged sparse")
        ->capture_default_str();
    report->add_option("--sf-trend", report_args.sf_trend, "SNR trend mode")
        ->capture_default_str()->check(CLI::IsMember({"pooled", "per-sf"}));
    report->add_option("--curve-steps", report_args.curve_steps, "Points per reception curve")
        ->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    report->add_option("--curve-min-m", report_args.curve_min_m, "Reception curve start distance");
    report->add_option("--curve-max-m", report_args.curve_max_m, "Reception curve end distance");

    ScenarioArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic campaign (transmissions, receptions, gateways)");
    ScenarioArgs rt_args;
    auto* roundtrip = app.add_subcommand("roundtrip", "synth -> join -> fit, printing truth vs. recovered");
    for (auto [cmd, sa] : {std::pair{synth, &synth_args}, std::pair{roundtrip, &rt_args}}) {
        cmd->add_option("--scenario", sa->scenario, "Scenario JSON file")->check(CLI::ExistingFile);
        cmd->add_option("--preset", sa->preset, "Built-in scenario: shadowing-recovery, helikite-hover");
        cmd->add_option("--seed", sa->seed, "Override the scenario seed");
        cmd->add_option("--out", sa->out, "Output directory")->required();
        cmd->add_flag("--no-demod-gate", sa->no_gate, "Emit every link, even below the SF threshold");
    }

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*join) return cmd_join(join_args, out);
        if (*fit) return cmd_fit(fit_args, out);
        if (*report) return cmd_report(report_args, out, err);
        if (*synth) return cmd_synth(synth_args, out);
        if (*roundtrip) return cmd_roundtrip(rt_args, out);
    } catch (const std::exception& e) {
        print_diagnostic(err, e);
        return 1;
    }
    return 2;
}

}  // namespace lwcov::cli
