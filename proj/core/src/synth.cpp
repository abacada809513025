#include "lwcov/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lwcov/error.hpp"

namespace lwcov {

double NormalSource::uniform() {
    // 53 high bits, offset by half a step so neither 0 nor 1 is produced.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double NormalSource::standard_normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
}

namespace {

std::chrono::milliseconds packet_interval(double seconds) {
    const double ms = seconds * 1000.0;
    const auto rounded = std::llround(ms);
    if (rounded < 1 || std::abs(ms - static_cast<double>(rounded)) > 1e-6) {
        throw ValidationError("packet_interval_s must be a positive whole number of milliseconds");
    }
    return std::chrono::milliseconds{rounded};
}

}  // namespace

void Scenario::validate() const {
    if (gateways.empty()) {
        throw ValidationError("scenario has no gateways");
    }
    if (trajectory.empty()) {
        throw ValidationError("scenario trajectory is empty");
    }
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        if (!(trajectory[i].timestamp > trajectory[i - 1].timestamp)) {
            throw ValidationError("trajectory timestamps must be strictly increasing");
        }
    }
    if (sf_schedule.empty()) {
        throw ValidationError("sf_schedule is empty");
    }
    if (!std::isfinite(packet_interval_s) || packet_interval_s <= 0.0) {
        throw ValidationError("packet_interval_s must be positive");
    }
    packet_interval(packet_interval_s);
    if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_floor_dbm)) {
        throw ValidationError("tx_power_dbm and noise_floor_dbm must be finite");
    }
    if (!std::isfinite(channel.intercept_a_db) || !std::isfinite(channel.exponent_n) ||
        !std::isfinite(channel.sigma_db) || channel.sigma_db < 0.0) {
        throw ValidationError("channel parameters must be finite with sigma_db >= 0");
    }
    GatewayRegistry ids;
    for (const auto& gw : gateways) {
        ids.add(gw);
    }
}

GeoPoint position_at(const std::vector<Waypoint>& trajectory, Timestamp t) {
    if (trajectory.empty()) {
        throw ValidationError("trajectory is empty");
    }
    if (t <= trajectory.front().timestamp) {
        return trajectory.front().position;
    }
    if (t >= trajectory.back().timestamp) {
        return trajectory.back().position;
    }
    auto next = std::ranges::upper_bound(trajectory, t, {}, &Waypoint::timestamp);
    const auto& b = *next;
    const auto& a = *(next - 1);
    const double f = static_cast<double>((t - a.timestamp).count()) /
                     static_cast<double>((b.timestamp - a.timestamp).count());
    const auto lerp = [f](double x, double y) { return x + f * (y - x); };
    // Longitude is interpolated linearly; trajectories crossing the
    // antimeridian are not supported.
    return GeoPoint(lerp(a.position.lat_deg(), b.position.lat_deg()),
                    lerp(a.position.lon_deg(), b.position.lon_deg()),
                    lerp(a.position.alt_m(), b.position.alt_m()));
}

Campaign simulate(const Scenario& scenario, const SynthOptions& options) {
    scenario.validate();

    const auto interval = packet_interval(scenario.packet_interval_s);
    const Timestamp start = scenario.trajectory.front().timestamp;
    const std::size_t count = scenario.packet_count.value_or(
        static_cast<std::size_t>((scenario.trajectory.back().timestamp - start) / interval) + 1);

    Campaign c;
    for (const auto& gw : scenario.gateways) {
        c.gateways.add(gw);
    }
    c.transmissions.reserve(count);

    NormalSource noise(scenario.seed);
    const auto& ch = scenario.channel;
    for (std::size_t k = 0; k < count; ++k) {
        Transmission tx;
        tx.packet_id = k;
        tx.timestamp = start + interval * static_cast<std::int64_t>(k);
        tx.position = position_at(scenario.trajectory, tx.timestamp);
        tx.data_rate = scenario.sf_schedule[k % scenario.sf_schedule.size()];
        tx.tx_power_dbm = scenario.tx_power_dbm;
        c.transmissions.push_back(tx);

        const auto [sf, bw] = dr_to_sf(tx.data_rate);
        // US915 sub-band 1 uplink channels: 902.3 MHz + 200 kHz steps.
        const int channel = static_cast<int>(k % 8);

        for (const auto& gw : scenario.gateways) {
            const double d = std::max(link_distance_3d(tx.position, gw.position), kMinLinkDistanceM);
            // One independent draw per link, taken even when the packet is
            // censored so the random stream does not depend on the gate.
            const double shadow = ch.sigma_db * noise.standard_normal();
            const double pl = ch.intercept_a_db + 10.0 * ch.exponent_n * std::log10(d) + shadow;
            const double rssi = scenario.tx_power_dbm - pl;
            const double snr = rssi - scenario.noise_floor_dbm;
            if (options.apply_demod_gate && !is_demodulable(sf, snr)) {
                continue;
            }
            Reception rx;
            rx.packet_id = tx.packet_id;
            rx.gateway_id = gw.gateway_id;
            rx.timestamp = tx.timestamp;
            rx.rssi_dbm = rssi;
            rx.snr_db = snr;
            rx.sf = sf;
            rx.frequency_hz = 902.3e6 + 200e3 * channel;
            rx.bandwidth_hz = bw;
            rx.channel = channel;
            rx.rf_chain = channel < 4 ? 0 : 1;
            c.receptions.push_back(std::move(rx));
        }
    }
    return c;
}

CampaignFiles render(const Campaign& campaign) {
    CampaignFiles files;
    std::ostringstream tx;
    write_transmissions(tx, campaign.transmissions);
    files.transmissions_csv = tx.str();
    std::ostringstream rx;
    write_receptions(rx, campaign.receptions);
    files.receptions_csv = rx.str();
    std::ostringstream gw;
    write_gateways(gw, campaign.gateways);
    files.gateways_csv = gw.str();
    return files;
}

CampaignFiles generate(const Scenario& scenario, const SynthOptions& options) {
    return render(simulate(scenario, options));
}

namespace presets {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Point `north_m` metres due north of `origin` on the mean-radius sphere.
GeoPoint offset_north(const GeoPoint& origin, double north_m, double alt_m) {
    const double dlat = north_m / EarthModel::kMeanRadiusM * kRadToDeg;
    return GeoPoint(origin.lat_deg() + dlat, origin.lon_deg(), alt_m);
}

GeoPoint offset_east(const GeoPoint& origin, double east_m, double alt_m) {
    const double dlon =
        east_m / (EarthModel::kMeanRadiusM * std::cos(origin.lat_deg() / kRadToDeg)) * kRadToDeg;
    return GeoPoint(origin.lat_deg(), origin.lon_deg() + dlon, alt_m);
}

const Timestamp kEpoch = parse_timestamp("2024-08-24T14:00:00.000Z");
const GeoPoint kLakeWheeler(35.7275, -78.6960, 0.0);

}  // namespace

Scenario shadowing_recovery(std::uint64_t seed) {
    Scenario s;
    s.seed = seed;
    s.channel = PathLossModel{40.0, 2.9, 8.0};
    const GeoPoint gw_pos(kLakeWheeler.lat_deg(), kLakeWheeler.lon_deg(), 2.0);
    s.gateways.push_back({"GW1", gw_pos, "rural"});

    // 1, 2, 4, ..., 512 m with equal dwell per octave, so log10(d) is
    // spread evenly and the intercept is well conditioned.
    const std::chrono::milliseconds dwell{5'555'500};
    for (int k = 0; k <= 9; ++k) {
        const double d = std::ldexp(1.0, k);
        s.trajectory.push_back({kEpoch + dwell * k, offset_north(gw_pos, d, 2.0)});
    }
    s.packet_count = 20'000;
    return s;
}

Scenario helikite_hover(std::uint64_t seed) {
    Scenario s;
    s.seed = seed;
    s.channel = PathLossModel{40.0, 2.5, 8.0};
    const GeoPoint kite(kLakeWheeler.lat_deg(), kLakeWheeler.lon_deg(), 150.0);
    s.trajectory.push_back({kEpoch, kite});
    s.trajectory.push_back({kEpoch + std::chrono::hours{1}, kite});
    s.gateways.push_back({"LW1", offset_north(kite, 1'000.0, 10.0), "rural"});
    s.gateways.push_back({"LW2", offset_east(kite, 2'500.0, 10.0), "rural"});
    s.gateways.push_back({"CC2", offset_north(kite, -5'000.0, 25.0), "urban"});
    s.gateways.push_back({"CC3", offset_east(kite, -8'000.0, 25.0), "urban"});
    return s;
}

}  // namespace presets

}  // namespace lwcov
