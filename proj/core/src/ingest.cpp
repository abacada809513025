#include "lwcov/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "lwcov/csv.hpp"
#include "lwcov/error.hpp"

namespace lwcov {

namespace {

constexpr std::array<std::string_view, 7> kTxHeader{
    "packet_id", "timestamp_utc", "lat_deg", "lon_deg", "alt_m", "data_rate", "tx_power_dbm"};
constexpr std::array<std::string_view, 10> kRxHeader{
    "packet_id", "gateway_id", "timestamp_utc", "rssi_dbm",  "snr_db",
    "sf",        "frequency_hz", "bandwidth_hz", "channel", "rf_chain"};
constexpr std::array<std::string_view, 5> kGwHeader{"gateway_id", "lat_deg", "lon_deg", "alt_m",
                                                            "environment_tag"};
constexpr std::array<std::string_view, 8> kSampleHeader{
    "packet_id", "gateway_id", "timestamp_utc", "distance_m", "rssi_dbm", "snr_db", "sf", "path_loss_db"};

// Runs `parse_row` over every data row, collecting failures so that a single
// ParseError lists every bad line.
template <typename Fn>
void for_each_row(std::istream& in, const std::string& source, std::span<const std::string_view> header,
                  Fn&& parse_row) {
    csv::Reader reader(in);
    reader.expect_header(source, header);
    std::vector<ParseIssue> issues;
    while (auto row = reader.next()) {
        if (row->size() != header.size()) {
            issues.push_back({reader.line(), "expected " + std::to_string(header.size()) + " fields, got " +
                                                 std::to_string(row->size())});
            continue;
        }
        try {
            parse_row(*row, reader.line());
        } catch (const ValidationError& e) {
            issues.push_back({reader.line(), e.what()});
        }
    }
    if (!issues.empty()) {
        throw ParseError(source, std::move(issues));
    }
}

int parse_sf(std::string_view field) {
    const auto sf = csv::parse_int(field, "sf");
    if (sf < kMinSf || sf > kMaxSf) {
        throw ValidationError("column 'sf': " + std::string(field) + " outside [6, 12]");
    }
    return static_cast<int>(sf);
}

std::string require_id(std::string_view field, std::string_view column) {
    if (field.empty()) {
        throw ValidationError("column '" + std::string(column) + "' is empty");
    }
    return std::string(field);
}

}  // namespace

LinkSample make_link_sample(std::uint64_t packet_id, std::string gateway_id, Timestamp timestamp,
                            double distance_m, double rssi_dbm, double snr_db, int sf, double tx_power_dbm) {
    if (!std::isfinite(distance_m) || !std::isfinite(rssi_dbm) || !std::isfinite(snr_db) ||
        !std::isfinite(tx_power_dbm)) {
        throw ValidationError("link sample fields must be finite");
    }
    LinkSample s;
    s.packet_id = packet_id;
    s.gateway_id = std::move(gateway_id);
    s.timestamp = timestamp;
    s.distance_m = std::max(distance_m, kMinLinkDistanceM);
    s.rssi_dbm = rssi_dbm;
    s.snr_db = snr_db;
    s.sf = sf;
    s.tx_power_dbm = tx_power_dbm;
    s.path_loss_db = tx_power_dbm - rssi_dbm;
    return s;
}

void GatewayRegistry::add(GatewayRecord record) {
    if (record.gateway_id.empty()) {
        throw ValidationError("gateway id is empty");
    }
    auto id = record.gateway_id;
    if (!gateways_.emplace(id, std::move(record)).second) {
        throw ValidationError("duplicate gateway id '" + id + "'");
    }
}

const GatewayRecord* GatewayRegistry::find(const std::string& id) const {
    auto it = gateways_.find(id);
    return it == gateways_.end() ? nullptr : &it->second;
}

std::vector<Transmission> parse_transmissions(std::istream& in, const ParseOptions& opts) {
    std::vector<Transmission> txs;
    std::unordered_map<std::uint64_t, std::size_t> first_line;
    std::vector<ParseIssue> duplicates;
    for_each_row(in, opts.source, kTxHeader, [&](const std::vector<std::string>& f, std::size_t line) {
        Transmission tx;
        tx.packet_id = csv::parse_uint(f[0], "packet_id");
        tx.timestamp = parse_timestamp(f[1]);
        tx.position = GeoPoint(csv::parse_double(f[2], "lat_deg"), csv::parse_double(f[3], "lon_deg"),
                               csv::parse_double(f[4], "alt_m"));
        tx.data_rate = parse_data_rate(f[5]);
        tx.tx_power_dbm = f[6].empty() ? opts.default_tx_power_dbm : csv::parse_double(f[6], "tx_power_dbm");
        auto [it, inserted] = first_line.emplace(tx.packet_id, line);
        if (!inserted) {
            duplicates.push_back({line, "duplicate packet_id " + std::to_string(tx.packet_id) +
                                            " (first seen on line " + std::to_string(it->second) + ")"});
            return;
        }
        txs.push_back(tx);
    });
    if (!duplicates.empty()) {
        std::string msg = opts.source + ": line " + std::to_string(duplicates.front().line) + ": " +
                          duplicates.front().message;
        if (duplicates.size() > 1) {
            msg += " (+" + std::to_string(duplicates.size() - 1) + " more)";
        }
        throw ValidationError(msg);
    }
    return txs;
}

std::vector<Reception> parse_receptions(std::istream& in, const ParseOptions& opts) {
    std::vector<Reception> rxs;
    for_each_row(in, opts.source, kRxHeader, [&](const std::vector<std::string>& f, std::size_t) {
        Reception rx;
        if (!f[0].empty()) {
            rx.packet_id = csv::parse_uint(f[0], "packet_id");
        }
        rx.gateway_id = require_id(f[1], "gateway_id");
        rx.timestamp = parse_timestamp(f[2]);
        if (f[3].empty() || f[4].empty()) {
            throw ValidationError(f[3].empty() && f[4].empty() ? "rssi_dbm and snr_db are both missing"
                                  : f[3].empty()               ? "rssi_dbm missing (snr_db present)"
                                                               : "snr_db missing (rssi_dbm present)");
        }
        rx.rssi_dbm = csv::parse_double(f[3], "rssi_dbm");
        rx.snr_db = csv::parse_double(f[4], "snr_db");
        rx.sf = parse_sf(f[5]);
        rx.frequency_hz = csv::parse_double(f[6], "frequency_hz");
        rx.bandwidth_hz = csv::parse_double(f[7], "bandwidth_hz");
        rx.channel = static_cast<int>(csv::parse_int(f[8], "channel"));
        rx.rf_chain = static_cast<int>(csv::parse_int(f[9], "rf_chain"));
        rxs.push_back(std::move(rx));
    });
    return rxs;
}

GatewayRegistry parse_gateways(std::istream& in, const ParseOptions& opts) {
    GatewayRegistry registry;
    for_each_row(in, opts.source, kGwHeader, [&](const std::vector<std::string>& f, std::size_t) {
        GatewayRecord gw;
        gw.gateway_id = require_id(f[0], "gateway_id");
        gw.position = GeoPoint(csv::parse_double(f[1], "lat_deg"), csv::parse_double(f[2], "lon_deg"),
                               csv::parse_double(f[3], "alt_m"));
        gw.environment_tag = f[4];
        registry.add(std::move(gw));
    });
    return registry;
}

std::vector<LinkSample> parse_samples(std::istream& in, const ParseOptions& opts) {
    std::vector<LinkSample> samples;
    for_each_row(in, opts.source, kSampleHeader, [&](const std::vector<std::string>& f, std::size_t) {
                     LinkSample s;
                     s.packet_id = csv::parse_uint(f[0], "packet_id");
                     s.gateway_id = require_id(f[1], "gateway_id");
                     s.timestamp = parse_timestamp(f[2]);
                     s.distance_m = csv::parse_double(f[3], "distance_m");
                     if (s.distance_m < kMinLinkDistanceM) {
                         throw ValidationError("column 'distance_m': below the 1 m clamp");
                     }
                     s.rssi_dbm = csv::parse_double(f[4], "rssi_dbm");
                     s.snr_db = csv::parse_double(f[5], "snr_db");
                     s.sf = parse_sf(f[6]);
                     s.path_loss_db = csv::parse_double(f[7], "path_loss_db");
                     s.tx_power_dbm = s.path_loss_db + s.rssi_dbm;
                     samples.push_back(std::move(s));
                 });
    return samples;
}

void write_transmissions(std::ostream& out, std::span<const Transmission> txs) {
    out << "packet_id,timestamp_utc,lat_deg,lon_deg,alt_m,data_rate,tx_power_dbm\n";
    for (const auto& tx : txs) {
        out << tx.packet_id << ',' << format_timestamp(tx.timestamp) << ','
            << csv::format_double(tx.position.lat_deg()) << ',' << csv::format_double(tx.position.lon_deg())
            << ',' << csv::format_double(tx.position.alt_m()) << ',' << to_string(tx.data_rate) << ','
            << csv::format_double(tx.tx_power_dbm) << '\n';
    }
}

void write_receptions(std::ostream& out, std::span<const Reception> rxs) {
    out << "packet_id,gateway_id,timestamp_utc,rssi_dbm,snr_db,sf,frequency_hz,bandwidth_hz,channel,rf_chain\n";
    for (const auto& rx : rxs) {
        if (rx.packet_id) {
            out << *rx.packet_id;
        }
        out << ',' << rx.gateway_id << ',' << format_timestamp(rx.timestamp) << ','
            << csv::format_double(rx.rssi_dbm) << ',' << csv::format_double(rx.snr_db) << ',' << rx.sf << ','
            << csv::format_double(rx.frequency_hz) << ',' << csv::format_double(rx.bandwidth_hz) << ','
            << rx.channel << ',' << rx.rf_chain << '\n';
    }
}

void write_gateways(std::ostream& out, const GatewayRegistry& gws) {
    out << "gateway_id,lat_deg,lon_deg,alt_m,environment_tag\n";
    for (const auto& [id, gw] : gws) {
        out << id << ',' << csv::format_double(gw.position.lat_deg()) << ','
            << csv::format_double(gw.position.lon_deg()) << ',' << csv::format_double(gw.position.alt_m())
            << ',' << gw.environment_tag << '\n';
    }
}

void write_samples(std::ostream& out, std::span<const LinkSample> samples) {
    out << "packet_id,gateway_id,timestamp_utc,distance_m,rssi_dbm,snr_db,sf,path_loss_db\n";
    for (const auto& s : samples) {
        out << s.packet_id << ',' << s.gateway_id << ',' << format_timestamp(s.timestamp) << ','
            << csv::format_double(s.distance_m) << ',' << csv::format_double(s.rssi_dbm) << ','
            << csv::format_double(s.snr_db) << ',' << s.sf << ',' << csv::format_double(s.path_loss_db)
            << '\n';
    }
}

std::string_view to_string(RejectReason r) noexcept {
    switch (r) {
        case RejectReason::NoMatch: return "no_match";
        case RejectReason::UnknownPacket: return "unknown_packet";
        case RejectReason::Ambiguous: return "ambiguous";
        case RejectReason::Duplicate: return "duplicate";
    }
    return "unknown";
}

void write_rejects(std::ostream& out, std::span<const RejectedReception> rejects) {
    out << "packet_id,gateway_id,timestamp_utc,rssi_dbm,snr_db,sf,reason\n";
    for (const auto& r : rejects) {
        const auto& rx = r.reception;
        if (rx.packet_id) {
            out << *rx.packet_id;
        } else if (r.matched_packet_id) {
            out << *r.matched_packet_id;
        }
        out << ',' << rx.gateway_id << ',' << format_timestamp(rx.timestamp) << ','
            << csv::format_double(rx.rssi_dbm) << ',' << csv::format_double(rx.snr_db) << ',' << rx.sf << ','
            << to_string(r.reason) << '\n';
    }
}

JoinResult join_samples(std::span<const Transmission> txs, std::span<const Reception> rxs,
                        const GatewayRegistry& gws, const JoinPolicy& policy) {
    std::set<std::string> unknown;
    for (const auto& rx : rxs) {
        if (!gws.contains(rx.gateway_id)) {
            unknown.insert(rx.gateway_id);
        }
    }
    if (!unknown.empty()) {
        throw UnknownGatewayError({unknown.begin(), unknown.end()});
    }

    std::unordered_map<std::uint64_t, const Transmission*> by_id;
    by_id.reserve(txs.size());
    for (const auto& tx : txs) {
        if (!by_id.emplace(tx.packet_id, &tx).second) {
            throw ValidationError("duplicate transmission packet_id " + std::to_string(tx.packet_id));
        }
    }

    std::vector<const Transmission*> by_time;
    by_time.reserve(txs.size());
    for (const auto& tx : txs) {
        by_time.push_back(&tx);
    }
    std::ranges::sort(by_time, [](const Transmission* a, const Transmission* b) {
        return a->timestamp != b->timestamp ? a->timestamp < b->timestamp : a->packet_id < b->packet_id;
    });

    struct Indexed {
        std::size_t index;
        RejectedReception reject;
    };
    std::vector<Indexed> rejects;

    // Matched reception index -> transmission.
    struct Match {
        std::size_t rx_index;
        const Transmission* tx;
    };
    std::vector<Match> matches;
    matches.reserve(rxs.size());

    for (std::size_t i = 0; i < rxs.size(); ++i) {
        const auto& rx = rxs[i];
        if (rx.packet_id) {
            auto it = by_id.find(*rx.packet_id);
            if (it == by_id.end()) {
                rejects.push_back({i, {rx, RejectReason::UnknownPacket, std::nullopt}});
            } else {
                matches.push_back({i, it->second});
            }
            continue;
        }

        const auto lo = rx.timestamp - policy.match_window;
        const auto hi = rx.timestamp + policy.match_window;
        auto it = std::ranges::lower_bound(by_time, lo, {}, [](const Transmission* t) { return t->timestamp; });
        const Transmission* best = nullptr;
        std::chrono::milliseconds best_gap{};
        bool tie = false;
        for (; it != by_time.end() && (*it)->timestamp <= hi; ++it) {
            const auto gap = std::chrono::abs((*it)->timestamp - rx.timestamp);
            if (best == nullptr || gap < best_gap) {
                best = *it;
                best_gap = gap;
                tie = false;
            } else if (gap == best_gap) {
                tie = true;
            }
        }
        if (best == nullptr) {
            rejects.push_back({i, {rx, RejectReason::NoMatch, std::nullopt}});
        } else if (tie) {
            rejects.push_back({i, {rx, RejectReason::Ambiguous, std::nullopt}});
        } else {
            matches.push_back({i, best});
        }
    }

    // Keep the highest-SNR copy of every (packet, gateway) pair; the earliest
    // input row wins ties.
    std::map<std::pair<std::uint64_t, std::string_view>, std::size_t> keeper;
    for (std::size_t m = 0; m < matches.size(); ++m) {
        const auto key = std::make_pair(matches[m].tx->packet_id, std::string_view(rxs[matches[m].rx_index].gateway_id));
        auto [it, inserted] = keeper.emplace(key, m);
        if (inserted) {
            continue;
        }
        const auto& incumbent = rxs[matches[it->second].rx_index];
        const auto& challenger = rxs[matches[m].rx_index];
        std::size_t loser = m;
        if (challenger.snr_db > incumbent.snr_db) {
            loser = it->second;
            it->second = m;
        }
        rejects.push_back({matches[loser].rx_index,
                           {rxs[matches[loser].rx_index], RejectReason::Duplicate, matches[loser].tx->packet_id}});
    }

    JoinResult result;
    result.samples.reserve(keeper.size());
    for (const auto& [key, m] : keeper) {
        const auto& rx = rxs[matches[m].rx_index];
        const auto& tx = *matches[m].tx;
        const auto* gw = gws.find(rx.gateway_id);
        const double d = link_distance_3d(tx.position, gw->position);
        result.samples.push_back(
            make_link_sample(tx.packet_id, rx.gateway_id, rx.timestamp, d, rx.rssi_dbm, rx.snr_db, rx.sf,
                             tx.tx_power_dbm));
    }
    std::ranges::sort(result.samples, [](const LinkSample& a, const LinkSample& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        if (a.gateway_id != b.gateway_id) return a.gateway_id < b.gateway_id;
        return a.packet_id < b.packet_id;
    });

    std::ranges::sort(rejects, {}, &Indexed::index);
    result.rejects.reserve(rejects.size());
    for (auto& r : rejects) {
        result.rejects.push_back(std::move(r.reject));
    }
    return result;
}

}  // namespace lwcov
