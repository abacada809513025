#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lwcov/geo.hpp"
#include "lwcov/sf_table.hpp"
#include "lwcov/timestamp.hpp"

namespace lwcov {

inline constexpr double kDefaultTxPowerDbm = 20.0;
/// Links shorter than this are clamped before any logarithm is taken.
inline constexpr double kMinLinkDistanceM = 1.0;

struct Transmission {
    std::uint64_t packet_id = 0;
    Timestamp timestamp{};
    GeoPoint position{};
    DataRate data_rate = DataRate::DR0;
    double tx_power_dbm = kDefaultTxPowerDbm;
};

struct Reception {
    std::optional<std::uint64_t> packet_id;  // empty -> matched by timestamp
    std::string gateway_id;
    Timestamp timestamp{};
    double rssi_dbm = 0.0;
    double snr_db = 0.0;
    int sf = 7;
    double frequency_hz = 0.0;
    double bandwidth_hz = 125'000.0;
    int channel = 0;
    int rf_chain = 0;
};

struct GatewayRecord {
    std::string gateway_id;
    GeoPoint position{};
    std::string environment_tag;
};

/// Gateways keyed by id. Iteration order is lexicographic by id.
class GatewayRegistry {
public:
    /// Throws ValidationError on a duplicate id.
    void add(GatewayRecord record);

    const GatewayRecord* find(const std::string& id) const;
    bool contains(const std::string& id) const { return find(id) != nullptr; }
    std::size_t size() const noexcept { return gateways_.size(); }
    bool empty() const noexcept { return gateways_.empty(); }

    auto begin() const { return gateways_.begin(); }
    auto end() const { return gateways_.end(); }

private:
    std::map<std::string, GatewayRecord, std::less<>> gateways_;
};

struct LinkSample {
    std::uint64_t packet_id = 0;
    std::string gateway_id;
    Timestamp timestamp{};
    double distance_m = kMinLinkDistanceM;
    double rssi_dbm = 0.0;
    double snr_db = 0.0;
    int sf = 7;
    double tx_power_dbm = kDefaultTxPowerDbm;
    double path_loss_db = 0.0;  // tx_power_dbm - rssi_dbm
};

/// Builds a sample from raw measurements, applying the distance clamp and
/// the measured path loss identity.
LinkSample make_link_sample(std::uint64_t packet_id, std::string gateway_id, Timestamp timestamp,
                            double distance_m, double rssi_dbm, double snr_db, int sf,
                            double tx_power_dbm = kDefaultTxPowerDbm);

// ---------------------------------------------------------------------------
// Parsing

struct ParseOptions {
    /// Used for transmissions whose tx_power_dbm field is empty.
    double default_tx_power_dbm = kDefaultTxPowerDbm;
    /// Label used in ParseError messages.
    std::string source = "<input>";
};

std::vector<Transmission> parse_transmissions(std::istream& in, const ParseOptions& opts = {});
std::vector<Reception> parse_receptions(std::istream& in, const ParseOptions& opts = {});
GatewayRegistry parse_gateways(std::istream& in, const ParseOptions& opts = {});
/// Reads the samples.csv output of join_samples. tx_power_dbm is recovered
/// as path_loss_db + rssi_dbm.
std::vector<LinkSample> parse_samples(std::istream& in, const ParseOptions& opts = {});

void write_transmissions(std::ostream& out, std::span<const Transmission> txs);
void write_receptions(std::ostream& out, std::span<const Reception> rxs);
void write_gateways(std::ostream& out, const GatewayRegistry& gws);
void write_samples(std::ostream& out, std::span<const LinkSample> samples);

// ---------------------------------------------------------------------------
// Join

struct JoinPolicy {
    /// Maximum |t_rx - t_tx| for receptions without a packet id.
    std::chrono::milliseconds match_window{1250};
};

enum class RejectReason { NoMatch, UnknownPacket, Ambiguous, Duplicate };

std::string_view to_string(RejectReason r) noexcept;

struct RejectedReception {
    Reception reception;
    RejectReason reason;
    std::optional<std::uint64_t> matched_packet_id;  // set for duplicates
};

struct JoinResult {
    std::vector<LinkSample> samples;  // sorted by (timestamp, gateway_id, packet_id)
    std::vector<RejectedReception> rejects;  // in input order
};

/// Matches each reception to one transmission and derives distance and path
/// loss. Throws UnknownGatewayError when any reception names a gateway that is
/// missing from the registry, and ValidationError on duplicate packet ids.
JoinResult join_samples(std::span<const Transmission> txs, std::span<const Reception> rxs,
                        const GatewayRegistry& gws, const JoinPolicy& policy = {});

void write_rejects(std::ostream& out, std::span<const RejectedReception> rejects);

}  // namespace lwcov
