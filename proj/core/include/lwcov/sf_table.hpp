#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace lwcov {

inline constexpr int kMinSf = 6;
inline constexpr int kMaxSf = 12;

/// SX1276 demodulation limits per spreading factor.
struct SfRow {
    int sf;
    std::uint32_t chips_per_symbol;
    double snr_threshold_db;
};

inline constexpr std::array<SfRow, 7> kSfTable{{
    {6, 64, -5.0},
    {7, 128, -7.5},
    {8, 256, -10.0},
    {9, 512, -12.5},
    {10, 1024, -15.0},
    {11, 2048, -17.5},
    {12, 4096, -20.0},
}};

inline constexpr std::span<const SfRow> sf_table() noexcept { return kSfTable; }

/// Throws ValidationError for sf outside [6, 12].
const SfRow& sf_row(int sf);
double snr_threshold(int sf);
std::uint32_t chips_per_symbol(int sf);

/// True when snr_db reaches the SF's threshold (the threshold itself counts).
bool is_demodulable(int sf, double snr_db);

/// US915 uplink data rates at 125 kHz.
enum class DataRate : std::uint8_t { DR0 = 0, DR1 = 1, DR2 = 2, DR3 = 3 };

inline constexpr std::array<DataRate, 4> kAllDataRates{DataRate::DR0, DataRate::DR1, DataRate::DR2,
                                                       DataRate::DR3};

struct SfBandwidth {
    int sf;
    double bandwidth_hz;

    friend constexpr bool operator==(const SfBandwidth&, const SfBandwidth&) = default;
};

SfBandwidth dr_to_sf(DataRate dr) noexcept;

/// Inverse of dr_to_sf for 125 kHz channels; throws ValidationError if no DR maps to sf.
DataRate sf_to_dr(int sf);

std::string_view to_string(DataRate dr) noexcept;
/// Accepts "DR0".."DR3"; throws ValidationError otherwise.
DataRate parse_data_rate(std::string_view text);

}  // namespace lwcov
