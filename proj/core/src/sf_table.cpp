#include "lwcov/sf_table.hpp"

#include <string>

#include "lwcov/error.hpp"

namespace lwcov {

const SfRow& sf_row(int sf) {
    if (sf < kMinSf || sf > kMaxSf) {
        throw ValidationError("spreading factor " + std::to_string(sf) + " outside [6, 12]");
    }
    return kSfTable[static_cast<std::size_t>(sf - kMinSf)];
}

double snr_threshold(int sf) { return sf_row(sf).snr_threshold_db; }

std::uint32_t chips_per_symbol(int sf) { return sf_row(sf).chips_per_symbol; }

bool is_demodulable(int sf, double snr_db) { return snr_db >= snr_threshold(sf); }

SfBandwidth dr_to_sf(DataRate dr) noexcept {
    switch (dr) {
        case DataRate::DR0: return {10, 125'000.0};
        case DataRate::DR1: return {9, 125'000.0};
        case DataRate::DR2: return {8, 125'000.0};
        case DataRate::DR3: return {7, 125'000.0};
    }
    return {10, 125'000.0};
}

DataRate sf_to_dr(int sf) {
    for (DataRate dr : kAllDataRates) {
        if (dr_to_sf(dr).sf == sf) {
            return dr;
        }
    }
    throw ValidationError("no 125 kHz data rate uses SF" + std::to_string(sf));
}

std::string_view to_string(DataRate dr) noexcept {
    switch (dr) {
        case DataRate::DR0: return "DR0";
        case DataRate::DR1: return "DR1";
        case DataRate::DR2: return "DR2";
        case DataRate::DR3: return "DR3";
    }
    return "DR?";
}

DataRate parse_data_rate(std::string_view text) {
    for (DataRate dr : kAllDataRates) {
        if (text == to_string(dr)) {
            return dr;
        }
    }
    throw ValidationError("unknown data rate '" + std::string(text) + "' (expected DR0-DR3)");
}

}  // namespace lwcov
