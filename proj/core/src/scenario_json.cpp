#include "json.hpp"

#include "lwcov/error.hpp"
#include "lwcov/synth.hpp"

namespace lwcov {

namespace {

using ordered_json = nlohmann::ordered_json;

GeoPoint point_from(const nlohmann::json& j) {
    return GeoPoint(j.at("lat_deg").get<double>(), j.at("lon_deg").get<double>(), j.value("alt_m", 0.0));
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        Scenario s;
        s.seed = j.value("seed", s.seed);
        s.packet_interval_s = j.value("packet_interval_s", s.packet_interval_s);
        if (j.contains("packet_count") && !j["packet_count"].is_null()) {
            s.packet_count = j["packet_count"].get<std::size_t>();
        }
        s.tx_power_dbm = j.value("tx_power_dbm", s.tx_power_dbm);
        s.noise_floor_dbm = j.value("noise_floor_dbm", s.noise_floor_dbm);
        if (j.contains("channel")) {
            const auto& c = j["channel"];
            s.channel.intercept_a_db = c.at("intercept_a_db").get<double>();
            s.channel.exponent_n = c.at("exponent_n").get<double>();
            s.channel.sigma_db = c.at("sigma_db").get<double>();
        }
        if (j.contains("sf_schedule")) {
            s.sf_schedule.clear();
            for (const auto& dr : j["sf_schedule"]) {
                s.sf_schedule.push_back(parse_data_rate(dr.get<std::string>()));
            }
        }
        for (const auto& g : j.at("gateways")) {
            s.gateways.push_back({g.at("gateway_id").get<std::string>(), point_from(g),
                                  g.value("environment_tag", std::string{})});
        }
        for (const auto& w : j.at("trajectory")) {
            s.trajectory.push_back({parse_timestamp(w.at("timestamp_utc").get<std::string>()), point_from(w)});
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid scenario JSON: ") + e.what());
    }
}

std::string to_json(const Scenario& s) {
    ordered_json j;
    j["seed"] = s.seed;
    j["packet_interval_s"] = s.packet_interval_s;
    if (s.packet_count) {
        j["packet_count"] = *s.packet_count;
    }
    j["tx_power_dbm"] = s.tx_power_dbm;
    j["noise_floor_dbm"] = s.noise_floor_dbm;
    j["channel"] = {{"intercept_a_db", s.channel.intercept_a_db},
                    {"exponent_n", s.channel.exponent_n},
                    {"sigma_db", s.channel.sigma_db}};
    auto& schedule = j["sf_schedule"] = ordered_json::array();
    for (DataRate dr : s.sf_schedule) {
        schedule.push_back(std::string(to_string(dr)));
    }
    auto& gws = j["gateways"] = ordered_json::array();
    for (const auto& g : s.gateways) {
        gws.push_back({{"gateway_id", g.gateway_id},
                       {"lat_deg", g.position.lat_deg()},
                       {"lon_deg", g.position.lon_deg()},
                       {"alt_m", g.position.alt_m()},
                       {"environment_tag", g.environment_tag}});
    }
    auto& traj = j["trajectory"] = ordered_json::array();
    for (const auto& w : s.trajectory) {
        traj.push_back({{"timestamp_utc", format_timestamp(w.timestamp)},
                        {"lat_deg", w.position.lat_deg()},
                        {"lon_deg", w.position.lon_deg()},
                        {"alt_m", w.position.alt_m()}});
    }
    return j.dump(2) + "\n";
}

}  // namespace lwcov
