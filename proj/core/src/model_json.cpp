#include "json.hpp"

#include "lwcov/error.hpp"
#include "lwcov/model.hpp"

namespace lwcov {

std::string to_json(const PathLossFit& fit) {
    nlohmann::ordered_json j;
    j["intercept_a_db"] = fit.model.intercept_a_db;
    j["exponent_n"] = fit.model.exponent_n;
    j["sigma_db"] = fit.model.sigma_db;
    j["reference_d0_m"] = fit.model.reference_d0_m();
    j["sample_count"] = fit.diagnostics.sample_count;
    j["mae_db"] = fit.diagnostics.mae_db;
    j["rmse_db"] = fit.diagnostics.rmse_db;
    return j.dump(2) + "\n";
}

PathLossFit path_loss_fit_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PathLossFit fit;
        fit.model.intercept_a_db = j.at("intercept_a_db").get<double>();
        fit.model.exponent_n = j.at("exponent_n").get<double>();
        fit.model.sigma_db = j.at("sigma_db").get<double>();
        if (j.contains("reference_d0_m") && j["reference_d0_m"].get<double>() != PathLossModel::kReferenceD0M) {
            throw ValidationError("model reference_d0_m must be 1.0");
        }
        if (fit.model.sigma_db < 0.0) {
            throw ValidationError("model sigma_db must be non-negative");
        }
        fit.diagnostics.sample_count = j.value("sample_count", std::size_t{0});
        fit.diagnostics.mae_db = j.value("mae_db", 0.0);
        fit.diagnostics.rmse_db = j.value("rmse_db", 0.0);
        return fit;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid model JSON: ") + e.what());
    }
}

}  // namespace lwcov
