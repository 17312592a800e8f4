#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cursedknight/band.hpp"

namespace cursedknight {

// Band specification schema:
//   {"family": "contamination"|"triangle"|"epsilon", "param": x}
//   {"custom": {"lower": [[x,y],...], "center": [[x,y],...] | "identity",
//               "upper": [[x,y],...]}}
inline DistributionBand band_from_json(const nlohmann::json& spec) {
    if (spec.contains("family")) {
        const std::string family = spec.at("family").get<std::string>();
        const double param = spec.at("param").get<double>();
        if (family == "contamination") return make_contamination_band(param);
        if (family == "triangle") return make_triangle_band(param);
        if (family == "epsilon") return make_epsilon_band(param);
        throw std::invalid_argument("unknown band family: " + family);
    }
    if (spec.contains("custom")) {
        const auto& custom = spec.at("custom");
        auto curve = [](const nlohmann::json& j, const char* which) {
            if (j.is_string() && j.get<std::string>() == "identity") return CdfCurve::identity();
            std::vector<std::pair<double, double>> knots;
            for (const auto& pt : j)
                knots.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
            return CdfCurve::piecewise_linear(std::move(knots), std::string("custom-") + which);
        };
        return make_custom_band(curve(custom.at("lower"), "lower"), curve(custom.at("center"), "center"),
                                curve(custom.at("upper"), "upper"), "custom",
                                /*relaxed_strictness=*/true);
    }
    throw std::invalid_argument("band spec needs either \"family\" or \"custom\"");
}

inline nlohmann::json band_to_json(const DistributionBand& band, int knots = 129) {
    nlohmann::json j;
    auto sample = [&](const CdfCurve& c) {
        nlohmann::json arr = nlohmann::json::array();
        for (int i = 0; i < knots; ++i) {
            const double x = static_cast<double>(i) / (knots - 1);
            arr.push_back({x, c(x)});
        }
        return arr;
    };
    j["custom"]["lower"] = sample(band.lower);
    j["custom"]["center"] = band.center.is_identity() ? nlohmann::json("identity") : sample(band.center);
    j["custom"]["upper"] = sample(band.upper);
    return j;
}

}  // namespace cursedknight
