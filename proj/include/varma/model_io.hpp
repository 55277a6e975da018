#ifndef VARMA_MODEL_IO_HPP
#define VARMA_MODEL_IO_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "varma/armapq.hpp"
#include "varma/report.hpp"

namespace varma {

struct Tolerances {
    double circle = 1e-7;
    double rank = 0.0;       // 0 = automatic
    double poly_zero = 1e-9;
};

struct LoadedModel {
    ArmapqModel model;
    Tolerances tol;
};

/// Parse the JSON model document (keys m, d, p, q, psi, theta, noise,
/// optional tolerances; complex scalars as [re, im]).
LoadedModel load_model(const nlohmann::json& doc);
LoadedModel load_model_file(const std::string& path);

nlohmann::json report_to_json(const StationarityReport& rep, const Tolerances& tol);

}  // namespace varma

#endif
