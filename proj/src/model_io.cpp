#include "varma/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace varma {

using nlohmann::json;

namespace {

cx parse_complex(const json& j) {
    if (j.is_number()) return cx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return cx(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("complex scalar must be a number or [re, im]");
}

Mat parse_matrix(const json& j, int rows, int cols, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw std::invalid_argument(what + ": expected " + std::to_string(rows) + " rows");
    Mat out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            throw std::invalid_argument(what + ": expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c) out(i, c) = parse_complex(j[i][c]);
    }
    return out;
}

Vec parse_vector(const json& j, int n, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw std::invalid_argument(what + ": expected " + std::to_string(n) + " entries");
    Vec out(n);
    for (int i = 0; i < n; ++i) out(i) = parse_complex(j[i]);
    return out;
}

json complex_to_json(cx z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const Vec& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

}  // namespace

LoadedModel load_model(const json& doc) {
    const int m = doc.at("m").get<int>();
    const int d = doc.at("d").get<int>();
    const int p = doc.at("p").get<int>();
    const int q = doc.at("q").get<int>();
    if (m < 1 || d < 1 || p < 1 || q < 0) throw std::invalid_argument("invalid dimensions");

    std::vector<Mat> psis, thetas;
    const auto& psi_arr = doc.at("psi");
    if (static_cast<int>(psi_arr.size()) != p) throw std::invalid_argument("psi: expected p matrices");
    for (int k = 0; k < p; ++k) psis.push_back(parse_matrix(psi_arr[k], m, m, "psi[" + std::to_string(k) + "]"));
    const auto& th_arr = doc.at("theta");
    if (static_cast<int>(th_arr.size()) != q + 1)
        throw std::invalid_argument("theta: expected q+1 matrices");
    for (int k = 0; k <= q; ++k)
        thetas.push_back(parse_matrix(th_arr[k], m, d, "theta[" + std::to_string(k) + "]"));

    const auto& nj = doc.at("noise");
    const auto& comps_j = nj.at("components");
    const int n = static_cast<int>(comps_j.size());
    Mat L = nj.contains("L") ? parse_matrix(nj.at("L"), d, n, "noise.L")
                             : Mat(Mat::Identity(d, n));
    Vec c = nj.contains("c") ? parse_vector(nj.at("c"), d, "noise.c") : Vec(Vec::Zero(d));
    std::vector<NoiseComponent> comps;
    for (const auto& cj : comps_j) {
        NoiseComponent comp =
            make_component(noise_family_from_string(cj.at("family").get<std::string>()),
                           cj.value("params", 0.0));
        if (cj.contains("finite_log_moment")) comp.finite_log_moment = cj["finite_log_moment"].get<bool>();
        if (cj.contains("finite_variance")) comp.finite_variance = cj["finite_variance"].get<bool>();
        if (cj.contains("variance")) comp.variance = cj["variance"].get<double>();
        comps.push_back(comp);
    }

    LoadedModel out{ArmapqModel{std::move(psis), std::move(thetas),
                                NoiseModel(L, c, std::move(comps),
                                           doc.contains("tolerances")
                                               ? doc["tolerances"].value("rank", 0.0)
                                               : 0.0)},
                    Tolerances{}};
    if (doc.contains("tolerances")) {
        const auto& tj = doc["tolerances"];
        out.tol.circle = tj.value("circle", 1e-7);
        out.tol.rank = tj.value("rank", 0.0);
        out.tol.poly_zero = tj.value("poly_zero", 1e-9);
    }
    return out;
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json doc = json::parse(in);
    return load_model(doc);
}

json report_to_json(const StationarityReport& rep, const Tolerances& tol) {
    json out;
    out["exists_strict"] = rep.exists_strict;
    out["boundary_uncertain"] = rep.boundary_uncertain;
    out["unique"] = rep.unique;
    out["exists_weak"] = rep.exists_weak ? json(*rep.exists_weak) : json("not applicable");
    out["exists_causal"] = rep.exists_causal ? json(*rep.exists_causal) : json("not applicable");
    out["failing_condition"] = to_string(rep.failing_condition);
    if (!rep.failing_detail.empty()) out["failing_detail"] = rep.failing_detail;
    out["g"] = rep.g ? vector_to_json(*rep.g) : json(nullptr);
    out["v"] = rep.v ? vector_to_json(*rep.v) : json(nullptr);

    json blocks = json::array();
    for (const auto& bc : rep.block_conditions) {
        json b;
        b["h"] = bc.h + 1;
        b["lambda"] = complex_to_json(bc.lambda);
        b["case"] = to_string(bc.circle_case);
        b["pass"] = bc.pass;
        b["reason"] = bc.reason;
        b["boundary_uncertain"] = bc.boundary_uncertain;
        if (bc.alpha) b["alpha"] = vector_to_json(*bc.alpha);
        if (bc.f) b["f"] = vector_to_json(*bc.f);
        blocks.push_back(std::move(b));
    }
    out["block_conditions"] = std::move(blocks);

    if (rep.laurent) {
        json norms = json::array();
        for (int j = rep.laurent->j_min; j <= rep.laurent->j_max; ++j)
            norms.push_back({{"j", j}, {"norm", rep.laurent->norm_at(j)}});
        out["laurent"] = {{"j_min", rep.laurent->j_min},
                          {"j_max", rep.laurent->j_max},
                          {"decay_C", rep.laurent->decay_C},
                          {"decay_rho", rep.laurent->decay_rho},
                          {"norms", std::move(norms)}};
    }
    out["tolerances"] = {{"circle", tol.circle}, {"rank", tol.rank}, {"poly_zero", tol.poly_zero}};
    json diag;
    diag["jordan_residual"] = rep.jordan_residual;
    diag["warnings"] = rep.warnings;
    if (rep.branch_on_circle) diag["branch_on_circle"] = *rep.branch_on_circle;
    if (rep.branch_off_circle) diag["branch_off_circle"] = *rep.branch_off_circle;
    out["diagnostics"] = std::move(diag);
    return out;
}

}  // namespace varma
