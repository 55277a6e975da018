#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "varma/model_io.hpp"
#include "varma/sim.hpp"

namespace {

using namespace varma;

constexpr int kExitExists = 0;
constexpr int kExitError = 1;
constexpr int kExitNotExists = 2;
constexpr int kExitBoundary = 3;

void write_csv_row(std::ostream& os, long t, const Vec& y) {
    os << t;
    for (int i = 0; i < y.size(); ++i) {
        os.precision(17);
        os << "," << y(i).real() << "," << y(i).imag();
    }
    os << "\n";
}

Arma1qModel to_1q(const ArmapqModel& model) {
    return Arma1qModel{model.psis.at(0), model.thetas, model.noise, std::nullopt};
}

int cmd_analyze(const std::string& model_path, const std::string& order, double tol_circle_flag,
                const std::string& json_out) {
    LoadedModel loaded = load_model_file(model_path);
    const double tol_circle = tol_circle_flag > 0 ? tol_circle_flag : loaded.tol.circle;
    loaded.tol.circle = tol_circle;

    const bool use_1q = order == "1q" || (order == "auto" && loaded.model.p() == 1);
    StationarityReport rep;
    if (use_1q) {
        rep = check_existence_1q(to_1q(loaded.model), tol_circle);
        rep.unique = rep.unique && is_unique_1q(to_1q(loaded.model), tol_circle);
    } else {
        rep = check_existence_pq(loaded.model, tol_circle);
    }

    std::cout << "strictly stationary solution: " << (rep.exists_strict ? "exists" : "does not exist");
    if (rep.boundary_uncertain) std::cout << " (boundary-uncertain)";
    std::cout << "\nunique: " << (rep.unique ? "yes" : "no") << "\n";
    if (rep.failing_condition != FailingCondition::none) {
        std::string name = to_string(rep.failing_condition);
        if (use_1q && rep.failing_condition == FailingCondition::mean_equation) name = "condition_iii";
        std::cout << "failing condition: " << name << " (" << rep.failing_detail << ")\n";
    }
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) {
            std::cerr << "cannot write report: " << json_out << "\n";
            return kExitError;
        }
        out << report_to_json(rep, loaded.tol).dump(2) << "\n";
    }
    if (rep.boundary_uncertain) return kExitBoundary;
    return rep.exists_strict ? kExitExists : kExitNotExists;
}

int cmd_laurent(const std::string& model_path, int jmin, int jmax, const std::string& csv_out) {
    LoadedModel loaded = load_model_file(model_path);
    const auto split = loaded.model.noise.unitary_split();
    const MatrixPoly P = loaded.model.P();
    const MatrixPoly Qt = build_Qtilde(loaded.model.Q(), split);
    const auto rem = is_removable(P, Qt, loaded.tol.circle, loaded.tol.poly_zero);
    if (!rem.removable) {
        std::cerr << "non-removable unit-circle singularity: " << rem.reason << "\n";
        return kExitNotExists;
    }
    LaurentSeries series = laurent_coeffs(P, Qt, jmin, jmax);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!csv_out.empty()) {
        file.open(csv_out);
        if (!file) {
            std::cerr << "cannot write: " << csv_out << "\n";
            return kExitError;
        }
        os = &file;
    }
    os->precision(17);
    *os << "j,norm";
    for (int i = 0; i < P.rows(); ++i)
        for (int c = 0; c < Qt.cols(); ++c) *os << ",re(M_" << i + 1 << c + 1 << "),im(M_" << i + 1 << c + 1 << ")";
    *os << "\n";
    for (int j = jmin; j <= jmax; ++j) {
        *os << j << "," << series.norm_at(j);
        const Mat& M = series.at(j);
        for (int i = 0; i < M.rows(); ++i)
            for (int c = 0; c < M.cols(); ++c) *os << "," << M(i, c).real() << "," << M(i, c).imag();
        *os << "\n";
    }
    return kExitExists;
}

int cmd_simulate(const std::string& model_path, long T, int J, std::uint64_t seed,
                 const std::string& csv_out) {
    LoadedModel loaded = load_model_file(model_path);
    SimConfig cfg;
    cfg.horizon = T;
    cfg.truncation = J;
    cfg.seed = seed;

    SolutionCoeffs coeffs;
    if (loaded.model.p() == 1) {
        Arma1qModel m1 = to_1q(loaded.model);
        StationarityReport rep = check_existence_1q(m1, loaded.tol.circle);
        if (!rep.exists_strict) {
            std::cerr << "no strictly stationary solution (" << to_string(rep.failing_condition)
                      << ")\n";
            return kExitNotExists;
        }
        coeffs = solution_coeffs_1q(m1, -J, J, loaded.tol.circle);
    } else {
        StationarityReport rep = check_existence_pq(loaded.model, loaded.tol.circle);
        if (!rep.exists_strict) {
            std::cerr << "no strictly stationary solution (" << to_string(rep.failing_condition)
                      << ")\n";
            return kExitNotExists;
        }
        coeffs = solution_coeffs_pq(loaded.model, -J, J, loaded.tol.circle).as_kernel(loaded.model);
    }

    SimPath path = simulate_path(loaded.model.noise, coeffs, cfg);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!csv_out.empty()) {
        file.open(csv_out);
        if (!file) {
            std::cerr << "cannot write: " << csv_out << "\n";
            return kExitError;
        }
        os = &file;
    }
    *os << "t";
    const int m = loaded.model.m();
    for (int i = 1; i <= m; ++i) *os << ",re(Y_" << i << "),im(Y_" << i << ")";
    *os << "\n";
    for (long t = 0; t < T; ++t) write_csv_row(*os, t, path.y[t]);

    std::cerr << "max interior residual: " << residual_check(loaded.model, path, cfg) << "\n";
    return kExitExists;
}

int cmd_coprime(const std::string& model_path) {
    LoadedModel loaded = load_model_file(model_path);
    const auto split = loaded.model.noise.unitary_split();
    const MatrixPoly P = loaded.model.P();
    const MatrixPoly Qt = build_Qtilde(loaded.model.Q(), split);
    const GcldResult g = gcld(P, Qt, loaded.tol.poly_zero);
    CPoly det = det_poly(g.R);
    det.trim(1e-9);
    const bool coprime = is_unimodular(g.R, loaded.tol.poly_zero);
    std::cout << "gcld determinant degree: " << std::max(det.degree(), 0) << "\n"
              << "left-coprime: " << (coprime ? "yes" : "no") << "\n";
    return coprime ? kExitExists : kExitNotExists;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("ARMA_STATIONARITY_THREADS")) {
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));
    }

    CLI::App app{"Stationarity analysis of multivariate ARMA(p,q) equations with i.i.d. noise"};
    app.require_subcommand(1);

    std::string model_path, order = "auto", json_out, csv_out;
    double tol_circle = -1;
    int jmin = 0, jmax = 30, trunc = 200;
    long horizon = 1000;
    std::uint64_t seed = 0;

    auto* analyze = app.add_subcommand("analyze", "existence / uniqueness verdicts");
    analyze->add_option("model", model_path)->required();
    analyze->add_option("--order", order)->check(CLI::IsMember({"auto", "1q", "pq"}));
    analyze->add_option("--tol-circle", tol_circle);
    analyze->add_option("--json", json_out);

    auto* laurent = app.add_subcommand("laurent", "Laurent coefficients of P^{-1} Qtilde");
    laurent->add_option("model", model_path)->required();
    laurent->add_option("--jmin", jmin);
    laurent->add_option("--jmax", jmax);
    laurent->add_option("--csv", csv_out);

    auto* simulate = app.add_subcommand("simulate", "simulate the constructed solution");
    simulate->add_option("model", model_path)->required();
    simulate->add_option("--T", horizon);
    simulate->add_option("--J", trunc);
    simulate->add_option("--seed", seed);
    simulate->add_option("--csv", csv_out);

    auto* coprime = app.add_subcommand("coprime", "left-coprimeness of P and Qtilde");
    coprime->add_option("model", model_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(model_path, order, tol_circle, json_out);
        if (app.got_subcommand(laurent)) return cmd_laurent(model_path, jmin, jmax, csv_out);
        if (app.got_subcommand(simulate)) return cmd_simulate(model_path, horizon, trunc, seed, csv_out);
        if (app.got_subcommand(coprime)) return cmd_coprime(model_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
