#include "varma/sim.hpp"

#include <stdexcept>

namespace varma {

SimPath simulate_path(const NoiseModel& noise, const SolutionCoeffs& coeffs, const SimConfig& cfg) {
    const long T = cfg.horizon;
    const int J = cfg.truncation;
    for (const auto& [j, c] : coeffs.coeffs)
        if (j < -J || j > J)
            throw std::invalid_argument("simulate_path: coefficient outside the truncation window");

    // Z_t for t in [-J, T-1+J]; index shift J.
    const long total = T + 2 * J;
    const auto z_all = noise.sample(total, cfg.seed);
    const int m = static_cast<int>(coeffs.constant.size());

    SimPath path;
    path.y.reserve(T);
    path.z.reserve(T);
    for (long t = 0; t < T; ++t) {
        Vec y = coeffs.constant;
        for (const auto& [j, c] : coeffs.coeffs) y += c * z_all[t - j + J];
        path.y.push_back(std::move(y));
        path.z.push_back(z_all[t + J]);
    }
    (void)m;
    return path;
}

double residual_check(const ArmapqModel& model, const SimPath& path, const SimConfig& cfg) {
    if (path.y.size() != path.z.size()) throw std::invalid_argument("residual_check: misaligned paths");
    const int p = model.p(), q = model.q();
    const long T = static_cast<long>(path.y.size());
    const long lo = std::max<long>(p, std::max(q, cfg.burn_guard));
    double worst = 0;
    for (long t = lo; t < T; ++t) {
        Vec lhs = path.y[t];
        for (int k = 1; k <= p; ++k) lhs -= model.psis[k - 1] * path.y[t - k];
        Vec rhs = Vec::Zero(model.m());
        for (int k = 0; k <= q; ++k) rhs += model.thetas[k] * path.z[t - k];
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::vector<Mat> autocov_empirical(const std::vector<Vec>& y, int max_lag) {
    const long T = static_cast<long>(y.size());
    if (T == 0) throw std::invalid_argument("autocov_empirical: empty path");
    const int m = static_cast<int>(y[0].size());
    Vec mean = Vec::Zero(m);
    for (const auto& v : y) mean += v;
    mean /= static_cast<double>(T);
    std::vector<Mat> out;
    for (int h = 0; h <= max_lag; ++h) {
        Mat g = Mat::Zero(m, m);
        for (long t = 0; t + h < T; ++t) g += (y[t + h] - mean) * (y[t] - mean).adjoint();
        out.push_back(g / static_cast<double>(T));
    }
    return out;
}

}  // namespace varma
