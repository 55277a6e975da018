#ifndef VARMA_SIM_HPP
#define VARMA_SIM_HPP

#include <cstdint>

#include "varma/armapq.hpp"

namespace varma {

struct SimConfig {
    long horizon = 500;     // T
    int truncation = 200;   // J, two-sided truncation of the coefficient sum
    int burn_guard = 10;    // indices near the window edge excluded from residual checks
    std::uint64_t seed = 0;
};

struct SimPath {
    std::vector<Vec> y;  // Y_0 .. Y_{T-1}
    std::vector<Vec> z;  // Z aligned with y: z[t] is Z_t for t = 0 .. T-1
};

/// Truncated two-sided evaluation of Y_t = const + sum_{|j| <= J} kernel_j
/// Z_{t-j}; the noise harness pre-generates the future samples the
/// anticausal terms consume. Deterministic given cfg.seed.
SimPath simulate_path(const NoiseModel& noise, const SolutionCoeffs& coeffs, const SimConfig& cfg);

/// Max over interior t of || Y_t - sum_k Psi_k Y_{t-k} - sum_k Theta_k Z_{t-k} ||.
double residual_check(const ArmapqModel& model, const SimPath& path, const SimConfig& cfg);

/// Biased autocovariance estimator gamma(h) = (1/T) sum (Y_{t+h}-mean)(Y_t-mean)*.
std::vector<Mat> autocov_empirical(const std::vector<Vec>& y, int max_lag);

}  // namespace varma

#endif
