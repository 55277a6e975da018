#ifndef VARMA_ARMA1Q_HPP
#define VARMA_ARMA1Q_HPP

#include <map>
#include <optional>

#include "varma/jordan.hpp"
#include "varma/noise.hpp"
#include "varma/report.hpp"

namespace varma {

struct Arma1qModel {
    Mat psi1;                 // m x m
    std::vector<Mat> thetas;  // Theta_0 .. Theta_q, each m x d
    NoiseModel noise;
    std::optional<JordanForm> user_jordan;  // bypass for adversarial numerics

    int m() const { return static_cast<int>(psi1.rows()); }
    int d() const { return static_cast<int>(thetas.at(0).cols()); }
    int q() const { return static_cast<int>(thetas.size()) - 1; }
};

/// B_h = sum_{k=0..q} Phi_h^{q-k} I_h S^{-1} Theta_k.
Mat block_test_matrix(const JordanForm& form, int h, const std::vector<Mat>& thetas);

/// Eigenvalue classification against the unit circle at tol_circle;
/// `uncertain` is set when the modulus falls in the tolerance band but is not
/// exactly on the circle at working precision.
CircleCase classify_eigenvalue(cx lambda, double tol_circle, bool* uncertain);

StationarityReport check_existence_1q(const Arma1qModel& model, double tol_circle = 1e-7);

/// Per-block solution series by eigenvalue case, assembled through S: the
/// solution is Y_t = constant + sum_j coeffs[j] Z_{t-j}.
struct SolutionCoeffs {
    Vec constant;            // m (pq path: g - (sum_j M_j) (v^T,u^T)^T)
    std::map<int, Mat> coeffs;  // lag j -> m x d kernel applied to Z_{t-j}
};

SolutionCoeffs solution_coeffs_1q(const Arma1qModel& model, int j_lo, int j_hi,
                                  double tol_circle = 1e-7);

bool is_unique_1q(const Arma1qModel& model, double tol_circle = 1e-7);

/// Corollary specializations; empty when the eigenvalue precondition fails.
std::optional<bool> cor1_check(const Arma1qModel& model, double tol_circle = 1e-7);
std::optional<bool> cor2_check(const Arma1qModel& model, double tol_circle = 1e-7);

}  // namespace varma

#endif
