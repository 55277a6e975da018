#ifndef VARMA_ARMAPQ_HPP
#define VARMA_ARMAPQ_HPP

#include <optional>

#include "varma/arma1q.hpp"
#include "varma/noise.hpp"
#include "varma/rational.hpp"
#include "varma/report.hpp"

namespace varma {

struct ArmapqModel {
    std::vector<Mat> psis;    // Psi_1 .. Psi_p, m x m
    std::vector<Mat> thetas;  // Theta_0 .. Theta_q, m x d
    NoiseModel noise;

    int m() const { return static_cast<int>(psis.at(0).rows()); }
    int d() const { return static_cast<int>(thetas.at(0).cols()); }
    int p() const { return static_cast<int>(psis.size()); }
    int q() const { return static_cast<int>(thetas.size()) - 1; }

    MatrixPoly P() const { return MatrixPoly::ar_char(psis, m()); }
    MatrixPoly Q() const { return MatrixPoly::ma_char(thetas); }
};

struct CompanionEmbedding {
    Mat phi;                       // mp x mp block companion
    std::vector<Mat> theta_unders; // mp x d, (Theta_k^T, 0, ..., 0)^T
};

CompanionEmbedding embed_companion(const ArmapqModel& model);

/// Qtilde(z) = Q(z) U* diag(Id_s, 0) from the noise model's unitary split.
MatrixPoly build_Qtilde(const ArmapqModel& model);
MatrixPoly build_Qtilde(const MatrixPoly& Q, const UnitarySplit& split);

StationarityReport check_existence_pq(const ArmapqModel& model, double tol_circle = 1e-7);

struct PqSolution {
    Vec g;
    Vec v;
    LaurentSeries series;  // Laurent coefficients M_j of P^{-1} Qtilde
    /// Same data in simulation form: Y_t = constant + sum_j kernel[j] Z_{t-j}.
    SolutionCoeffs as_kernel(const ArmapqModel& model) const;
};

PqSolution solution_coeffs_pq(const ArmapqModel& model, int j_lo = -40, int j_hi = 60,
                              double tol_circle = 1e-7);

struct WeakVerdict {
    bool exists = false;
    std::string reason;
    std::optional<Vec> g;
    std::optional<LaurentSeries> series;  // coefficients of eq-weakly2
};

/// Weak-stationarity check for weak white noise with the given mean and
/// (positive semidefinite) covariance.
WeakVerdict check_weak(const ArmapqModel& model, const Vec& mean, const Mat& covariance,
                       double tol_circle = 1e-7);

enum class CausalVerdict { exists, not_exists, not_applicable };

/// Theorem on causal solutions; requires left-coprimeness of P and Qtilde,
/// otherwise not_applicable.
CausalVerdict check_causal(const ArmapqModel& model, double tol_circle = 1e-7);

/// Necessary determinant-ratio condition (both the Gram form and, when d = m,
/// the plain det form).
bool cor3_necessary(const ArmapqModel& model, double tol_circle = 1e-7);

/// Laurent coefficients reconstructed through the Jordan decomposition of the
/// companion matrix (the N_j path), stacked mp x d.
LaurentSeries jordan_path_coeffs(const ArmapqModel& model, int j_lo, int j_hi,
                                 double tol_circle = 1e-7);

/// Max deviation over the window between (M_j^T, ..., M_{j-p+1}^T)^T and
/// N_j U* diag(Id_s, 0).
double cross_check_lemma3(const ArmapqModel& model, int j_lo = -10, int j_hi = 20,
                          double tol_circle = 1e-7);

/// Agreement of the strict and weak analyzers under finite-variance noise.
bool check_strict_weak_equivalence(const ArmapqModel& model, double tol_circle = 1e-7);

/// Matrix-valued-noise stacking: d' independent copies on the block diagonal.
ArmapqModel stack_matrix_noise(const ArmapqModel& model, int d_prime);

}  // namespace varma

#endif
