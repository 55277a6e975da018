#ifndef VARMA_RATIONAL_HPP
#define VARMA_RATIONAL_HPP

#include <map>
#include <string>
#include <vector>

#include "varma/poly.hpp"

namespace varma {

/// Windowed two-sided coefficient sequence of a matrix function analytic on
/// an annulus around |z| = 1, with a fitted geometric decay bound
/// ||M_j|| <= C rho^|j| over the window tail.
struct LaurentSeries {
    int j_min = 0;
    int j_max = -1;
    std::vector<Mat> coeffs;  // coeffs[j - j_min]
    double decay_C = 0.0;
    double decay_rho = 1.0;

    bool empty() const { return j_max < j_min; }
    const Mat& at(int j) const { return coeffs[j - j_min]; }
    Mat at_or_zero(int j, int rows, int cols) const;
    double norm_at(int j) const;
};

/// Zeroes of det P within tol of the unit circle, with multiplicities.
std::vector<std::pair<cx, int>> unit_circle_singularities(const MatrixPoly& P, double tol = 1e-7);

struct RemovabilityResult {
    bool removable = false;
    MatrixPoly numerator;    // Adj(P) Qt with all unit-circle det-P factors deflated
    CPoly denominator;       // det P with the same factors deflated
    // set when not removable:
    int offending_row = -1;
    int offending_col = -1;
    cx offending_root;
    std::string reason;
};

/// Theorem-style removability check: every entry of Adj(P) Qt must vanish at
/// each unit-circle root of det P to at least the root's multiplicity.
RemovabilityResult is_removable(const MatrixPoly& P, const MatrixPoly& Qt, double tol = 1e-7,
                                double zero_tol = 1e-9);

/// Laurent coefficients of P^{-1} Qt over [j_min, j_max], via FFT sampling of
/// the deflated numerator/denominator on |z| = 1 with aliasing control.
LaurentSeries laurent_coeffs(const MatrixPoly& P, const MatrixPoly& Qt, int j_min, int j_max,
                             double tol = 1e-10);

/// Independent causal oracle: requires det P nonzero on the closed unit disk;
/// M_j from the power-series recursion M_j = sum_k Psi_k M_{j-k} + Qt_j.
LaurentSeries causal_coeffs(const std::vector<Mat>& psis, const MatrixPoly& Qt, int j_max);

/// Max residual of the defining convolution sum_k P_k M_{j-k} - Qt_j over the
/// interior of the stored window.
double convolution_residual(const MatrixPoly& P, const MatrixPoly& Qt, const LaurentSeries& M);

}  // namespace varma

#endif
