#ifndef VARMA_JORDAN_HPP
#define VARMA_JORDAN_HPP

#include <vector>

#include "varma/poly.hpp"

namespace varma {

struct JordanBlock {
    cx lambda;
    int size;
    int start_row;  // 1-based row index r_h of the block within J
};

/// Jordan canonical decomposition A = S J S^{-1} with ones on the FIRST
/// SUBDIAGONAL of each block (A s_i = lambda s_i + s_{i+1} inside a block).
struct JordanForm {
    Mat S;
    Mat S_inv;
    std::vector<JordanBlock> blocks;
    double tol;                  // eigenvalue clustering / rank tolerance used
    double reconstruction_residual;  // ||S J S^{-1} - A|| / ||A||

    int dim() const { return static_cast<int>(S.rows()); }
    Mat J() const;
    /// Selection matrix I_h: rows r_h .. r_{h+1}-1 of the identity.
    Mat block_selector(int h) const;
};

/// Numerical Jordan decomposition: Schur eigenvalues clustered at tol, block
/// sizes from the rank staircase of (A - lambda Id)^k, chains of generalized
/// eigenvectors for S. Throws when the reconstruction residual exceeds
/// residual_limit (ill-conditioned input).
JordanForm jordan_decompose(const Mat& A, double tol = 1e-7, double residual_limit = 1e-6);

/// Closed-form power of a single Jordan block: row i carries binom(j, l)
/// lambda^{j-l} at column i - l. Negative j uses generalized binomial
/// coefficients and requires lambda != 0.
Mat jordan_block_power(cx lambda, int size, long j);

/// Convert a Jordan form expressed in the upper-superdiagonal convention
/// (ones above the diagonal) to the lower-subdiagonal convention used here.
JordanForm from_upper_convention(const Mat& S_upper, const std::vector<JordanBlock>& blocks,
                                 const Mat& A);

}  // namespace varma

#endif
