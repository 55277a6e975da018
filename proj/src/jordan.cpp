#include "varma/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace varma {

Mat JordanForm::J() const {
    const int m = dim();
    Mat j = Mat::Zero(m, m);
    for (const auto& b : blocks) {
        const int r = b.start_row - 1;
        for (int i = 0; i < b.size; ++i) {
            j(r + i, r + i) = b.lambda;
            if (i + 1 < b.size) j(r + i + 1, r + i) = cx(1);
        }
    }
    return j;
}

Mat JordanForm::block_selector(int h) const {
    if (h < 0 || h >= static_cast<int>(blocks.size()))
        throw std::out_of_range("block_selector: index out of range");
    const auto& b = blocks[h];
    Mat sel = Mat::Zero(b.size, dim());
    for (int i = 0; i < b.size; ++i) sel(i, b.start_row - 1 + i) = cx(1);
    return sel;
}

namespace {

// Orthonormal basis of the nullspace of B, singular values below tol treated
// as zero.
Mat nullspace(const Mat& B, double tol) {
    Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return svd.matrixV().rightCols(B.cols() - rank);
}

// Columns of C orthogonalized against the columns of W (assumed orthonormal)
// and each other; returns up to `want` surviving directions, strongest first.
Mat independent_directions(const Mat& C, const Mat& W, int want, double tol) {
    Mat proj = C;
    if (W.cols() > 0) proj -= W * (W.adjoint() * C);
    // Column-pivoted QR picks the most independent candidates.
    Eigen::ColPivHouseholderQR<Mat> qr(proj);
    qr.setThreshold(tol);
    const int r = std::min<int>(static_cast<int>(qr.rank()), want);
    Mat q = qr.householderQ();
    Mat out(C.rows(), r);
    // Recover the actual candidate columns in pivot order, re-orthogonalized.
    Mat basis(C.rows(), 0);
    int taken = 0;
    for (int k = 0; k < proj.cols() && taken < r; ++k) {
        Vec v = proj.col(qr.colsPermutation().indices()(k));
        if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
        if (W.cols() > 0) v -= W * (W.adjoint() * v);
        const double nrm = v.norm();
        if (nrm <= tol) continue;
        v /= nrm;
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v;
        out.col(taken++) = C.col(qr.colsPermutation().indices()(k));
    }
    return out.leftCols(taken);
}

std::vector<std::pair<cx, int>> cluster_eigenvalues(const Vec& eigs, double tol) {
    std::vector<std::pair<cx, int>> out;
    std::vector<bool> used(eigs.size(), false);
    for (int i = 0; i < eigs.size(); ++i) {
        if (used[i]) continue;
        cx sum = eigs(i);
        int count = 1;
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            const cx rep = sum / static_cast<double>(count);
            for (int j = 0; j < eigs.size(); ++j) {
                if (used[j] || std::abs(eigs(j) - rep) >= tol) continue;
                sum += eigs(j);
                ++count;
                used[j] = true;
                grew = true;
            }
        }
        out.emplace_back(sum / static_cast<double>(count), count);
    }
    return out;
}

}  // namespace

JordanForm jordan_decompose(const Mat& A, double tol, double residual_limit) {
    if (A.rows() != A.cols()) throw std::invalid_argument("jordan_decompose: non-square input");
    const int m = static_cast<int>(A.rows());
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);

    Eigen::ComplexEigenSolver<Mat> es(A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("jordan_decompose: eigen solver failed");
    auto clusters = cluster_eigenvalues(es.eigenvalues(), tol * scale);

    Mat S(m, m);
    std::vector<JordanBlock> blocks;
    int col = 0;
    const double rank_tol = tol * scale;

    for (const auto& [lambda, mult] : clusters) {
        const Mat B = A - lambda * Mat::Identity(m, m);

        // Rank staircase: nullity of B^k for k = 1.. until it saturates at
        // the algebraic multiplicity.
        std::vector<Mat> null_bases;  // null_bases[k-1] spans ker(B^k)
        Mat Bk = Mat::Identity(m, m);
        int kmax = 0;
        int prev_nullity = 0;
        while (prev_nullity < mult && kmax < m) {
            Bk = Bk * B;
            Mat nb = nullspace(Bk, rank_tol);
            if (nb.cols() <= prev_nullity) break;  // staircase stalled
            null_bases.push_back(nb);
            prev_nullity = static_cast<int>(nb.cols());
            ++kmax;
        }
        if (prev_nullity != mult)
            throw std::runtime_error("jordan_decompose: rank staircase inconsistent with multiplicity");

        auto nullity = [&](int k) {
            if (k <= 0) return 0;
            return static_cast<int>(null_bases[std::min(k, kmax) - 1].cols());
        };
        auto blocks_ge = [&](int k) { return nullity(k) - nullity(k - 1); };

        // Chain tops, tallest blocks first. `mapped` holds images of already
        // selected chains at the current level, to keep new tops independent.
        std::vector<std::pair<Vec, int>> tops;  // (top vector, height)
        for (int k = kmax; k >= 1; --k) {
            const int need = blocks_ge(k) - (k < kmax ? blocks_ge(k + 1) : 0);
            if (need <= 0) continue;
            Mat occupied(m, 0);
            {
                std::vector<Vec> occ;
                for (const auto& [v, h] : tops) {
                    Vec w = v;
                    for (int i = 0; i < h - k; ++i) w = B * w;
                    occ.push_back(w);
                }
                Mat raw(m, static_cast<int>(occ.size()) + (k >= 2 ? nullity(k - 1) : 0));
                int c = 0;
                if (k >= 2) {
                    raw.leftCols(nullity(k - 1)) = null_bases[k - 2];
                    c = nullity(k - 1);
                }
                for (const auto& w : occ) raw.col(c++) = w;
                if (raw.cols() > 0) {
                    Eigen::HouseholderQR<Mat> qr(raw);
                    Mat q = qr.householderQ();
                    Eigen::ColPivHouseholderQR<Mat> rk(raw);
                    rk.setThreshold(rank_tol);
                    occupied = q.leftCols(std::min<int>(static_cast<int>(rk.rank()),
                                                        static_cast<int>(raw.cols())));
                }
            }
            Mat chosen = independent_directions(null_bases[k - 1], occupied, need, rank_tol);
            if (chosen.cols() < need)
                throw std::runtime_error("jordan_decompose: chain construction failed");
            for (int c = 0; c < need; ++c) tops.emplace_back(chosen.col(c).normalized(), k);
        }

        std::sort(tops.begin(), tops.end(),
                  [](const auto& a, const auto& b) { return a.second > b.second; });
        for (const auto& [v, h] : tops) {
            JordanBlock blk{lambda, h, col + 1};
            Vec w = v;
            for (int i = 0; i < h; ++i) {
                S.col(col++) = w;
                if (i + 1 < h) w = B * w;
            }
            blocks.push_back(blk);
        }
    }
    if (col != m) throw std::runtime_error("jordan_decompose: block sizes do not sum to dimension");

    JordanForm form;
    form.S = S;
    form.blocks = std::move(blocks);
    form.tol = tol;
    Eigen::FullPivLU<Mat> lu(S);
    if (!lu.isInvertible()) throw std::runtime_error("jordan_decompose: similarity matrix singular");
    form.S_inv = lu.inverse();
    form.reconstruction_residual = (S * form.J() * form.S_inv - A).norm() / std::max(A.norm(), 1e-300);
    if (form.reconstruction_residual > residual_limit)
        throw std::runtime_error("jordan_decompose: reconstruction residual " +
                                 std::to_string(form.reconstruction_residual) +
                                 " exceeds limit (ill-conditioned input)");
    return form;
}

Mat jordan_block_power(cx lambda, int size, long j) {
    if (j < 0 && std::abs(lambda) == 0.0)
        throw std::invalid_argument("jordan_block_power: negative power of nilpotent block");
    Mat out = Mat::Zero(size, size);
    const bool lambda_zero = std::abs(lambda) == 0.0;
    for (int i = 1; i <= size; ++i) {
        for (int l = 0; l <= i - 1; ++l) {
            if (j >= 0 && l > j) break;
            cx binom(1);
            for (int t = 0; t < l; ++t) binom *= cx(static_cast<double>(j - t)) / cx(static_cast<double>(t + 1));
            cx lam_pow;
            if (lambda_zero) {
                if (j - l != 0) continue;
                lam_pow = cx(1);
            } else {
                lam_pow = std::pow(lambda, cx(static_cast<double>(j - l)));
            }
            out(i - 1, i - l - 1) = binom * lam_pow;
        }
    }
    return out;
}

JordanForm from_upper_convention(const Mat& S_upper, const std::vector<JordanBlock>& blocks,
                                 const Mat& A) {
    // Reversing the columns within each block flips superdiagonal ones to
    // subdiagonal ones.
    Mat S = S_upper;
    for (const auto& b : blocks) {
        const int r = b.start_row - 1;
        S.middleCols(r, b.size) = S_upper.middleCols(r, b.size).rowwise().reverse();
    }
    JordanForm form;
    form.S = S;
    form.blocks = blocks;
    form.tol = 0.0;
    Eigen::FullPivLU<Mat> lu(S);
    if (!lu.isInvertible()) throw std::runtime_error("from_upper_convention: singular similarity matrix");
    form.S_inv = lu.inverse();
    form.reconstruction_residual =
        (S * form.J() * form.S_inv - A).norm() / std::max(A.norm(), 1e-300);
    return form;
}

}  // namespace varma
