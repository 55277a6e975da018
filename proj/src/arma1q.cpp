#include "varma/arma1q.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace varma {

namespace {

constexpr double kExactCircleTol = 1e-13;

Mat matrix_power(const Mat& A, int k) {
    Mat out = Mat::Identity(A.rows(), A.cols());
    for (int i = 0; i < k; ++i) out = out * A;
    return out;
}

}  // namespace

std::string to_string(FailingCondition c) {
    switch (c) {
        case FailingCondition::none: return "none";
        case FailingCondition::removability: return "removability";
        case FailingCondition::log_moment: return "log_moment";
        case FailingCondition::mean_equation: return "mean_equation";
    }
    return "?";
}

std::string to_string(CircleCase c) {
    switch (c) {
        case CircleCase::inside: return "inside";
        case CircleCase::outside: return "outside";
        case CircleCase::zero: return "zero";
        case CircleCase::unit_nontrivial: return "unit_nontrivial";
        case CircleCase::unit_one: return "unit_one";
    }
    return "?";
}

CircleCase classify_eigenvalue(cx lambda, double tol_circle, bool* uncertain) {
    if (uncertain) *uncertain = false;
    const double mod = std::abs(lambda);
    if (mod < tol_circle) return CircleCase::zero;
    const double dist = std::abs(mod - 1.0);
    if (dist < tol_circle) {
        if (uncertain && dist >= kExactCircleTol) *uncertain = true;
        return std::abs(lambda - cx(1)) < tol_circle ? CircleCase::unit_one
                                                     : CircleCase::unit_nontrivial;
    }
    return mod < 1.0 ? CircleCase::inside : CircleCase::outside;
}

Mat block_test_matrix(const JordanForm& form, int h, const std::vector<Mat>& thetas) {
    const auto& blk = form.blocks.at(h);
    const int q = static_cast<int>(thetas.size()) - 1;
    const Mat IS = form.block_selector(h) * form.S_inv;
    Mat B = Mat::Zero(blk.size, thetas[0].cols());
    for (int k = 0; k <= q; ++k)
        B += jordan_block_power(blk.lambda, blk.size, q - k) * IS * thetas[k];
    return B;
}

namespace {

JordanForm resolve_jordan(const Arma1qModel& model) {
    if (model.user_jordan) return *model.user_jordan;
    return jordan_decompose(model.psi1);
}

// Solve (Id - Phi_h) f = alpha by complete orthogonal decomposition; empty
// when inconsistent.
std::optional<Vec> solve_f(const JordanBlock& blk, const Vec& alpha) {
    const Mat A = Mat::Identity(blk.size, blk.size) - jordan_block_power(blk.lambda, blk.size, 1);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
    Vec f = cod.solve(alpha);
    if ((A * f - alpha).norm() > 1e-8 * std::max(1.0, alpha.norm())) return std::nullopt;
    return f;
}

}  // namespace

StationarityReport check_existence_1q(const Arma1qModel& model, double tol_circle) {
    StationarityReport rep;
    rep.tol_circle = tol_circle;
    JordanForm form = resolve_jordan(model);
    rep.jordan_residual = form.reconstruction_residual;

    bool all_pass = true;
    bool all_pass_off_branch = true;  // uncertain blocks re-judged off-circle
    bool any_uncertain = false;
    bool any_on_circle = false;

    for (int h = 0; h < static_cast<int>(form.blocks.size()); ++h) {
        const auto& blk = form.blocks[h];
        BlockCondition bc;
        bc.h = h;
        bc.lambda = blk.lambda;
        bc.B = block_test_matrix(form, h, model.thetas);
        bc.circle_case = classify_eigenvalue(blk.lambda, tol_circle, &bc.boundary_uncertain);
        any_uncertain = any_uncertain || bc.boundary_uncertain;

        bool off_branch_pass = true;
        switch (bc.circle_case) {
            case CircleCase::zero:
                bc.pass = true;  // the theorem imposes no condition at lambda = 0
                bc.reason = "lambda = 0: finite-sum solution, no noise condition";
                break;
            case CircleCase::inside:
            case CircleCase::outside:
                bc.pass = model.noise.image_has_finite_log_moment(bc.B);
                bc.reason = bc.pass ? "condition (i): finite log-moment of B_h Z_0"
                                    : "condition (i) fails: B_h Z_0 has infinite log-moment";
                break;
            case CircleCase::unit_nontrivial:
            case CircleCase::unit_one: {
                any_on_circle = true;
                bc.alpha = model.noise.image_is_constant(bc.B);
                if (!bc.alpha) {
                    bc.pass = false;
                    bc.reason = "condition (ii) fails: B_h Z_0 is not a.s. constant";
                } else if (bc.circle_case == CircleCase::unit_one &&
                           std::abs((*bc.alpha)(0)) > 1e-9 * std::max(1.0, bc.B.norm())) {
                    bc.pass = false;
                    bc.reason = "condition (iii) fails: alpha_{h,1} != 0";
                } else {
                    bc.pass = true;
                    bc.reason = bc.circle_case == CircleCase::unit_one
                                    ? "condition (iii): B_h Z_0 a.s. constant with alpha_1 = 0"
                                    : "condition (ii): B_h Z_0 a.s. constant";
                    bc.f = solve_f(blk, *bc.alpha);
                    if (!bc.f) {
                        bc.pass = false;
                        bc.reason = "unit-case solve (Id - Phi) f = alpha infeasible";
                    }
                }
                off_branch_pass = model.noise.image_has_finite_log_moment(bc.B);
                break;
            }
        }

        if (!bc.pass && all_pass) {
            all_pass = false;
            rep.failing_condition = (bc.circle_case == CircleCase::inside ||
                                     bc.circle_case == CircleCase::outside)
                                        ? FailingCondition::log_moment
                                        : FailingCondition::mean_equation;
            rep.failing_detail = "block " + std::to_string(h + 1) + ": " + bc.reason;
        }
        if (bc.boundary_uncertain) {
            if (!off_branch_pass) all_pass_off_branch = false;
        } else if (!bc.pass) {
            all_pass_off_branch = false;
        }
        rep.block_conditions.push_back(std::move(bc));
    }

    rep.exists_strict = all_pass;
    rep.boundary_uncertain = any_uncertain;
    if (any_uncertain) {
        rep.branch_on_circle = all_pass;
        rep.branch_off_circle = all_pass_off_branch;
        rep.warnings.push_back("eigenvalue within the unit-circle tolerance band; both branches reported");
    }
    rep.unique = !any_on_circle && !any_uncertain;
    return rep;
}

SolutionCoeffs solution_coeffs_1q(const Arma1qModel& model, int j_lo, int j_hi, double tol_circle) {
    const JordanForm form = resolve_jordan(model);
    const int m = model.m();
    const int d = model.d();
    const int q = model.q();

    SolutionCoeffs out;
    Vec stacked_const = Vec::Zero(m);
    std::map<int, Mat> stacked;  // lag -> m x d stacked block coefficients

    auto add = [&](int j, int row, const Mat& block_rows) {
        auto it = stacked.find(j);
        if (it == stacked.end()) it = stacked.emplace(j, Mat::Zero(m, d)).first;
        it->second.middleRows(row, block_rows.rows()) = block_rows;
    };

    for (int h = 0; h < static_cast<int>(form.blocks.size()); ++h) {
        const auto& blk = form.blocks[h];
        const int row = blk.start_row - 1;
        const Mat IS = form.block_selector(h) * form.S_inv;
        const CircleCase cc = classify_eigenvalue(blk.lambda, tol_circle, nullptr);

        switch (cc) {
            case CircleCase::inside:
                for (int j = std::max(0, j_lo); j <= j_hi; ++j) {
                    Mat c = Mat::Zero(blk.size, d);
                    for (int k = 0; k <= std::min(j, q); ++k)
                        c += jordan_block_power(blk.lambda, blk.size, j - k) * IS * model.thetas[k];
                    add(j, row, c);
                }
                break;
            case CircleCase::zero:
                for (int j = std::max(0, j_lo); j <= std::min(j_hi, m + q - 1); ++j) {
                    Mat c = Mat::Zero(blk.size, d);
                    for (int k = 0; k <= std::min(j, q); ++k) {
                        if (j - k >= blk.size) continue;  // nilpotent cutoff
                        c += jordan_block_power(blk.lambda, blk.size, j - k) * IS * model.thetas[k];
                    }
                    add(j, row, c);
                }
                break;
            case CircleCase::outside:
                for (int j = j_lo; j <= std::min(j_hi, q - 1); ++j) {
                    Mat c = Mat::Zero(blk.size, d);
                    for (int k = std::max(0, j + 1); k <= q; ++k)
                        c -= jordan_block_power(blk.lambda, blk.size, j - k) * IS * model.thetas[k];
                    add(j, row, c);
                }
                break;
            case CircleCase::unit_nontrivial:
            case CircleCase::unit_one: {
                const Mat B = block_test_matrix(form, h, model.thetas);
                auto alpha = model.noise.image_is_constant(B);
                if (!alpha)
                    throw std::runtime_error("solution_coeffs_1q: unit block without constant image");
                auto f = [&] {
                    const Mat A =
                        Mat::Identity(blk.size, blk.size) - jordan_block_power(blk.lambda, blk.size, 1);
                    Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
                    return Vec(cod.solve(*alpha));
                }();
                stacked_const.segment(row, blk.size) = f;
                for (int j = std::max(0, j_lo); j <= std::min(j_hi, q - 1); ++j) {
                    Mat c = Mat::Zero(blk.size, d);
                    for (int k = 0; k <= j; ++k)
                        c += jordan_block_power(blk.lambda, blk.size, j - k) * IS * model.thetas[k];
                    add(j, row, c);
                }
                break;
            }
        }
    }

    out.constant = form.S * stacked_const;
    for (auto& [j, c] : stacked) out.coeffs.emplace(j, form.S * c);
    return out;
}

bool is_unique_1q(const Arma1qModel& model, double tol_circle) {
    const JordanForm form = resolve_jordan(model);
    for (const auto& blk : form.blocks)
        if (std::abs(std::abs(blk.lambda) - 1.0) < tol_circle) return false;
    return true;
}

std::optional<bool> cor1_check(const Arma1qModel& model, double tol_circle) {
    const JordanForm form = resolve_jordan(model);
    for (const auto& blk : form.blocks) {
        const double mod = std::abs(blk.lambda);
        if (mod < tol_circle || std::abs(mod - 1.0) < tol_circle) return std::nullopt;
    }
    const int q = model.q();
    Mat A = Mat::Zero(model.m(), model.d());
    for (int k = 0; k <= q; ++k) A += matrix_power(model.psi1, q - k) * model.thetas[k];
    return model.noise.image_has_finite_log_moment(A);
}

std::optional<bool> cor2_check(const Arma1qModel& model, double tol_circle) {
    if (model.d() > model.m()) return std::nullopt;
    const JordanForm form = resolve_jordan(model);
    for (const auto& blk : form.blocks) {
        const double mod = std::abs(blk.lambda);
        if (mod < tol_circle || std::abs(mod - 1.0) < tol_circle) return std::nullopt;
    }
    const int q = model.q();
    Mat A = Mat::Zero(model.m(), model.d());
    for (int k = 0; k <= q; ++k) A += matrix_power(model.psi1, q - k) * model.thetas[k];
    Eigen::JacobiSVD<Mat> svd(A);
    const double tol = std::max(A.rows(), A.cols()) * std::numeric_limits<double>::epsilon() *
                       std::max(svd.singularValues()(0), 1.0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    if (rank < model.d()) return std::nullopt;
    return model.noise.image_has_finite_log_moment(Mat::Identity(model.d(), model.d()));
}

}  // namespace varma
