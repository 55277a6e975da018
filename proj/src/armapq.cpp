#include "varma/armapq.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace varma {

namespace {

constexpr double kExactCircleTol = 1e-13;

int numerical_rank(const Mat& A, double tol_rel = 1e-9) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(A);
    const double tol = tol_rel * std::max(svd.singularValues()(0), 1.0);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    return r;
}

Mat selector_columns(const Mat& A, int first_cols) { return A.leftCols(first_cols); }

}  // namespace

CompanionEmbedding embed_companion(const ArmapqModel& model) {
    const int m = model.m(), p = model.p(), d = model.d(), q = model.q();
    CompanionEmbedding emb;
    emb.phi = Mat::Zero(m * p, m * p);
    for (int k = 0; k < p; ++k) emb.phi.block(0, k * m, m, m) = model.psis[k];
    for (int k = 1; k < p; ++k) emb.phi.block(k * m, (k - 1) * m, m, m) = Mat::Identity(m, m);
    for (int k = 0; k <= q; ++k) {
        Mat t = Mat::Zero(m * p, d);
        t.topRows(m) = model.thetas[k];
        emb.theta_unders.push_back(std::move(t));
    }
    return emb;
}

MatrixPoly build_Qtilde(const MatrixPoly& Q, const UnitarySplit& split) {
    const int d = static_cast<int>(split.U.rows());
    Mat lambda = Mat::Zero(d, d);
    lambda.topLeftCorner(split.s, split.s) = Mat::Identity(split.s, split.s);
    return Q * MatrixPoly::constant(split.U.adjoint() * lambda);
}

MatrixPoly build_Qtilde(const ArmapqModel& model) {
    return build_Qtilde(model.Q(), model.noise.unitary_split());
}

namespace {

struct MeanEquation {
    bool solvable = false;
    bool solvable_for_all_v = false;  // condition (iii')
    Vec g, v;
};

// Solvability of P(1) g = Q(1) U* (v^T, u^T)^T jointly over (g, v), with the
// minimum-norm solution on success.
MeanEquation solve_mean_equation(const ArmapqModel& model, const UnitarySplit& split) {
    const int m = model.m(), d = model.d();
    const int s = split.s;
    const Mat P1 = model.P().eval(cx(1));
    const Mat Q1U = model.Q().eval(cx(1)) * split.U.adjoint();
    const Mat B = selector_columns(Q1U, s);  // acts on v
    Vec rhs = Vec::Zero(m);
    if (d - s > 0) rhs = Q1U.rightCols(d - s) * split.u;

    Mat sys(m, m + s);
    sys.leftCols(m) = P1;
    if (s > 0) sys.rightCols(s) = -B;

    Mat aug(m, m + s + 1);
    aug.leftCols(m + s) = sys;
    aug.col(m + s) = rhs;

    MeanEquation out;
    out.solvable = numerical_rank(sys) == numerical_rank(aug);
    {
        Mat p_only_aug(m, m + 1);
        p_only_aug.leftCols(m) = P1;
        p_only_aug.col(m) = rhs;
        Mat p_and_b(m, m + s);
        p_and_b.leftCols(m) = P1;
        if (s > 0) p_and_b.rightCols(s) = B;
        out.solvable_for_all_v = numerical_rank(p_and_b) == numerical_rank(P1) &&
                                 numerical_rank(p_only_aug) == numerical_rank(P1);
    }
    if (out.solvable) {
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(sys);
        Vec x = cod.solve(rhs);
        out.g = x.head(m);
        out.v = x.tail(s);
    }
    return out;
}

struct CircleRootScan {
    bool any_uncertain = false;
    bool any_on_circle = false;  // within tol_circle of the circle (incl. uncertain)
};

CircleRootScan scan_circle_roots(const CPoly& detP, double tol_circle) {
    CircleRootScan scan;
    for (const auto& [z0, mult] : roots_with_multiplicity(detP, tol_circle)) {
        const double dist = std::abs(std::abs(z0) - 1.0);
        if (dist < tol_circle) {
            scan.any_on_circle = true;
            if (dist >= kExactCircleTol) scan.any_uncertain = true;
        }
    }
    return scan;
}

}  // namespace

StationarityReport check_existence_pq(const ArmapqModel& model, double tol_circle) {
    StationarityReport rep;
    rep.tol_circle = tol_circle;
    const int m = model.m(), p = model.p(), q = model.q();

    const UnitarySplit split = model.noise.unitary_split();
    const MatrixPoly P = model.P();
    const MatrixPoly Qt = build_Qtilde(model.Q(), split);
    const CPoly detP = det_poly(P);
    const CircleRootScan scan = scan_circle_roots(detP, tol_circle);
    rep.boundary_uncertain = scan.any_uncertain;
    rep.unique = !scan.any_on_circle;

    bool pass = true;

    // (i) removability of every unit-circle singularity of M(z).
    const auto rem = is_removable(P, Qt, tol_circle);
    if (!rem.removable) {
        pass = false;
        rep.failing_condition = FailingCondition::removability;
        rep.failing_detail = rem.reason;
    }

    // (ii) log-moment finiteness of M_j U Z_0 over the theorem's index set.
    if (pass) {
        const int j_lo = -p - 2;
        const int j_hi = m * p + q + 2;
        LaurentSeries series = laurent_coeffs(P, Qt, j_lo, j_hi);
        for (int j = m * p + q - p + 1; j <= m * p + q && pass; ++j) {
            if (!model.noise.image_has_finite_log_moment(series.at(j) * split.U)) {
                pass = false;
                rep.failing_condition = FailingCondition::log_moment;
                rep.failing_detail = "M_j U Z_0 has infinite log-moment at j = " + std::to_string(j);
            }
        }
        for (int j = -p; j <= -1 && pass; ++j) {
            if (!model.noise.image_has_finite_log_moment(series.at(j) * split.U)) {
                pass = false;
                rep.failing_condition = FailingCondition::log_moment;
                rep.failing_detail = "M_j U Z_0 has infinite log-moment at j = " + std::to_string(j);
            }
        }
        rep.laurent = std::move(series);
    }

    // (iii) solvability of the mean equation over (g, v).
    const MeanEquation mean_eq = solve_mean_equation(model, split);
    if (pass) {
        if (!mean_eq.solvable) {
            pass = false;
            rep.failing_condition = FailingCondition::mean_equation;
            rep.failing_detail = "P(1) g = Q(1) U* (v^T, u^T)^T has no solution";
        } else {
            rep.g = mean_eq.g;
            rep.v = mean_eq.v;
            if (rem.removable && !mean_eq.solvable_for_all_v)
                rep.warnings.push_back(
                    "(iii) holds but (iii') rank test disagrees; rank tolerance suspect");
        }
    }

    rep.exists_strict = pass;

    if (scan.any_uncertain) {
        rep.warnings.push_back("det P root within the unit-circle tolerance band; both branches reported");
        rep.branch_on_circle = pass;
        // Off-circle branch: band roots are ordinary inside/outside roots, so
        // (i) is vacuous for them; (ii) is implied when the noise has a finite
        // log-moment structurally.
        if (model.noise.all_finite_log_moment() && mean_eq.solvable)
            rep.branch_off_circle = true;
        else if (!mean_eq.solvable)
            rep.branch_off_circle = false;
        // otherwise left unset: too close to the circle to expand reliably
    }
    return rep;
}

SolutionCoeffs PqSolution::as_kernel(const ArmapqModel& model) const {
    const UnitarySplit split = model.noise.unitary_split();
    SolutionCoeffs out;
    Vec w_bar(split.U.rows());
    w_bar.head(split.s) = v;
    w_bar.tail(w_bar.size() - split.s) = split.u;
    Mat msum = Mat::Zero(model.m(), model.d());
    for (int j = series.j_min; j <= series.j_max; ++j) msum += series.at(j);
    out.constant = g - msum * w_bar;
    for (int j = series.j_min; j <= series.j_max; ++j) out.coeffs.emplace(j, series.at(j) * split.U);
    return out;
}

PqSolution solution_coeffs_pq(const ArmapqModel& model, int j_lo, int j_hi, double tol_circle) {
    StationarityReport rep = check_existence_pq(model, tol_circle);
    if (!rep.exists_strict)
        throw std::runtime_error("solution_coeffs_pq: no strictly stationary solution (" +
                                 to_string(rep.failing_condition) + ")");
    PqSolution sol;
    sol.g = *rep.g;
    sol.v = *rep.v;
    const UnitarySplit split = model.noise.unitary_split();
    sol.series = laurent_coeffs(model.P(), build_Qtilde(model.Q(), split), j_lo, j_hi);
    return sol;
}

WeakVerdict check_weak(const ArmapqModel& model, const Vec& mean, const Mat& covariance,
                       double tol_circle) {
    const int d = model.d();
    if ((covariance - covariance.adjoint()).norm() > 1e-9 * std::max(1.0, covariance.norm()))
        throw std::invalid_argument("check_weak: covariance not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(covariance);
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, covariance.norm()))
        throw std::invalid_argument("check_weak: covariance not positive semidefinite");

    // Descending eigenvalues: strictly positive ones first.
    Mat U(d, d);
    int s = 0;
    const double tol = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = 0; i < d; ++i) {
        U.row(i) = es.eigenvectors().col(d - 1 - i).adjoint();
        if (es.eigenvalues()(d - 1 - i) > tol) ++s;
    }

    WeakVerdict out;
    Mat lambda = Mat::Zero(d, d);
    lambda.topLeftCorner(s, s) = Mat::Identity(s, s);
    const MatrixPoly P = model.P();
    const MatrixPoly Qt = model.Q() * MatrixPoly::constant(U.adjoint() * lambda);

    const auto rem = is_removable(P, Qt, tol_circle);
    if (!rem.removable) {
        out.exists = false;
        out.reason = "non-removable unit-circle singularity: " + rem.reason;
        return out;
    }

    const Mat P1 = P.eval(cx(1));
    const Vec rhs = model.Q().eval(cx(1)) * mean;
    Mat aug(model.m(), model.m() + 1);
    aug.leftCols(model.m()) = P1;
    aug.col(model.m()) = rhs;
    if (numerical_rank(P1) != numerical_rank(aug)) {
        out.exists = false;
        out.reason = "mean equation P(1) g = Q(1) E Z_0 has no solution";
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(P1);
    out.g = Vec(cod.solve(rhs));
    out.exists = true;
    out.reason = "removable singularities and solvable mean equation";
    const int m = model.m(), p = model.p(), q = model.q();
    out.series = laurent_coeffs(P, Qt, -p - 10, m * p + q + 10);
    return out;
}

CausalVerdict check_causal(const ArmapqModel& model, double tol_circle) {
    const UnitarySplit split = model.noise.unitary_split();
    const MatrixPoly P = model.P();
    const MatrixPoly Qt = build_Qtilde(model.Q(), split);
    bool coprime = false;
    try {
        coprime = are_left_coprime(P, Qt);
    } catch (const std::exception&) {
        coprime = false;
    }
    if (!coprime) return CausalVerdict::not_applicable;

    const CPoly detP = det_poly(P);
    for (const auto& [z0, mult] : roots_with_multiplicity(detP, tol_circle))
        if (std::abs(z0) <= 1.0 + tol_circle) return CausalVerdict::not_exists;

    const int m = model.m(), p = model.p(), q = model.q();
    LaurentSeries taylor = causal_coeffs(model.psis, Qt, m * p + q);
    for (int j = m * p + q - p + 1; j <= m * p + q; ++j)
        if (!model.noise.image_has_finite_log_moment(taylor.at(j) * split.U))
            return CausalVerdict::not_exists;
    return CausalVerdict::exists;
}

bool cor3_necessary(const ArmapqModel& model, double tol_circle) {
    const UnitarySplit split = model.noise.unitary_split();
    const MatrixPoly P = model.P();
    const MatrixPoly Qt = build_Qtilde(model.Q(), split);
    const CPoly detP = det_poly(P);
    const auto circle_roots = unit_circle_singularities(P, tol_circle);
    if (circle_roots.empty()) return true;

    // Gram form: z^{m K} det(Qt Qt*) and z^{deg} |det P|^2 as polynomials.
    bool gram_ok = true;
    {
        const int K = std::max(Qt.degree(), 0);
        std::vector<Mat> rev(K + 1);
        for (int k = 0; k <= K; ++k) rev[k] = Qt.coeff(K - k).conjugate();
        MatrixPoly rev_qt(std::move(rev));
        // W(z) = Qt(z) * rev(conj Qt)(z)^T equals z^K Qt(z) Qt(z)* on |z| = 1.
        MatrixPoly W(model.m(), model.m());
        {
            MatrixPoly rev_t(Qt.cols(), Qt.rows());
            std::vector<Mat> tc;
            for (int k = 0; k <= rev_qt.degree(); ++k) tc.push_back(rev_qt.coeff(k).transpose());
            if (tc.empty()) tc.push_back(Mat::Zero(Qt.cols(), Qt.rows()));
            W = Qt * MatrixPoly(std::move(tc));
        }
        const CPoly num = det_poly(W);
        for (const auto& [z0, mult] : circle_roots) {
            if (zero_order_at(num, z0, 1e-9) < 2 * mult) {
                gram_ok = false;
                break;
            }
        }
    }
    if (!gram_ok) return false;

    if (model.d() == model.m()) {
        const CPoly qdet = det_poly(Qt);
        for (const auto& [z0, mult] : circle_roots)
            if (zero_order_at(qdet, z0, 1e-9) < mult) return false;
    }
    return true;
}

LaurentSeries jordan_path_coeffs(const ArmapqModel& model, int j_lo, int j_hi, double tol_circle) {
    const CompanionEmbedding emb = embed_companion(model);
    const int mp = static_cast<int>(emb.phi.rows());
    const int d = model.d();
    const int q = model.q();
    const JordanForm form = jordan_decompose(emb.phi);

    LaurentSeries out;
    out.j_min = j_lo;
    out.j_max = j_hi;
    out.coeffs.assign(j_hi - j_lo + 1, Mat::Zero(mp, d));

    for (int h = 0; h < static_cast<int>(form.blocks.size()); ++h) {
        const auto& blk = form.blocks[h];
        const int row = blk.start_row - 1;
        const Mat IS = form.block_selector(h) * form.S_inv;
        const CircleCase cc = classify_eigenvalue(blk.lambda, tol_circle, nullptr);

        for (int j = j_lo; j <= j_hi; ++j) {
            Mat njh = Mat::Zero(blk.size, d);
            switch (cc) {
                case CircleCase::inside:
                    if (j >= 0)
                        for (int k = 0; k <= std::min(j, q); ++k)
                            njh += jordan_block_power(blk.lambda, blk.size, j - k) * IS *
                                   emb.theta_unders[k];
                    break;
                case CircleCase::outside:
                    if (j <= q - 1)
                        for (int k = std::max(0, j + 1); k <= q; ++k)
                            njh -= jordan_block_power(blk.lambda, blk.size, j - k) * IS *
                                   emb.theta_unders[k];
                    break;
                case CircleCase::zero:
                    if (j >= 0 && j <= mp + q - 1)
                        for (int k = 0; k <= std::min(j, q); ++k) {
                            if (j - k >= blk.size) continue;
                            njh += jordan_block_power(blk.lambda, blk.size, j - k) * IS *
                                   emb.theta_unders[k];
                        }
                    break;
                case CircleCase::unit_nontrivial:
                case CircleCase::unit_one:
                    if (j >= 0 && j <= q - 1)
                        for (int k = 0; k <= j; ++k)
                            njh += jordan_block_power(blk.lambda, blk.size, j - k) * IS *
                                   emb.theta_unders[k];
                    break;
            }
            out.coeffs[j - j_lo].middleRows(row, blk.size) += njh;
        }
    }
    // Assemble through the similarity transform.
    for (auto& c : out.coeffs) c = form.S * c;
    return out;
}

double cross_check_lemma3(const ArmapqModel& model, int j_lo, int j_hi, double tol_circle) {
    const int m = model.m(), p = model.p(), d = model.d();
    const UnitarySplit split = model.noise.unitary_split();
    const MatrixPoly Qt = build_Qtilde(model.Q(), split);
    const LaurentSeries laurent = laurent_coeffs(model.P(), Qt, j_lo - p + 1, j_hi);
    const LaurentSeries npath = jordan_path_coeffs(model, j_lo, j_hi, tol_circle);

    Mat lambda = Mat::Zero(d, d);
    lambda.topLeftCorner(split.s, split.s) = Mat::Identity(split.s, split.s);
    const Mat right = split.U.adjoint() * lambda;

    double worst = 0;
    for (int j = j_lo; j <= j_hi; ++j) {
        Mat stacked(m * p, d);
        for (int k = 0; k < p; ++k) stacked.middleRows(k * m, m) = laurent.at(j - k);
        const Mat rhs = npath.at(j) * right;
        worst = std::max(worst, (stacked - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

bool check_strict_weak_equivalence(const ArmapqModel& model, double tol_circle) {
    if (!model.noise.all_finite_variance())
        throw std::invalid_argument("check_strict_weak_equivalence: noise lacks finite variance");
    const bool strict = check_existence_pq(model, tol_circle).exists_strict;
    const bool weak =
        check_weak(model, model.noise.mean(), model.noise.covariance(), tol_circle).exists;
    return strict == weak;
}

ArmapqModel stack_matrix_noise(const ArmapqModel& model, int d_prime) {
    if (d_prime < 1) throw std::invalid_argument("stack_matrix_noise: d' must be positive");
    const int d = model.d();
    auto blockdiag = [&](const Mat& A, int copies) {
        Mat out = Mat::Zero(A.rows() * copies, A.cols() * copies);
        for (int i = 0; i < copies; ++i)
            out.block(i * A.rows(), i * A.cols(), A.rows(), A.cols()) = A;
        return out;
    };
    std::vector<Mat> psis, thetas;
    for (const auto& psi : model.psis) psis.push_back(blockdiag(psi, d_prime));
    for (const auto& th : model.thetas) thetas.push_back(blockdiag(th, d_prime));

    const Mat L = blockdiag(model.noise.mixing(), d_prime);
    Vec c(d * d_prime);
    for (int i = 0; i < d_prime; ++i) c.segment(i * d, d) = model.noise.shift();
    std::vector<NoiseComponent> comps;
    for (int i = 0; i < d_prime; ++i)
        for (const auto& comp : model.noise.components()) comps.push_back(comp);
    return ArmapqModel{std::move(psis), std::move(thetas), NoiseModel(L, c, std::move(comps))};
}

}  // namespace varma
