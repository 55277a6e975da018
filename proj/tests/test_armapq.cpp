#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "varma/armapq.hpp"

using namespace varma;

namespace {

std::mt19937_64 rng(17);

Mat rand_mat(int r, int c, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1, 1);
    Mat M(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = cx(u(rng), u(rng)) * scale;
    return M;
}

// Random model whose companion spectral radius is pushed under `radius` by
// the scaling Psi_k -> c^k Psi_k (which scales every companion eigenvalue
// by c).
ArmapqModel random_stable_model(int m, int d, int p, int q, double radius = 0.9) {
    std::vector<Mat> psis, thetas;
    for (int k = 0; k < p; ++k) psis.push_back(rand_mat(m, m));
    for (int k = 0; k <= q; ++k) thetas.push_back(rand_mat(m, d));
    ArmapqModel model{psis, thetas, NoiseModel::iid(d, NoiseFamily::gaussian)};
    CompanionEmbedding emb = embed_companion(model);
    double rho = 0.0;
    for (auto ev : emb.phi.eigenvalues()) rho = std::max(rho, std::abs(ev));
    if (rho > 0) {
        double c = radius / rho;
        for (int k = 0; k < p; ++k) model.psis[k] *= std::pow(c, k + 1);
    }
    return model;
}

}  // namespace

TEST_CASE("companion matrix carries the autoregressive characteristic roots") {
    ArmapqModel model = random_stable_model(2, 2, 3, 1);
    CompanionEmbedding emb = embed_companion(model);
    // det(Id - Phi z) = det P(z) pointwise.
    for (cx z : {cx(0.3, 0.2), cx(-0.7, 0.4), cx(1.1, -0.2)}) {
        cx lhs = (Mat::Identity(6, 6) - emb.phi * z).determinant();
        cx rhs = model.P().eval(z).determinant();
        CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
    }
    // Theta underbar stacks Theta_k over zero padding.
    REQUIRE(emb.theta_unders.size() == static_cast<size_t>(model.q()) + 1);
    for (int k = 0; k <= model.q(); ++k) {
        CHECK((emb.theta_unders[k].topRows(2) - model.thetas[k]).norm() == 0.0);
        CHECK(emb.theta_unders[k].bottomRows(4).norm() == 0.0);
    }
}

TEST_CASE("order-one analysis agrees between the two analyzer paths") {
    for (int rep = 0; rep < 5; ++rep) {
        ArmapqModel model = random_stable_model(2, 2, 1, 2);
        Arma1qModel m1{model.psis[0], model.thetas, model.noise, std::nullopt};
        StationarityReport a = check_existence_1q(m1);
        StationarityReport b = check_existence_pq(model);
        CHECK(a.exists_strict == b.exists_strict);
        CHECK(a.unique == b.unique);
    }
}

TEST_CASE("general analyzer accepts stable models and rejects unit poles") {
    ArmapqModel ok = random_stable_model(2, 2, 2, 1);
    StationarityReport rep = check_existence_pq(ok);
    CHECK(rep.exists_strict);
    CHECK(rep.unique);

    // Scalar (1 - z)(1 - 0.5 z) autoregression with Q = 1: pole at z = 1.
    Mat p1(1, 1), p2(1, 1), th(1, 1);
    p1(0, 0) = 1.5;
    p2(0, 0) = -0.5;
    th(0, 0) = 1;
    ArmapqModel unit{{p1, p2}, {th}, NoiseModel::iid(1, NoiseFamily::gaussian)};
    StationarityReport bad = check_existence_pq(unit);
    CHECK_FALSE(bad.exists_strict);
    CHECK(bad.failing_condition == FailingCondition::removability);
    CHECK_FALSE(bad.unique);
}

TEST_CASE("entrywise pole cancellation is required, not just the determinant") {
    // Psi1 = Theta0 = Id, Theta1 = [[-1,0],[1,-1]]: det P and det Q share
    // (1 - z)^2 but entry (2,1) of Adj(P) Q cancels only one factor.
    Mat th1(2, 2);
    th1 << cx(-1), cx(0), cx(1), cx(-1);
    ArmapqModel model{{Mat::Identity(2, 2)},
                      {Mat::Identity(2, 2), th1},
                      NoiseModel::iid(2, NoiseFamily::gaussian)};
    StationarityReport rep = check_existence_pq(model);
    CHECK_FALSE(rep.exists_strict);
    CHECK(rep.failing_condition == FailingCondition::removability);
    CHECK(cor3_necessary(model));  // the determinant ratio alone cannot see it
    CHECK(check_causal(model) == CausalVerdict::not_applicable);  // non-coprime
}

TEST_CASE("Jordan reconstruction of the Laurent window matches the direct one") {
    for (int rep = 0; rep < 3; ++rep) {
        ArmapqModel model = random_stable_model(2, 2, 2, 1, 0.8);
        CHECK(cross_check_lemma3(model, -8, 15) < 1e-8);
    }
}

TEST_CASE("mixed causal and anticausal spectrum still cross-checks") {
    // Two scalar channels, one stable and one explosive, mixed by T.
    Mat T(2, 2);
    T << cx(1), cx(1), cx(1), cx(-1);
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = 0.5;
    D(1, 1) = 1.8;
    ArmapqModel model{{T * D * T.inverse()},
                      {Mat::Identity(2, 2), rand_mat(2, 2, 0.5)},
                      NoiseModel::iid(2, NoiseFamily::gaussian)};
    StationarityReport rep = check_existence_pq(model);
    CHECK(rep.exists_strict);
    CHECK(rep.unique);
    CHECK(cross_check_lemma3(model, -10, 15) < 1e-8);
}

TEST_CASE("weak analysis agrees with strict analysis under finite variance") {
    for (int rep = 0; rep < 5; ++rep) {
        ArmapqModel model = random_stable_model(2, 2, 2, 2);
        CHECK(check_strict_weak_equivalence(model));
    }
    // A removability failure must be rejected by both.
    Mat th1(2, 2);
    th1 << cx(-1), cx(0), cx(1), cx(-1);
    ArmapqModel bad{{Mat::Identity(2, 2)},
                    {Mat::Identity(2, 2), th1},
                    NoiseModel::iid(2, NoiseFamily::gaussian)};
    CHECK(check_strict_weak_equivalence(bad));
}

TEST_CASE("weak analyzer solves the mean equation") {
    Mat psi(1, 1), th(1, 1);
    psi(0, 0) = 0.5;
    th(0, 0) = 1;
    Vec mean(1);
    mean(0) = 2.0;
    ArmapqModel model{{psi}, {th}, NoiseModel::iid(1, NoiseFamily::gaussian)};
    WeakVerdict w = check_weak(model, mean, Mat::Identity(1, 1));
    CHECK(w.exists);
    REQUIRE(w.g.has_value());
    // P(1) g = Q(1) mean: 0.5 g = 2, so the process mean is 4.
    CHECK(std::abs((*w.g)(0) - cx(4)) < 1e-10);
}

TEST_CASE("causal verdict distinguishes disk roots from coprimeness gaps") {
    ArmapqModel stable = random_stable_model(2, 2, 2, 1);
    CHECK(check_causal(stable) == CausalVerdict::exists);

    Mat p(1, 1), th(1, 1);
    p(0, 0) = 2;
    th(0, 0) = 1;
    ArmapqModel explosive{{p}, {th}, NoiseModel::iid(1, NoiseFamily::gaussian)};
    CHECK(check_causal(explosive) == CausalVerdict::not_exists);
    // The explosive model is still stationary, just not causally so.
    CHECK(check_existence_pq(explosive).exists_strict);
}

TEST_CASE("solution coefficients solve the convolution equation") {
    ArmapqModel model = random_stable_model(2, 2, 2, 1);
    PqSolution sol = solution_coeffs_pq(model, -10, 40);
    MatrixPoly P = model.P();
    MatrixPoly Qt = build_Qtilde(model);
    CHECK(convolution_residual(P, Qt, sol.series) < 1e-8);
    // Mean equation: P(1) g = Q(1) U* (v; u).
    const UnitarySplit split = model.noise.unitary_split();
    Vec vu(model.d());
    vu.head(split.s) = sol.v;
    vu.tail(model.d() - split.s) = split.u;
    CHECK((P.eval(1) * sol.g - model.Q().eval(1) * split.U.adjoint() * vu).norm() < 1e-8);
}

TEST_CASE("matrix-valued noise stacks to independent block copies") {
    ArmapqModel model = random_stable_model(2, 2, 1, 1);
    ArmapqModel stacked = stack_matrix_noise(model, 3);
    CHECK(stacked.m() == 6);
    CHECK(stacked.d() == 6);
    CHECK(stacked.p() == model.p());
    CHECK(stacked.q() == model.q());
    for (int b = 0; b < 3; ++b)
        CHECK((stacked.psis[0].block(2 * b, 2 * b, 2, 2) - model.psis[0]).norm() == 0.0);
    CHECK(check_existence_pq(stacked).exists_strict == check_existence_pq(model).exists_strict);
}
