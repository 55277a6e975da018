#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "varma/rational.hpp"

using namespace varma;

namespace {

MatrixPoly scalar_poly(std::vector<cx> c) {
    std::vector<Mat> mats;
    for (cx x : c) {
        Mat M(1, 1);
        M(0, 0) = x;
        mats.push_back(M);
    }
    return MatrixPoly(std::move(mats));
}

}  // namespace

TEST_CASE("causal scalar geometric expansion") {
    // 1 / (1 - 0.5 z) = sum_{j >= 0} 0.5^j z^j
    MatrixPoly P = scalar_poly({cx(1), cx(-0.5)});
    MatrixPoly Qt = scalar_poly({cx(1)});
    LaurentSeries s = laurent_coeffs(P, Qt, -5, 12);
    for (int j = -5; j <= 12; ++j) {
        cx want = (j >= 0) ? cx(std::pow(0.5, j)) : cx(0);
        CHECK(std::abs(s.at(j)(0, 0) - want) < 1e-11);
    }
    CHECK(s.decay_rho < 1.0);
}

TEST_CASE("anticausal scalar expansion") {
    // 1 / (1 - 2 z) = -sum_{j <= -1} 2^j z^j on |z| = 1
    MatrixPoly P = scalar_poly({cx(1), cx(-2)});
    MatrixPoly Qt = scalar_poly({cx(1)});
    LaurentSeries s = laurent_coeffs(P, Qt, -12, 5);
    for (int j = -12; j <= 5; ++j) {
        cx want = (j <= -1) ? cx(-std::pow(2.0, j)) : cx(0);
        CHECK(std::abs(s.at(j)(0, 0) - want) < 1e-11);
    }
}

TEST_CASE("removable unit root collapses to a finite sum") {
    // (1 - z) / (1 - z) = 1
    MatrixPoly P = scalar_poly({cx(1), cx(-1)});
    MatrixPoly Qt = scalar_poly({cx(1), cx(-1)});
    RemovabilityResult rem = is_removable(P, Qt);
    CHECK(rem.removable);
    LaurentSeries s = laurent_coeffs(P, Qt, -6, 6);
    for (int j = -6; j <= 6; ++j) {
        cx want = (j == 0) ? cx(1) : cx(0);
        CHECK(std::abs(s.at(j)(0, 0) - want) < 1e-11);
    }
}

TEST_CASE("entrywise removability failure is located") {
    // P = (1 - z) Id2, Qt = Id + [[-1,0],[1,-1]] z: entry (2,1) of
    // Adj(P) Qt is z (1 - z), one order short of the double root at 1.
    Mat id = Mat::Identity(2, 2);
    Mat th1(2, 2);
    th1 << cx(-1), cx(0), cx(1), cx(-1);
    MatrixPoly P({id, -id});
    MatrixPoly Qt({id, th1});
    RemovabilityResult rem = is_removable(P, Qt);
    CHECK_FALSE(rem.removable);
    CHECK(rem.offending_row == 1);
    CHECK(rem.offending_col == 0);
    CHECK(std::abs(rem.offending_root - cx(1)) < 1e-8);
}

TEST_CASE("FFT path agrees with the causal recursion oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 5; ++rep) {
        int m = 2, pdeg = 2, qdeg = 1;
        std::vector<Mat> psis(pdeg), qcoef(qdeg + 1);
        for (auto& M : psis) {
            M = Mat(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) M(i, j) = cx(u(rng), u(rng)) * 0.25;
        }
        for (auto& M : qcoef) {
            M = Mat(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) M(i, j) = cx(u(rng), u(rng));
        }
        MatrixPoly P = MatrixPoly::ar_char(psis, m);
        MatrixPoly Qt(qcoef);
        LaurentSeries fft = laurent_coeffs(P, Qt, -5, 25);
        LaurentSeries rec = causal_coeffs(psis, Qt, 25);
        for (int j = 0; j <= 25; ++j)
            CHECK((fft.at(j) - rec.at(j)).norm() < 1e-10);
        for (int j = -5; j < 0; ++j) CHECK(fft.norm_at(j) < 1e-10);
    }
}

TEST_CASE("computed windows satisfy the defining convolution") {
    MatrixPoly P = scalar_poly({cx(1), cx(-0.8), cx(0.15)});
    MatrixPoly Qt = scalar_poly({cx(1), cx(0.4)});
    LaurentSeries s = laurent_coeffs(P, Qt, -10, 40);
    CHECK(convolution_residual(P, Qt, s) < 1e-10);
}

TEST_CASE("unit circle singularities are reported with multiplicity") {
    // det P = (1 - z)^2 (1 - 0.5 z) for P = diag((1-z)^2, 1 - 0.5 z)
    Mat z0 = Mat::Zero(2, 2), z1 = Mat::Zero(2, 2), z2 = Mat::Zero(2, 2);
    z0(0, 0) = 1;
    z0(1, 1) = 1;
    z1(0, 0) = -2;
    z1(1, 1) = -0.5;
    z2(0, 0) = 1;
    MatrixPoly P({z0, z1, z2});
    auto sing = unit_circle_singularities(P);
    REQUIRE(sing.size() == 1);
    CHECK(std::abs(sing[0].first - cx(1)) < 1e-8);
    CHECK(sing[0].second == 2);
}
