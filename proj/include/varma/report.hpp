#ifndef VARMA_REPORT_HPP
#define VARMA_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "varma/jordan.hpp"
#include "varma/rational.hpp"

namespace varma {

enum class FailingCondition { none, removability, log_moment, mean_equation };

std::string to_string(FailingCondition c);

enum class CircleCase { inside, outside, zero, unit_nontrivial, unit_one };

std::string to_string(CircleCase c);

/// Verdict for one Jordan block of the ARMA(1,q) analyzer.
struct BlockCondition {
    int h = 0;
    cx lambda;
    CircleCase circle_case = CircleCase::inside;
    bool boundary_uncertain = false;
    Mat B;  // the tested matrix sum_k Phi^{q-k} I_h S^{-1} Theta_k
    bool pass = false;
    std::string reason;
    std::optional<Vec> alpha;  // unit cases, when the image is constant
    std::optional<Vec> f;      // solves (Id - Phi) f = alpha
};

struct StationarityReport {
    bool exists_strict = false;
    bool boundary_uncertain = false;
    bool unique = false;
    std::optional<bool> exists_weak;
    std::optional<bool> exists_causal;
    FailingCondition failing_condition = FailingCondition::none;
    std::string failing_detail;

    std::optional<Vec> g;  // mean-equation solution, P(1) g = Q(1) U* (v^T, u^T)^T
    std::optional<Vec> v;  // solver's minimum-norm choice in condition (iii)

    std::vector<BlockCondition> block_conditions;  // 1q path only
    std::optional<LaurentSeries> laurent;          // pq path

    // Diagnostics.
    double tol_circle = 1e-7;
    double jordan_residual = 0.0;
    std::vector<std::string> warnings;
    // Both branch outcomes when a boundary-uncertain eigenvalue was seen.
    std::optional<bool> branch_on_circle;
    std::optional<bool> branch_off_circle;
};

}  // namespace varma

#endif
