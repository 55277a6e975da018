#include "varma/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

namespace varma {

NoiseFamily noise_family_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseFamily::gaussian;
    if (name == "student_t") return NoiseFamily::student_t;
    if (name == "cauchy") return NoiseFamily::cauchy;
    if (name == "alpha_stable") return NoiseFamily::alpha_stable;
    if (name == "log_cauchy") return NoiseFamily::log_cauchy;
    throw std::invalid_argument("unknown noise family: " + name);
}

std::string to_string(NoiseFamily f) {
    switch (f) {
        case NoiseFamily::gaussian: return "gaussian";
        case NoiseFamily::student_t: return "student_t";
        case NoiseFamily::cauchy: return "cauchy";
        case NoiseFamily::alpha_stable: return "alpha_stable";
        case NoiseFamily::log_cauchy: return "log_cauchy";
    }
    return "?";
}

NoiseComponent make_component(NoiseFamily family, double param) {
    NoiseComponent c;
    c.family = family;
    c.param = param;
    switch (family) {
        case NoiseFamily::gaussian:
            c.finite_log_moment = true;
            c.finite_variance = true;
            c.variance = 1.0;
            break;
        case NoiseFamily::student_t:
            c.finite_log_moment = true;
            c.finite_variance = param > 2.0;
            c.variance = c.finite_variance ? param / (param - 2.0) : 0.0;
            break;
        case NoiseFamily::cauchy:
        case NoiseFamily::alpha_stable:
            c.finite_log_moment = true;
            c.finite_variance = false;
            break;
        case NoiseFamily::log_cauchy:
            c.finite_log_moment = false;
            c.finite_variance = false;
            break;
    }
    return c;
}

NoiseModel::NoiseModel(Mat L, Vec c, std::vector<NoiseComponent> components, double rank_tol)
    : d_(static_cast<int>(L.rows())),
      n_(static_cast<int>(L.cols())),
      L_(std::move(L)),
      c_(std::move(c)),
      components_(std::move(components)),
      rank_tol_(rank_tol) {
    if (c_.size() != d_) throw std::invalid_argument("NoiseModel: shift dimension mismatch");
    if (static_cast<int>(components_.size()) != n_)
        throw std::invalid_argument("NoiseModel: component count mismatch");
}

NoiseModel NoiseModel::iid(int d, NoiseFamily family, double param) {
    return NoiseModel(Mat::Identity(d, d), Vec::Zero(d),
                      std::vector<NoiseComponent>(d, make_component(family, param)));
}

namespace {

double effective_rank_tol(const Eigen::JacobiSVD<Mat>& svd, int d, int n, double user_tol) {
    if (user_tol > 0) return user_tol;
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return std::max(d, n) * std::numeric_limits<double>::epsilon() * std::max(smax, 1.0);
}

}  // namespace

Mat NoiseModel::degenerate_subspace() const {
    // K = { a : a* L = 0 } = orthogonal complement of range(L).
    Eigen::JacobiSVD<Mat> svd(L_, Eigen::ComputeFullU);
    const double tol = effective_rank_tol(svd, d_, n_, rank_tol_);
    int s = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++s;
    return svd.matrixU().rightCols(d_ - s);
}

UnitarySplit NoiseModel::unitary_split() const {
    Eigen::JacobiSVD<Mat> svd(L_, Eigen::ComputeFullU);
    const double tol = effective_rank_tol(svd, d_, n_, rank_tol_);
    int s = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++s;
    UnitarySplit split;
    split.U = svd.matrixU().adjoint();  // rows 1..s span K-perp, rows s+1..d span K
    split.s = s;
    split.u = split.U.bottomRows(d_ - s) * c_;
    return split;
}

std::optional<Vec> NoiseModel::image_is_constant(const Mat& A, double tol_rel) const {
    if (A.cols() != d_) throw std::invalid_argument("image_is_constant: dimension mismatch");
    const Mat AL = A * L_;
    const double scale = std::max({A.cwiseAbs().maxCoeff(), 1.0}) *
                         std::max({L_.cwiseAbs().maxCoeff(), 1.0});
    if (AL.size() > 0 && AL.cwiseAbs().maxCoeff() > tol_rel * scale) return std::nullopt;
    return Vec(A * c_);
}

bool NoiseModel::image_has_finite_log_moment(const Mat& A, double tol_rel) const {
    if (A.cols() != d_) throw std::invalid_argument("image_has_finite_log_moment: dimension mismatch");
    const Mat AL = A * L_;
    const double scale = std::max({A.cwiseAbs().maxCoeff(), 1.0}) *
                         std::max({L_.cwiseAbs().maxCoeff(), 1.0});
    for (int i = 0; i < n_; ++i) {
        if (components_[i].finite_log_moment) continue;
        if (AL.rows() > 0 && AL.col(i).cwiseAbs().maxCoeff() > tol_rel * scale) return false;
    }
    return true;
}

bool NoiseModel::all_finite_log_moment() const {
    for (const auto& c : components_)
        if (!c.finite_log_moment) return false;
    return true;
}

bool NoiseModel::all_finite_variance() const {
    for (const auto& c : components_)
        if (!c.finite_variance) return false;
    return true;
}

Vec NoiseModel::mean() const {
    // All supported families are symmetric around 0 when a mean exists.
    return c_;
}

Mat NoiseModel::covariance() const {
    Eigen::VectorXd vars(n_);
    for (int i = 0; i < n_; ++i) vars(i) = components_[i].finite_variance ? components_[i].variance : 0.0;
    return L_ * vars.asDiagonal() * L_.adjoint();
}

namespace {

double draw_component(const NoiseComponent& comp, std::mt19937_64& rng) {
    switch (comp.family) {
        case NoiseFamily::gaussian: {
            std::normal_distribution<double> d(0.0, 1.0);
            return d(rng);
        }
        case NoiseFamily::student_t: {
            std::student_t_distribution<double> d(comp.param);
            return d(rng);
        }
        case NoiseFamily::cauchy: {
            std::cauchy_distribution<double> d(0.0, 1.0);
            return d(rng);
        }
        case NoiseFamily::alpha_stable: {
            // Chambers-Mallows-Stuck, symmetric case.
            const double alpha = comp.param;
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            std::exponential_distribution<double> expo(1.0);
            const double u = 0.5 * M_PI * unif(rng);
            const double w = expo(rng);
            if (std::abs(alpha - 1.0) < 1e-12) return std::tan(u);
            return std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
                   std::pow(std::cos(u - alpha * u) / w, (1.0 - alpha) / alpha);
        }
        case NoiseFamily::log_cauchy: {
            std::cauchy_distribution<double> d(0.0, 1.0);
            return std::exp(d(rng));
        }
    }
    return 0.0;
}

}  // namespace

std::vector<Vec> NoiseModel::sample(long count, std::uint64_t seed) const {
    if (count < 0) throw std::invalid_argument("sample: negative count");
    std::mt19937_64 rng(seed);
    std::vector<Vec> out;
    out.reserve(count);
    Eigen::VectorXd v(n_);
    for (long t = 0; t < count; ++t) {
        for (int i = 0; i < n_; ++i) v(i) = draw_component(components_[i], rng);
        out.emplace_back(L_ * v.cast<cx>() + c_);
    }
    return out;
}

}  // namespace varma
