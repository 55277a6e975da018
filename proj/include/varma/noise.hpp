#ifndef VARMA_NOISE_HPP
#define VARMA_NOISE_HPP

#include <optional>
#include <string>
#include <vector>

#include "varma/poly.hpp"

namespace varma {

enum class NoiseFamily { gaussian, student_t, cauchy, alpha_stable, log_cauchy };

NoiseFamily noise_family_from_string(const std::string& name);
std::string to_string(NoiseFamily f);

struct NoiseComponent {
    NoiseFamily family = NoiseFamily::gaussian;
    double param = 0.0;  // nu for student_t, alpha for alpha_stable; unused otherwise
    bool finite_log_moment = true;
    bool finite_variance = true;
    double variance = 1.0;  // meaningful iff finite_variance
};

NoiseComponent make_component(NoiseFamily family, double param = 0.0);

/// Unitary change of coordinates splitting C^d into K-perp (first s rows)
/// and the almost surely constant subspace K (last d-s rows).
struct UnitarySplit {
    Mat U;  // d x d unitary
    int s;  // dim K-perp = numerical rank of L
    Vec u;  // (d - s) constant vector, u = (rows s+1..d of U) * c
};

/// Structured i.i.d. noise Z_t = L V_t + c with independent non-degenerate
/// scalar components V_t.
class NoiseModel {
  public:
    NoiseModel(Mat L, Vec c, std::vector<NoiseComponent> components, double rank_tol = 0.0);

    static NoiseModel iid(int d, NoiseFamily family, double param = 0.0);

    int dim() const { return d_; }
    int component_count() const { return n_; }
    const Mat& mixing() const { return L_; }
    const Vec& shift() const { return c_; }
    const std::vector<NoiseComponent>& components() const { return components_; }

    /// Orthonormal basis of K = { a : a* Z_0 is a.s. constant } = ker(L*)^... ,
    /// columns of the returned matrix; d x (d - s).
    Mat degenerate_subspace() const;

    UnitarySplit unitary_split() const;

    /// A c when A L == 0 (so A Z_0 is a.s. the constant A c), otherwise empty.
    std::optional<Vec> image_is_constant(const Mat& A, double tol_rel = 1e-9) const;

    /// True iff every column of A L that hits an infinite-log-moment
    /// component vanishes.
    bool image_has_finite_log_moment(const Mat& A, double tol_rel = 1e-9) const;

    bool all_finite_log_moment() const;
    bool all_finite_variance() const;

    /// E Z_0 and Cov Z_0; only meaningful when every component has a finite
    /// mean / variance (gaussian components are standardized N(0,1)).
    Vec mean() const;
    Mat covariance() const;

    std::vector<Vec> sample(long count, std::uint64_t seed) const;

  private:
    int d_, n_;
    Mat L_;
    Vec c_;
    std::vector<NoiseComponent> components_;
    double rank_tol_;
};

}  // namespace varma

#endif
