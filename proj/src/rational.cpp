#include "varma/rational.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace varma {

Mat LaurentSeries::at_or_zero(int j, int rows, int cols) const {
    if (j < j_min || j > j_max) return Mat::Zero(rows, cols);
    return coeffs[j - j_min];
}

double LaurentSeries::norm_at(int j) const {
    if (j < j_min || j > j_max) return 0.0;
    return coeffs[j - j_min].norm();
}

std::vector<std::pair<cx, int>> unit_circle_singularities(const MatrixPoly& P, double tol) {
    CPoly d = det_poly(P);
    if (d.is_zero()) throw std::invalid_argument("unit_circle_singularities: det P identically zero");
    std::vector<std::pair<cx, int>> out;
    for (const auto& [z0, mult] : roots_with_multiplicity(d, tol))
        if (std::abs(std::abs(z0) - 1.0) < tol) out.emplace_back(z0, mult);
    return out;
}

RemovabilityResult is_removable(const MatrixPoly& P, const MatrixPoly& Qt, double tol,
                                double zero_tol) {
    CPoly den = det_poly(P);
    if (den.is_zero()) throw std::invalid_argument("is_removable: det P identically zero");
    MatrixPoly num = adjugate_poly(P) * Qt;

    RemovabilityResult res;
    res.removable = true;
    const auto circle_roots = unit_circle_singularities(P, tol);
    const double num_scale = std::max(num.max_coeff_norm(), 1e-300);

    for (const auto& [z0, mult] : circle_roots) {
        for (int i = 0; i < num.rows() && res.removable; ++i) {
            for (int j = 0; j < num.cols(); ++j) {
                const int order = zero_order_at(num.entry(i, j), z0, zero_tol, num_scale);
                if (order < mult) {
                    res.removable = false;
                    res.offending_row = i;
                    res.offending_col = j;
                    res.offending_root = z0;
                    res.reason = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") vanishes to order " + std::to_string(order) + " < " +
                                 std::to_string(mult) + " at z0";
                    break;
                }
            }
        }
        if (!res.removable) break;
    }
    if (!res.removable) {
        res.numerator = num;
        res.denominator = den;
        return res;
    }

    // Deflate every unit-circle factor from numerator and denominator.
    for (const auto& [z0, mult] : circle_roots) {
        for (int t = 0; t < mult; ++t) {
            den = den.deflate(z0).first;
            std::vector<CPoly> entries(num.rows() * num.cols());
            int max_deg = 0;
            for (int i = 0; i < num.rows(); ++i)
                for (int j = 0; j < num.cols(); ++j) {
                    entries[i * num.cols() + j] = num.entry(i, j).deflate(z0).first;
                    max_deg = std::max(max_deg, entries[i * num.cols() + j].degree());
                }
            std::vector<Mat> coeffs(std::max(max_deg + 1, 1), Mat::Zero(num.rows(), num.cols()));
            for (int i = 0; i < num.rows(); ++i)
                for (int j = 0; j < num.cols(); ++j)
                    for (int k = 0; k <= entries[i * num.cols() + j].degree(); ++k)
                        coeffs[k](i, j) = entries[i * num.cols() + j].coeff(k);
            num = MatrixPoly(std::move(coeffs));
        }
    }
    res.numerator = std::move(num);
    res.denominator = std::move(den);
    return res;
}

namespace {

// In-place radix-2 FFT; sign = -1 forward, +1 inverse (unscaled).
void fft_radix2(std::vector<cx>& a, int sign) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cx w(1);
            for (size_t k = 0; k < len / 2; ++k) {
                const cx u = a[i + k];
                const cx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// One pass of coefficient extraction at N nodes on the unit circle.
std::vector<Mat> sample_window(const MatrixPoly& num, const CPoly& den, int j_min, int j_max,
                               size_t N) {
    const int rows = num.rows(), cols = num.cols();
    std::vector<Mat> node_vals(N);
    for (size_t k = 0; k < N; ++k) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N);
        const cx z(std::cos(ang), std::sin(ang));
        const cx d = den.eval(z);
        if (std::abs(d) < 1e-300) throw std::runtime_error("laurent_coeffs: denominator vanished at node");
        node_vals[k] = num.eval(z) / d;
    }
    std::vector<Mat> out(j_max - j_min + 1, Mat::Zero(rows, cols));
    std::vector<cx> work(N);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            for (size_t k = 0; k < N; ++k) work[k] = node_vals[k](i, j);
            fft_radix2(work, -1);
            for (int jj = j_min; jj <= j_max; ++jj) {
                const size_t bin = static_cast<size_t>(((jj % static_cast<int>(N)) +
                                                        static_cast<int>(N)) %
                                                       static_cast<int>(N));
                out[jj - j_min](i, j) = work[bin] / static_cast<double>(N);
            }
        }
    }
    return out;
}

void fit_decay(LaurentSeries& s) {
    // Least-squares fit of log ||M_j|| against |j| over the window tail.
    std::vector<std::pair<double, double>> pts;
    const int tail = std::max(3, (s.j_max - s.j_min + 1) / 3);
    for (int j = s.j_max - tail + 1; j <= s.j_max; ++j) {
        const double n = s.norm_at(j);
        if (n > 1e-280) pts.emplace_back(std::abs(j), std::log(n));
    }
    for (int j = s.j_min; j < s.j_min + tail; ++j) {
        if (j >= 0) break;
        const double n = s.norm_at(j);
        if (n > 1e-280) pts.emplace_back(std::abs(j), std::log(n));
    }
    if (pts.size() < 2) {
        // Finite (e.g. nilpotent or pure MA) sequences: no decay to fit.
        s.decay_C = 0.0;
        for (int j = s.j_min; j <= s.j_max; ++j) s.decay_C = std::max(s.decay_C, s.norm_at(j));
        s.decay_rho = 1e-6;
        return;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    double slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0.0;
    double intercept = (sy - slope * sx) / n;
    s.decay_rho = std::min(std::exp(slope), 0.999999);
    s.decay_C = std::exp(intercept);
}

}  // namespace

LaurentSeries laurent_coeffs(const MatrixPoly& P, const MatrixPoly& Qt, int j_min, int j_max,
                             double tol) {
    if (j_max < j_min) throw std::invalid_argument("laurent_coeffs: empty window");
    auto rem = is_removable(P, Qt);
    if (!rem.removable)
        throw std::runtime_error("laurent_coeffs: non-removable unit-circle singularity (" +
                                 rem.reason + ")");
    const MatrixPoly& num = rem.numerator;
    const CPoly& den = rem.denominator;

    const int window = j_max - j_min + 1;
    size_t N = 64;
    while (N < static_cast<size_t>(4 * window)) N <<= 1;

    std::vector<Mat> prev = sample_window(num, den, j_min, j_max, N);
    for (;;) {
        N <<= 1;
        if (N > (1u << 20))
            throw std::runtime_error(
                "laurent_coeffs: aliasing control failed (root too close to the unit circle)");
        std::vector<Mat> cur = sample_window(num, den, j_min, j_max, N);
        double diff = 0;
        for (int k = 0; k < window; ++k)
            diff = std::max(diff, (cur[k] - prev[k]).cwiseAbs().maxCoeff());
        prev = std::move(cur);
        if (diff < tol) break;
    }

    LaurentSeries out;
    out.j_min = j_min;
    out.j_max = j_max;
    out.coeffs = std::move(prev);
    fit_decay(out);
    return out;
}

LaurentSeries causal_coeffs(const std::vector<Mat>& psis, const MatrixPoly& Qt, int j_max) {
    const int m = Qt.rows() > 0 ? Qt.rows() : (psis.empty() ? 0 : static_cast<int>(psis[0].rows()));
    const int d = Qt.cols();
    const int p = static_cast<int>(psis.size());
    {
        MatrixPoly P = MatrixPoly::ar_char(psis, m);
        CPoly det = det_poly(P);
        for (const auto& [z0, mult] : roots_with_multiplicity(det))
            if (std::abs(z0) <= 1.0 + 1e-9)
                throw std::runtime_error("causal_coeffs: det P has a root inside the closed unit disk");
    }
    LaurentSeries out;
    out.j_min = 0;
    out.j_max = j_max;
    out.coeffs.assign(j_max + 1, Mat::Zero(m, d));
    for (int j = 0; j <= j_max; ++j) {
        Mat mj = Qt.coeff(j);
        for (int k = 1; k <= std::min(j, p); ++k) mj += psis[k - 1] * out.coeffs[j - k];
        out.coeffs[j] = mj;
    }
    fit_decay(out);
    return out;
}

double convolution_residual(const MatrixPoly& P, const MatrixPoly& Qt, const LaurentSeries& M) {
    const int p_deg = P.degree();
    double worst = 0;
    for (int j = M.j_min + p_deg; j <= M.j_max; ++j) {
        Mat acc = Mat::Zero(P.rows(), M.coeffs[0].cols());
        for (int k = 0; k <= p_deg; ++k) acc += P.coeff(k) * M.at_or_zero(j - k, P.rows(), static_cast<int>(M.coeffs[0].cols()));
        acc -= Qt.coeff(j);
        worst = std::max(worst, acc.cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace varma
