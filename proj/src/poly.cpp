#include "varma/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace varma {

namespace {

cx unit_node(int k, int n) {
    const double ang = 2.0 * std::numbers::pi * k / n;
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

CPoly CPoly::monomial(cx c, int power) {
    std::vector<cx> v(power + 1, cx(0));
    v[power] = c;
    return CPoly(std::move(v));
}

cx CPoly::eval(cx z) const {
    cx acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double CPoly::max_coeff_norm() const {
    double m = 0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

CPoly CPoly::operator+(const CPoly& o) const {
    std::vector<cx> v(std::max(coeffs_.size(), o.coeffs_.size()), cx(0));
    for (size_t k = 0; k < v.size(); ++k) v[k] = coeff(static_cast<int>(k)) + o.coeff(static_cast<int>(k));
    return CPoly(std::move(v));
}

CPoly CPoly::operator-(const CPoly& o) const { return *this + o * cx(-1); }

CPoly CPoly::operator*(const CPoly& o) const {
    if (is_zero() || o.is_zero()) return CPoly();
    std::vector<cx> v(coeffs_.size() + o.coeffs_.size() - 1, cx(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
    return CPoly(std::move(v));
}

CPoly CPoly::operator*(cx s) const {
    std::vector<cx> v = coeffs_;
    for (auto& c : v) c *= s;
    return CPoly(std::move(v));
}

void CPoly::trim(double tol_rel) {
    const double scale = max_coeff_norm();
    const double tol = tol_rel * std::max(scale, 1e-300);
    while (!coeffs_.empty() && std::abs(coeffs_.back()) <= tol) coeffs_.pop_back();
}

std::pair<CPoly, CPoly> CPoly::divmod(const CPoly& d) const {
    if (d.is_zero()) throw std::invalid_argument("CPoly::divmod: zero divisor");
    std::vector<cx> rem = coeffs_;
    const int dd = d.degree();
    const cx lead = d.coeffs_.back();
    std::vector<cx> quot(std::max<int>(0, degree() - dd + 1), cx(0));
    for (int k = degree(); k >= dd; --k) {
        const cx q = rem[k] / lead;
        quot[k - dd] = q;
        for (int j = 0; j <= dd; ++j) rem[k - dd + j] -= q * d.coeffs_[j];
    }
    if (static_cast<int>(rem.size()) > dd) rem.resize(dd > 0 ? dd : 0);
    CPoly r(std::move(rem));
    return {CPoly(std::move(quot)), std::move(r)};
}

std::pair<CPoly, cx> CPoly::deflate(cx z0) const {
    if (is_zero()) return {CPoly(), cx(0)};
    std::vector<cx> q(coeffs_.size() > 1 ? coeffs_.size() - 1 : 0, cx(0));
    cx carry = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) {
        q[k] = carry;
        carry = coeffs_[k] + carry * z0;
    }
    return {CPoly(std::move(q)), carry};
}

CPoly CPoly::conj_coeffs() const {
    std::vector<cx> v = coeffs_;
    for (auto& c : v) c = std::conj(c);
    return CPoly(std::move(v));
}

MatrixPoly::MatrixPoly(std::vector<Mat> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("MatrixPoly: empty coefficient list");
    rows_ = static_cast<int>(coeffs_[0].rows());
    cols_ = static_cast<int>(coeffs_[0].cols());
    for (const auto& c : coeffs_)
        if (c.rows() != rows_ || c.cols() != cols_)
            throw std::invalid_argument("MatrixPoly: inconsistent coefficient dimensions");
    trim();
}

MatrixPoly MatrixPoly::constant(const Mat& c) { return MatrixPoly(std::vector<Mat>{c}); }

MatrixPoly MatrixPoly::identity(int n) { return constant(Mat::Identity(n, n)); }

MatrixPoly MatrixPoly::ar_char(const std::vector<Mat>& psis, int m) {
    std::vector<Mat> v;
    v.push_back(Mat::Identity(m, m));
    for (const auto& psi : psis) v.push_back(-psi);
    return MatrixPoly(std::move(v));
}

MatrixPoly MatrixPoly::ma_char(const std::vector<Mat>& thetas) { return MatrixPoly(thetas); }

Mat MatrixPoly::coeff(int k) const {
    if (k >= 0 && k < static_cast<int>(coeffs_.size())) return coeffs_[k];
    return Mat::Zero(rows_, cols_);
}

CPoly MatrixPoly::entry(int i, int j) const {
    std::vector<cx> v(coeffs_.size());
    for (size_t k = 0; k < coeffs_.size(); ++k) v[k] = coeffs_[k](i, j);
    return CPoly(std::move(v));
}

Mat MatrixPoly::eval(cx z) const {
    Mat acc = Mat::Zero(rows_, cols_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double MatrixPoly::max_coeff_norm() const {
    double m = 0;
    for (const auto& c : coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
}

MatrixPoly MatrixPoly::operator+(const MatrixPoly& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("MatrixPoly::operator+: dimension mismatch");
    MatrixPoly out(rows_, cols_);
    const size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    out.coeffs_.reserve(n);
    for (size_t k = 0; k < n; ++k)
        out.coeffs_.push_back(coeff(static_cast<int>(k)) + o.coeff(static_cast<int>(k)));
    out.trim();
    return out;
}

MatrixPoly MatrixPoly::operator-(const MatrixPoly& o) const { return *this + o.scaled(cx(-1)); }

MatrixPoly MatrixPoly::operator*(const MatrixPoly& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("MatrixPoly::operator*: dimension mismatch");
    MatrixPoly out(rows_, o.cols_);
    if (is_zero() || o.is_zero()) return out;
    out.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, Mat::Zero(rows_, o.cols_));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) out.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
    out.trim();
    return out;
}

MatrixPoly MatrixPoly::operator*(const CPoly& s) const {
    MatrixPoly out(rows_, cols_);
    if (is_zero() || s.is_zero()) return out;
    out.coeffs_.assign(coeffs_.size() + s.coeffs().size() - 1, Mat::Zero(rows_, cols_));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < s.coeffs().size(); ++j) out.coeffs_[i + j] += coeffs_[i] * s.coeffs()[j];
    out.trim();
    return out;
}

MatrixPoly MatrixPoly::scaled(cx s) const {
    MatrixPoly out = *this;
    for (auto& c : out.coeffs_) c *= s;
    return out;
}

void MatrixPoly::trim(double tol_rel) {
    const double scale = max_coeff_norm();
    const double tol = tol_rel * std::max(scale, 1e-300);
    while (!coeffs_.empty() && coeffs_.back().cwiseAbs().maxCoeff() <= tol) coeffs_.pop_back();
}

namespace {

// Inverse DFT fit of a degree-bound polynomial from samples at r * omega^k.
CPoly fit_from_circle(const std::vector<cx>& samples, double r) {
    const int n = static_cast<int>(samples.size());
    std::vector<cx> coeffs(n, cx(0));
    for (int j = 0; j < n; ++j) {
        cx acc(0);
        for (int k = 0; k < n; ++k) acc += samples[k] * unit_node(-j * k % n, n);
        coeffs[j] = acc / (static_cast<double>(n) * std::pow(r, j));
    }
    CPoly p(std::move(coeffs));
    p.trim(1e-11);
    return p;
}

// Adjugate of a numeric matrix via cofactor determinants; valid at singular
// points as well.
Mat numeric_adjugate(const Mat& A) {
    const int n = static_cast<int>(A.rows());
    if (n == 1) return Mat::Ones(1, 1);
    Mat adj(n, n);
    Mat minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mr, mc) = A(r, c);
                    ++mc;
                }
                ++mr;
            }
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            adj(j, i) = sign * minor.determinant();  // transpose of cofactor matrix
        }
    }
    return adj;
}

}  // namespace

CPoly det_poly(const MatrixPoly& P) {
    if (P.rows() != P.cols()) throw std::invalid_argument("det_poly: non-square input");
    const int m = P.rows();
    if (P.is_zero()) return m == 0 ? CPoly::constant(1) : CPoly();
    const int bound = m * std::max(P.degree(), 0);
    const int n = bound + 1;
    const double r = 1.0;
    std::vector<cx> samples(n);
    for (int k = 0; k < n; ++k) samples[k] = P.eval(r * unit_node(k, n)).determinant();
    return fit_from_circle(samples, r);
}

MatrixPoly adjugate_poly(const MatrixPoly& P) {
    if (P.rows() != P.cols()) throw std::invalid_argument("adjugate_poly: non-square input");
    const int m = P.rows();
    if (m == 1) return MatrixPoly::constant(Mat::Ones(1, 1));
    const int bound = (m - 1) * std::max(P.degree(), 0);
    const int n = bound + 1;
    const double r = 1.0;
    std::vector<Mat> samples(n);
    for (int k = 0; k < n; ++k) samples[k] = numeric_adjugate(P.eval(r * unit_node(k, n)));
    std::vector<Mat> coeffs(n, Mat::Zero(m, m));
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) coeffs[j] += samples[k] * unit_node(-j * k % n, n);
        coeffs[j] /= static_cast<double>(n) * std::pow(r, j);
    }
    MatrixPoly out(std::move(coeffs));
    out.trim(1e-11);
    return out;
}

namespace {

// Exact division of each entry of A by the scalar polynomial d; throws when
// a remainder exceeds the relative tolerance.
MatrixPoly divide_exact(const MatrixPoly& A, const CPoly& d, double tol_rel) {
    const double scale = std::max(A.max_coeff_norm(), 1e-300);
    std::vector<CPoly> entries(A.rows() * A.cols());
    int max_deg = 0;
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) {
            auto [q, r] = A.entry(i, j).divmod(d);
            if (r.max_coeff_norm() > tol_rel * scale * 1e3)
                throw std::runtime_error("divide_exact: non-trivial remainder");
            entries[i * A.cols() + j] = q;
            max_deg = std::max(max_deg, q.degree());
        }
    }
    std::vector<Mat> coeffs(std::max(max_deg + 1, 1), Mat::Zero(A.rows(), A.cols()));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            for (int k = 0; k <= entries[i * A.cols() + j].degree(); ++k)
                coeffs[k](i, j) = entries[i * A.cols() + j].coeff(k);
    MatrixPoly out(std::move(coeffs));
    out.trim();
    return out;
}

struct PolyColumnMatrix {
    // Column-major grid of scalar polynomials, m rows by n cols.
    int m, n;
    std::vector<CPoly> e;
    CPoly& at(int i, int j) { return e[j * m + i]; }
    const CPoly& at(int i, int j) const { return e[j * m + i]; }

    double max_norm() const {
        double s = 0;
        for (const auto& p : e) s = std::max(s, p.max_coeff_norm());
        return s;
    }
};

}  // namespace

GcldResult gcld(const MatrixPoly& P, const MatrixPoly& Q, double tol_rel) {
    if (P.rows() != P.cols()) throw std::invalid_argument("gcld: P must be square");
    if (Q.rows() != P.rows()) throw std::invalid_argument("gcld: row mismatch");
    const int m = P.rows();
    const int n = m + Q.cols();

    PolyColumnMatrix A{m, n, {}};
    A.e.resize(static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) A.at(i, j) = P.entry(i, j);
        for (int j = 0; j < Q.cols(); ++j) A.at(i, m + j) = Q.entry(i, j);
    }
    const double scale = std::max(A.max_norm(), 1e-300);
    const double tol = tol_rel * scale;

    auto row_entry_zero = [&](int i, int j) {
        CPoly p = A.at(i, j);
        p.trim();
        return p.max_coeff_norm() <= tol;
    };

    // Column-compress [P Q] to [R 0] by repeated degree reduction in each
    // pivot row, restricted to the trailing columns.
    for (int i = 0; i < m; ++i) {
        for (;;) {
            // Active columns: j >= i with nonzero entry in row i.
            int pivot = -1;
            int pivot_deg = 0;
            for (int j = i; j < n; ++j) {
                if (row_entry_zero(i, j)) continue;
                CPoly p = A.at(i, j);
                p.trim(tol_rel * scale / std::max(p.max_coeff_norm(), 1e-300));
                const int dg = p.degree();
                if (pivot < 0 || dg < pivot_deg ||
                    (dg == pivot_deg &&
                     std::abs(p.coeff(dg)) > std::abs(A.at(i, pivot).coeff(pivot_deg)))) {
                    pivot = j;
                    pivot_deg = dg;
                }
            }
            if (pivot < 0) throw std::runtime_error("gcld: compound block rank-deficient in row");
            bool reduced_any = false;
            for (int j = i; j < n; ++j) {
                if (j == pivot || row_entry_zero(i, j)) continue;
                auto [q, r] = A.at(i, j).divmod(A.at(i, pivot));
                for (int k = 0; k < m; ++k) {
                    A.at(k, j) = A.at(k, j) - A.at(k, pivot) * q;
                    A.at(k, j).trim(1e-14);
                }
                reduced_any = true;
            }
            // Count surviving nonzero columns in row i.
            int alive = 0;
            for (int j = i; j < n; ++j)
                if (!row_entry_zero(i, j)) ++alive;
            if (alive <= 1) {
                if (pivot != i)
                    for (int k = 0; k < m; ++k) std::swap(A.at(k, i), A.at(k, pivot));
                break;
            }
            if (!reduced_any) throw std::runtime_error("gcld: reduction stalled");
        }
    }

    int max_deg = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) max_deg = std::max(max_deg, A.at(i, j).degree());
    std::vector<Mat> rc(std::max(max_deg + 1, 1), Mat::Zero(m, m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k <= A.at(i, j).degree(); ++k) rc[k](i, j) = A.at(i, j).coeff(k);
    MatrixPoly R(std::move(rc));
    R.trim();

    // Recover the right factors: R * P1 = P means det(R) * P1 = Adj(R) * P.
    const CPoly dR = det_poly(R);
    if (dR.is_zero()) throw std::runtime_error("gcld: divisor determinant vanished");
    const MatrixPoly adjR = adjugate_poly(R);
    MatrixPoly P1 = divide_exact(adjR * P, dR, tol_rel);
    MatrixPoly Q1 = divide_exact(adjR * Q, dR, tol_rel);
    return {std::move(R), std::move(P1), std::move(Q1)};
}

bool is_unimodular(const MatrixPoly& R, double tol_rel) {
    if (R.rows() != R.cols()) throw std::invalid_argument("is_unimodular: non-square input");
    CPoly d = det_poly(R);
    if (d.is_zero()) return false;
    const double scale = d.max_coeff_norm();
    for (int k = 1; k <= d.degree(); ++k)
        if (std::abs(d.coeff(k)) > tol_rel * scale) return false;
    return std::abs(d.coeff(0)) > tol_rel * scale;
}

bool are_left_coprime(const MatrixPoly& P, const MatrixPoly& Q, double tol_rel) {
    return is_unimodular(gcld(P, Q, tol_rel).R, tol_rel);
}

std::vector<std::pair<cx, int>> roots_with_multiplicity(const CPoly& p, double tol) {
    if (p.is_zero()) throw std::invalid_argument("roots_with_multiplicity: zero polynomial");
    CPoly q = p;
    q.trim(1e-12);
    const int n = q.degree();
    if (n <= 0) return {};
    Mat comp = Mat::Zero(n, n);
    const cx lead = q.coeff(n);
    for (int k = 0; k < n; ++k) comp(0, k) = -q.coeff(n - 1 - k) / lead;
    for (int k = 1; k < n; ++k) comp(k, k - 1) = cx(1);
    Eigen::ComplexEigenSolver<Mat> es(comp, false);
    std::vector<cx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);

    // Greedy clustering: merge roots within tol of a cluster representative.
    std::vector<std::pair<cx, int>> out;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        cx sum = roots[i];
        int count = 1;
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            const cx rep = sum / static_cast<double>(count);
            for (size_t j = 0; j < roots.size(); ++j) {
                if (used[j] || std::abs(roots[j] - rep) >= tol) continue;
                sum += roots[j];
                ++count;
                used[j] = true;
                grew = true;
            }
        }
        out.emplace_back(sum / static_cast<double>(count), count);
    }
    return out;
}

int zero_order_at(const CPoly& p, cx z0, double tol_rel, double scale) {
    if (p.is_zero()) return std::numeric_limits<int>::max();
    if (scale <= 0) scale = std::max(p.max_coeff_norm(), 1e-300);
    CPoly cur = p;
    int order = 0;
    while (!cur.is_zero()) {
        auto [q, rem] = cur.deflate(z0);
        if (std::abs(rem) > tol_rel * scale) break;
        cur = std::move(q);
        ++order;
        if (order > p.degree()) break;
    }
    return order;
}

}  // namespace varma
