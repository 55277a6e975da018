#ifndef VARMA_POLY_HPP
#define VARMA_POLY_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace varma {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Scalar polynomial in one complex variable, coefficients ascending in
/// powers of z. The zero polynomial has an empty coefficient list and
/// degree() == kZeroDegree.
class CPoly {
  public:
    static constexpr int kZeroDegree = -1;

    CPoly() = default;
    explicit CPoly(std::vector<cx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    static CPoly constant(cx c) { return CPoly({c}); }
    static CPoly monomial(cx c, int power);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    cx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : cx(0);
    }
    const std::vector<cx>& coeffs() const { return coeffs_; }

    cx eval(cx z) const;
    double max_coeff_norm() const;

    CPoly operator+(const CPoly& o) const;
    CPoly operator-(const CPoly& o) const;
    CPoly operator*(const CPoly& o) const;
    CPoly operator*(cx s) const;

    /// Drops trailing coefficients with magnitude below tol_rel times the
    /// largest coefficient magnitude.
    void trim(double tol_rel = 1e-13);

    /// Euclidean division: *this = q * d + r with deg r < deg d.
    /// Throws on zero divisor.
    std::pair<CPoly, CPoly> divmod(const CPoly& d) const;

    /// Synthetic division by (z - z0): returns (quotient, remainder value).
    std::pair<CPoly, cx> deflate(cx z0) const;

    /// Coefficientwise complex conjugation.
    CPoly conj_coeffs() const;

  private:
    std::vector<cx> coeffs_;
};

/// Matrix-valued polynomial; coefficient matrices ascending in powers of z.
class MatrixPoly {
  public:
    MatrixPoly() = default;
    MatrixPoly(int rows, int cols) : rows_(rows), cols_(cols) {}
    explicit MatrixPoly(std::vector<Mat> coeffs);
    static MatrixPoly constant(const Mat& c);
    static MatrixPoly identity(int n);
    /// P(z) = Id - sum_k Psi[k] z^{k+1}   (AR characteristic polynomial)
    static MatrixPoly ar_char(const std::vector<Mat>& psis, int m);
    /// Q(z) = sum_k Theta[k] z^k          (MA characteristic polynomial)
    static MatrixPoly ma_char(const std::vector<Mat>& thetas);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    Mat coeff(int k) const;
    const std::vector<Mat>& coeffs() const { return coeffs_; }
    CPoly entry(int i, int j) const;

    Mat eval(cx z) const;
    double max_coeff_norm() const;

    MatrixPoly operator+(const MatrixPoly& o) const;
    MatrixPoly operator-(const MatrixPoly& o) const;
    MatrixPoly operator*(const MatrixPoly& o) const;
    MatrixPoly operator*(const CPoly& s) const;
    MatrixPoly scaled(cx s) const;

    void trim(double tol_rel = 1e-13);

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Mat> coeffs_;
};

/// Determinant of a square matrix polynomial, by evaluation at uniformly
/// spaced nodes on a circle followed by an inverse DFT fit.
CPoly det_poly(const MatrixPoly& P);

/// Adjugate polynomial: P(z) * Adj(P)(z) == det_poly(P)(z) * Id.
MatrixPoly adjugate_poly(const MatrixPoly& P);

struct GcldResult {
    MatrixPoly R;   // greatest common left divisor, m x m
    MatrixPoly P1;  // P = R * P1
    MatrixPoly Q1;  // Q = R * Q1
};

/// Greatest common left divisor of P (square, det != 0) and Q via Hermite
/// style elementary column operations on the compound block [P Q].
GcldResult gcld(const MatrixPoly& P, const MatrixPoly& Q, double tol_rel = 1e-9);

bool is_unimodular(const MatrixPoly& R, double tol_rel = 1e-9);
bool are_left_coprime(const MatrixPoly& P, const MatrixPoly& Q, double tol_rel = 1e-9);

/// Roots of p as (root, multiplicity) pairs; companion-matrix eigenvalues
/// clustered at pairwise distance < tol.
std::vector<std::pair<cx, int>> roots_with_multiplicity(const CPoly& p, double tol = 1e-7);

/// Order of the zero of p at z0: number of successive synthetic divisions by
/// (z - z0) whose remainder is below tol_rel * scale. `scale` defaults to the
/// largest coefficient magnitude of p.
int zero_order_at(const CPoly& p, cx z0, double tol_rel = 1e-9, double scale = 0.0);

}  // namespace varma

#endif
