#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

namespace cmvm {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Constant M x N matrix, row-major like the problem files it is read from.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

/// Real vector of 2K entries holding K complex values as (re, im) pairs:
/// data[2k] = re(v_k), data[2k + 1] = im(v_k).
using InterleavedVector = Eigen::VectorXd;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ShapeError with a message naming both dimensions.
void require_dims(const char* what, Eigen::Index expected, Eigen::Index got);

void require_finite(const char* what, const ComplexMatrix& a);
void require_finite(const char* what, const ComplexVector& x);

// Scalar reference formulas ------------------------------------------------

/// Four-multiplication complex product (a + jb)(c + jd) = ac - bd + j(ad + bc).
template <typename Real>
std::complex<Real> direct_complex_mult(const std::complex<Real>& lhs,
                                       const std::complex<Real>& rhs) {
  const Real a = lhs.real(), b = lhs.imag();
  const Real c = rhs.real(), d = rhs.imag();
  return {a * c - b * d, a * d + b * c};
}

/// Three-multiplication product: re = ac - bd, im = (a + b)(c + d) - ac - bd.
template <typename Real>
std::complex<Real> gauss_complex_mult(const std::complex<Real>& lhs,
                                      const std::complex<Real>& rhs) {
  const Real a = lhs.real(), b = lhs.imag();
  const Real c = rhs.real(), d = rhs.imag();
  const Real ac = a * c;
  const Real bd = b * d;
  const Real cross = (a + b) * (c + d);
  return {ac - bd, cross - ac - bd};
}

/// The factorization wired into the compiled pipeline:
/// p0 = a(c - d), p1 = b(c + d), p2 = (a - b)d, re = p0 + p2, im = p1 + p2.
template <typename Real>
std::complex<Real> lifted_gauss_mult(const std::complex<Real>& lhs,
                                     const std::complex<Real>& rhs) {
  const Real a = lhs.real(), b = lhs.imag();
  const Real c = rhs.real(), d = rhs.imag();
  const Real p0 = a * (c - d);
  const Real p1 = b * (c + d);
  const Real p2 = (a - b) * d;
  return {p0 + p2, p1 + p2};
}

/// Winograd inner product sum_k (a_2k + x_2k+1)(a_2k+1 + x_2k) - c - xi with
/// c = sum_k a_2k a_2k+1 and xi = sum_k x_2k x_2k+1. Products use the Gauss
/// three-multiplication form. Length must be even; pad odd inputs first.
Complex winograd_inner_product(const ComplexVector& a, const ComplexVector& x);

/// Plain sum_k a_k x_k with direct products.
Complex dot_product(const ComplexVector& a, const ComplexVector& x);

/// Ground truth y = A x with four-multiplication complex products.
ComplexVector naive_cmv(const ComplexMatrix& a, const ComplexVector& x);

InterleavedVector interleave(const ComplexVector& v);
ComplexVector deinterleave(const InterleavedVector& data);

/// ||computed - reference||_inf / max(1, ||reference||_inf).
template <typename DerivedA, typename DerivedB>
double relative_error(const Eigen::MatrixBase<DerivedA>& computed,
                      const Eigen::MatrixBase<DerivedB>& reference) {
  if (computed.size() != reference.size()) {
    throw ShapeError("relative_error: sizes " +
                     std::to_string(computed.size()) + " and " +
                     std::to_string(reference.size()) + " differ");
  }
  if (computed.size() == 0) return 0.0;
  const double denom =
      std::max(1.0, static_cast<double>(reference.cwiseAbs().maxCoeff()));
  return static_cast<double>((computed - reference).cwiseAbs().maxCoeff()) /
         denom;
}

double relative_error(const Complex& computed, const Complex& reference);

}  // namespace cmvm
