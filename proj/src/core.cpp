#include "cmvm/core.hpp"

#include <cmath>

namespace cmvm {

void require_dims(const char* what, Eigen::Index expected, Eigen::Index got) {
  if (expected != got) {
    throw ShapeError(std::string(what) + ": expected dimension " +
                     std::to_string(expected) + ", got " +
                     std::to_string(got));
  }
}

namespace {

bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

void require_finite(const char* what, const ComplexMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!finite(a(i, j))) {
        throw NonFiniteError(std::string(what) + ": non-finite entry at (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             ")");
      }
    }
  }
}

void require_finite(const char* what, const ComplexVector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!finite(x(i))) {
      throw NonFiniteError(std::string(what) + ": non-finite entry at " +
                           std::to_string(i));
    }
  }
}

Complex winograd_inner_product(const ComplexVector& a,
                               const ComplexVector& x) {
  require_dims("winograd_inner_product", a.size(), x.size());
  if (a.size() % 2 != 0) {
    throw ShapeError("winograd_inner_product: odd length " +
                     std::to_string(a.size()) + "; pad to even first");
  }
  require_finite("winograd_inner_product", a);
  require_finite("winograd_inner_product", x);

  Complex cross{0.0, 0.0};
  Complex c{0.0, 0.0};
  Complex xi{0.0, 0.0};
  for (Eigen::Index k = 0; k < a.size() / 2; ++k) {
    cross += gauss_complex_mult<double>(a(2 * k) + x(2 * k + 1),
                                        a(2 * k + 1) + x(2 * k));
    c += gauss_complex_mult<double>(a(2 * k), a(2 * k + 1));
    xi += gauss_complex_mult<double>(x(2 * k), x(2 * k + 1));
  }
  return cross - c - xi;
}

Complex dot_product(const ComplexVector& a, const ComplexVector& x) {
  require_dims("dot_product", a.size(), x.size());
  Complex sum{0.0, 0.0};
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    sum += direct_complex_mult<double>(a(k), x(k));
  }
  return sum;
}

ComplexVector naive_cmv(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ShapeError("naive_cmv: matrix is " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) +
                     "; both dimensions must be positive");
  }
  if (a.cols() != x.size()) {
    throw ShapeError("naive_cmv: matrix has " + std::to_string(a.cols()) +
                     " columns but vector has length " +
                     std::to_string(x.size()));
  }
  require_finite("naive_cmv matrix", a);
  require_finite("naive_cmv vector", x);

  ComplexVector y(a.rows());
  for (Eigen::Index m = 0; m < a.rows(); ++m) {
    Complex acc = direct_complex_mult<double>(a(m, 0), x(0));
    for (Eigen::Index n = 1; n < a.cols(); ++n) {
      acc += direct_complex_mult<double>(a(m, n), x(n));
    }
    y(m) = acc;
  }
  return y;
}

InterleavedVector interleave(const ComplexVector& v) {
  InterleavedVector data(2 * v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    data(2 * k) = v(k).real();
    data(2 * k + 1) = v(k).imag();
  }
  return data;
}

ComplexVector deinterleave(const InterleavedVector& data) {
  if (data.size() % 2 != 0) {
    throw ShapeError("deinterleave: odd length " +
                     std::to_string(data.size()));
  }
  ComplexVector v(data.size() / 2);
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    v(k) = Complex{data(2 * k), data(2 * k + 1)};
  }
  return v;
}

double relative_error(const Complex& computed, const Complex& reference) {
  const double err = std::max(std::abs(computed.real() - reference.real()),
                              std::abs(computed.imag() - reference.imag()));
  const double scale = std::max(
      {1.0, std::abs(reference.real()), std::abs(reference.imag())});
  return err / scale;
}

}  // namespace cmvm
