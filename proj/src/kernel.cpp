#include "cmvm/kernel.hpp"

#include <cmath>

namespace cmvm {

KernelOperators build_kernel_operators(Index m, Index n) {
  const Index pairs = m * n / 2;
  SumCombine body = build_sum_combine(m, n);
  SumCombine xi = build_sum_combine(1, n);
  return KernelOperators{
      .p_main = build_P(m, n),
      .ga_lift = build_gauss_lift(pairs, LiftSide::Left),
      .gb_lift = build_gauss_lift(pairs, LiftSide::Right),
      .sigma = std::move(body.sigma),
      .hcombine = std::move(body.hcombine),
      .p_xi_bcast = build_broadcast(m),
      .sigma_xi = std::move(xi.sigma),
      .hcombine_xi = std::move(xi.hcombine),
      .ga_lift_xi = build_gauss_lift(n / 2, LiftSide::Left),
      .gb_lift_xi = build_gauss_lift(n / 2, LiftSide::Right),
  };
}

std::vector<NamedOperator> named_operators(const KernelOperators& ops) {
  return {
      {"P", &ops.p_main},
      {"Ga-lift", &ops.ga_lift},
      {"Gb-lift", &ops.gb_lift},
      {"Sigma", &ops.sigma},
      {"H-combine", &ops.hcombine},
      {"xi-broadcast", &ops.p_xi_bcast},
      {"xi-Sigma", &ops.sigma_xi},
      {"xi-H-combine", &ops.hcombine_xi},
      {"xi-Ga-lift", &ops.ga_lift_xi},
      {"xi-Gb-lift", &ops.gb_lift_xi},
  };
}

CompiledKernel compile(const ComplexMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m == 0 || n == 0) {
    throw ShapeError("compile: matrix is " + std::to_string(m) + "x" +
                     std::to_string(n) + "; both dimensions must be positive");
  }
  if (n % 2 != 0) {
    throw ShapeError("compile: matrix has odd column count " +
                     std::to_string(n) +
                     "; pad with pad_to_even before compiling");
  }
  require_finite("compile", a);

  Eigen::VectorXd a1(m * n), a2(m * n), c_neg(2 * m);
  for (Index k = 0; k < n / 2; ++k) {
    for (Index r = 0; r < m; ++r) {
      const Index at = 2 * m * k + 2 * r;
      a1(at) = a(r, 2 * k + 1).real();
      a1(at + 1) = a(r, 2 * k + 1).imag();
      a2(at) = a(r, 2 * k).real();
      a2(at + 1) = a(r, 2 * k).imag();
    }
  }
  for (Index r = 0; r < m; ++r) {
    Complex c{0.0, 0.0};
    for (Index k = 0; k < n / 2; ++k) {
      c += direct_complex_mult<double>(a(r, 2 * k), a(r, 2 * k + 1));
    }
    c_neg(2 * r) = -c.real();
    c_neg(2 * r + 1) = -c.imag();
  }
  return CompiledKernel(m, n, std::move(a1), std::move(a2), std::move(c_neg),
                        build_kernel_operators(m, n));
}

CompiledKernel with_perturbed_constants(const CompiledKernel& kernel,
                                        double delta) {
  CompiledKernel out = kernel;
  out.c_neg_.array() += delta;
  return out;
}

SplitInput split_input(const ComplexVector& x) {
  if (x.size() == 0 || x.size() % 2 != 0) {
    throw ShapeError("split_input: length " + std::to_string(x.size()) +
                     " is not a positive even number");
  }
  auto [x1, x2] = pipeline::split<double>(interleave(x));
  return {std::move(x1), std::move(x2)};
}

ComplexMatrix pad_to_even(const ComplexMatrix& a) {
  if (a.cols() % 2 == 0) return a;
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols() + 1);
  out.leftCols(a.cols()) = a;
  return out;
}

ComplexVector pad_to_even(const ComplexVector& x) {
  if (x.size() % 2 == 0) return x;
  ComplexVector out = ComplexVector::Zero(x.size() + 1);
  out.head(x.size()) = x;
  return out;
}

PaddedProblem pad_to_even(const ComplexMatrix& a, const ComplexVector& x) {
  require_dims("pad_to_even", a.cols(), x.size());
  return {pad_to_even(a), pad_to_even(x), a.cols() % 2 != 0};
}

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::LiftPreAdd: return "lift pre-add";
    case Stage::GaussLift: return "gauss lift";
    case Stage::Product: return "product";
    case Stage::BlockSum: return "block sum";
    case Stage::Combine: return "combine";
    case Stage::XiLift: return "xi gauss lift";
    case Stage::XiProduct: return "xi product";
    case Stage::XiBlockSum: return "xi block sum";
    case Stage::XiCombine: return "xi combine";
    case Stage::ConstantAdd: return "constant add";
    case Stage::XiAdd: return "xi add";
  }
  return "?";
}

Eigen::VectorXd compute_S(const CompiledKernel& kernel,
                          const Eigen::VectorXd& x2) {
  return pipeline::compute_S<double>(kernel.ops(), kernel.a2(), x2);
}

Eigen::VectorXd compute_xi(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                           Index m) {
  require_dims("compute_xi", x1.size(), x2.size());
  return pipeline::compute_xi<double>(build_kernel_operators(m, x1.size()), x1,
                                      x2);
}

InterleavedVector evaluate_interleaved(const CompiledKernel& kernel,
                                       const InterleavedVector& x) {
  require_dims("evaluate", 2 * kernel.cols(), x.size());
  if (!x.allFinite()) throw NonFiniteError("evaluate: non-finite input");
  const auto [x1, x2] = pipeline::split<double>(x);
  return pipeline::evaluate<double>(kernel.ops(), kernel.a1(), kernel.a2(),
                                    kernel.c_neg(), x1, x2);
}

ComplexVector evaluate(const CompiledKernel& kernel, const ComplexVector& x) {
  require_dims("evaluate", kernel.cols(), x.size());
  require_finite("evaluate", x);
  return deinterleave(evaluate_interleaved(kernel, interleave(x)));
}

}  // namespace cmvm
