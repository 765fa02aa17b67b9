#pragma once

#include "cmvm/core.hpp"
#include "cmvm/structured_op.hpp"

namespace cmvm {

/// Operator pipeline of a compiled kernel for an M x N matrix (N even).
struct KernelOperators {
  StructuredOperator p_main;       // MN x N
  StructuredOperator ga_lift;      // 3MN/2 x MN
  StructuredOperator gb_lift;      // 3MN/2 x MN
  StructuredOperator sigma;        // 3M x 3MN/2
  StructuredOperator hcombine;     // 2M x 3M
  StructuredOperator p_xi_bcast;   // 2M x 2
  StructuredOperator sigma_xi;     // 3 x 3N/2
  StructuredOperator hcombine_xi;  // 2 x 3
  StructuredOperator ga_lift_xi;   // 3N/2 x N
  StructuredOperator gb_lift_xi;   // 3N/2 x N
};

KernelOperators build_kernel_operators(Index m, Index n);

struct NamedOperator {
  const char* name;
  const StructuredOperator* op;
};

/// Display order used by reports: main path first, then the xi path.
std::vector<NamedOperator> named_operators(const KernelOperators& ops);

/// Precomputed constants and operators for one constant matrix A.
///
/// a1 holds the odd columns of A and a2 the even columns, both as N/2 blocks
/// of 2M interleaved values: a1[2Mk + 2m] = re a(m, 2k+1), a1[2Mk + 2m + 1] =
/// im a(m, 2k+1). c_neg[2m], c_neg[2m+1] hold -c_m with
/// c_m = sum_k a(m, 2k) a(m, 2k+1), so the final sums are all additions.
class CompiledKernel {
 public:
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const Eigen::VectorXd& a1() const { return a1_; }
  const Eigen::VectorXd& a2() const { return a2_; }
  const Eigen::VectorXd& c_neg() const { return c_neg_; }
  const KernelOperators& ops() const { return ops_; }

 private:
  CompiledKernel(Index rows, Index cols, Eigen::VectorXd a1, Eigen::VectorXd a2,
                 Eigen::VectorXd c_neg, KernelOperators ops)
      : rows_(rows),
        cols_(cols),
        a1_(std::move(a1)),
        a2_(std::move(a2)),
        c_neg_(std::move(c_neg)),
        ops_(std::move(ops)) {}

  Index rows_;
  Index cols_;
  Eigen::VectorXd a1_;
  Eigen::VectorXd a2_;
  Eigen::VectorXd c_neg_;
  KernelOperators ops_;

  friend CompiledKernel compile(const ComplexMatrix& a);
  friend CompiledKernel with_perturbed_constants(const CompiledKernel& kernel,
                                                 double delta);
};

/// Rejects empty, odd-width or non-finite matrices.
CompiledKernel compile(const ComplexMatrix& a);

/// Copy of `kernel` with `delta` added to every entry of c_neg. Only useful
/// as a negative control for verification runs.
CompiledKernel with_perturbed_constants(const CompiledKernel& kernel,
                                        double delta);

struct SplitInput {
  Eigen::VectorXd x1;  // x0, x2, ..., interleaved
  Eigen::VectorXd x2;  // x1, x3, ..., interleaved
};

SplitInput split_input(const ComplexVector& x);

struct PaddedProblem {
  ComplexMatrix a;
  ComplexVector x;
  bool padded = false;
};

/// Appends one zero column to A (and a zero to X) when N is odd.
PaddedProblem pad_to_even(const ComplexMatrix& a, const ComplexVector& x);
ComplexMatrix pad_to_even(const ComplexMatrix& a);
ComplexVector pad_to_even(const ComplexVector& x);

/// Pipeline regions, reported to an observer as evaluation enters them.
enum class Stage {
  LiftPreAdd,
  GaussLift,
  Product,
  BlockSum,
  Combine,
  XiLift,
  XiProduct,
  XiBlockSum,
  XiCombine,
  ConstantAdd,
  XiAdd,
};

const char* stage_name(Stage stage);

struct NoStageObserver {
  void operator()(Stage) const {}
};

namespace pipeline {

/// Interleaved split of a 2N-long interleaved input into (x1, x2).
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> split(const Vector<Scalar>& x) {
  if (x.size() % 4 != 0) {
    throw ShapeError("split_input: interleaved length " +
                     std::to_string(x.size()) +
                     " does not hold an even number of complex values");
  }
  const Index half = x.size() / 2;
  Vector<Scalar> x1(half), x2(half);
  for (Index k = 0; k < half / 2; ++k) {
    x1(2 * k) = x(4 * k);
    x1(2 * k + 1) = x(4 * k + 1);
    x2(2 * k) = x(4 * k + 2);
    x2(2 * k + 1) = x(4 * k + 3);
  }
  return {std::move(x1), std::move(x2)};
}

/// S = Gb_lift (a2 + P x2), the per-product multiplier inputs.
template <typename Scalar, typename Observer = NoStageObserver>
Vector<Scalar> compute_S(const KernelOperators& ops, const Vector<Scalar>& a2,
                         const Vector<Scalar>& x2, Observer&& observe = {}) {
  require_dims("compute_S", ops.p_main.cols(), x2.size());
  require_dims("compute_S", ops.p_main.rows(), a2.size());
  observe(Stage::LiftPreAdd);
  const Vector<Scalar> shifted = a2 + apply<Scalar>(ops.p_main, x2);
  observe(Stage::GaussLift);
  return apply<Scalar>(ops.gb_lift, shifted);
}

/// L = Ga_lift (a1 + P x1).
template <typename Scalar, typename Observer = NoStageObserver>
Vector<Scalar> compute_L(const KernelOperators& ops, const Vector<Scalar>& a1,
                         const Vector<Scalar>& x1, Observer&& observe = {}) {
  require_dims("compute_L", ops.p_main.cols(), x1.size());
  require_dims("compute_L", ops.p_main.rows(), a1.size());
  observe(Stage::LiftPreAdd);
  const Vector<Scalar> shifted = a1 + apply<Scalar>(ops.p_main, x1);
  observe(Stage::GaussLift);
  return apply<Scalar>(ops.ga_lift, shifted);
}

/// Broadcast of -xi with xi = sum_k x_2k x_2k+1, length 2M.
template <typename Scalar, typename Observer = NoStageObserver>
Vector<Scalar> compute_xi(const KernelOperators& ops, const Vector<Scalar>& x1,
                          const Vector<Scalar>& x2, Observer&& observe = {}) {
  require_dims("compute_xi", ops.ga_lift_xi.cols(), x1.size());
  require_dims("compute_xi", ops.gb_lift_xi.cols(), x2.size());
  observe(Stage::XiLift);
  const Vector<Scalar> e = apply<Scalar>(ops.gb_lift_xi, x2);
  const Vector<Scalar> l = apply<Scalar>(ops.ga_lift_xi, x1);
  observe(Stage::XiProduct);
  const Vector<Scalar> products = l.cwiseProduct(e);
  observe(Stage::XiBlockSum);
  const Vector<Scalar> sums = apply<Scalar>(ops.sigma_xi, products);
  observe(Stage::XiCombine);
  const Vector<Scalar> xi = apply<Scalar>(ops.hcombine_xi, sums);
  return apply<Scalar>(ops.p_xi_bcast, Vector<Scalar>(-xi));
}

/// Interleaved Y = Xi + (C + H Sigma (L .* S)).
template <typename Scalar, typename Observer = NoStageObserver>
Vector<Scalar> evaluate(const KernelOperators& ops, const Vector<Scalar>& a1,
                        const Vector<Scalar>& a2, const Vector<Scalar>& c_neg,
                        const Vector<Scalar>& x1, const Vector<Scalar>& x2,
                        Observer&& observe = {}) {
  const Vector<Scalar> s = compute_S<Scalar>(ops, a2, x2, observe);
  const Vector<Scalar> l = compute_L<Scalar>(ops, a1, x1, observe);
  observe(Stage::Product);
  const Vector<Scalar> products = l.cwiseProduct(s);
  observe(Stage::BlockSum);
  const Vector<Scalar> sums = apply<Scalar>(ops.sigma, products);
  observe(Stage::Combine);
  const Vector<Scalar> body = apply<Scalar>(ops.hcombine, sums);
  const Vector<Scalar> xi = compute_xi<Scalar>(ops, x1, x2, observe);
  require_dims("evaluate", body.size(), c_neg.size());
  observe(Stage::ConstantAdd);
  const Vector<Scalar> shifted = c_neg + body;
  observe(Stage::XiAdd);
  return xi + shifted;
}

}  // namespace pipeline

Eigen::VectorXd compute_S(const CompiledKernel& kernel,
                          const Eigen::VectorXd& x2);

/// Negated xi broadcast to 2M entries, built from freshly constructed
/// xi-path operators for N = x1.size().
Eigen::VectorXd compute_xi(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                           Index m);

/// Must match naive_cmv(A, x) to rounding. X must already have even length.
ComplexVector evaluate(const CompiledKernel& kernel, const ComplexVector& x);

InterleavedVector evaluate_interleaved(const CompiledKernel& kernel,
                                       const InterleavedVector& x);

}  // namespace cmvm
