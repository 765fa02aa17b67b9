#include "cmvm/kernel.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

namespace cmvm {
namespace {

using testing::brute_force_S;
using testing::brute_force_xi;
using testing::kPipelineTol;

TEST(Compile, SupervectorLayoutForWorkedExample) {
  ProblemGenerator gen(31);
  const ComplexMatrix a = gen.matrix(3, 4);
  const CompiledKernel k = compile(a);
  ASSERT_EQ(k.a1().size(), 12);
  ASSERT_EQ(k.a2().size(), 12);
  ASSERT_EQ(k.c_neg().size(), 6);
  // First block of a1 lists column 1 row by row, second block column 3.
  for (Index m = 0; m < 3; ++m) {
    EXPECT_EQ(k.a1()(2 * m), a(m, 1).real());
    EXPECT_EQ(k.a1()(2 * m + 1), a(m, 1).imag());
    EXPECT_EQ(k.a1()(6 + 2 * m), a(m, 3).real());
    EXPECT_EQ(k.a1()(6 + 2 * m + 1), a(m, 3).imag());
    EXPECT_EQ(k.a2()(2 * m), a(m, 0).real());
    EXPECT_EQ(k.a2()(6 + 2 * m + 1), a(m, 2).imag());
  }
}

TEST(Compile, ReconstructsMatrixFromSupervectors) {
  ProblemGenerator gen(32);
  for (const auto& [m, n] : testing::test_grid()) {
    const ComplexMatrix a = gen.matrix(m, n);
    const CompiledKernel k = compile(a);
    ComplexMatrix back(m, n);
    for (Index kk = 0; kk < n / 2; ++kk) {
      for (Index r = 0; r < m; ++r) {
        const Index at = 2 * m * kk + 2 * r;
        back(r, 2 * kk + 1) = Complex(k.a1()(at), k.a1()(at + 1));
        back(r, 2 * kk) = Complex(k.a2()(at), k.a2()(at + 1));
      }
    }
    EXPECT_EQ(back, a);
  }
}

TEST(Compile, ConstantsAreNegatedRowCorrections) {
  ComplexMatrix a(1, 2);
  a << Complex(1, 1), Complex(2, 0);
  EXPECT_EQ(compile(a).c_neg(), Eigen::Vector2d(-2, -2));

  const CompiledKernel zero = compile(ComplexMatrix::Zero(2, 4));
  EXPECT_TRUE(zero.a1().isZero(0));
  EXPECT_TRUE(zero.a2().isZero(0));
  EXPECT_TRUE(zero.c_neg().isZero(0));

  ProblemGenerator gen(33);
  for (const auto& [m, n] : testing::test_grid()) {
    const ComplexMatrix b = gen.matrix(m, n);
    const CompiledKernel k = compile(b);
    for (Index r = 0; r < m; ++r) {
      Complex c{0.0, 0.0};
      for (Index kk = 0; kk < n / 2; ++kk) {
        c += direct_complex_mult(b(r, 2 * kk), b(r, 2 * kk + 1));
      }
      EXPECT_EQ(-k.c_neg()(2 * r), c.real());
      EXPECT_EQ(-k.c_neg()(2 * r + 1), c.imag());
    }
  }
}

TEST(Compile, Rejections) {
  EXPECT_THROW(compile(ComplexMatrix::Ones(2, 3)), ShapeError);
  EXPECT_THROW(compile(ComplexMatrix(0, 2)), ShapeError);
  EXPECT_THROW(compile(ComplexMatrix(2, 0)), ShapeError);
  ComplexMatrix a = ComplexMatrix::Ones(2, 2);
  a(0, 1) = Complex(std::numeric_limits<double>::infinity(), 0);
  EXPECT_THROW(compile(a), NonFiniteError);
}

TEST(SplitInput, Examples) {
  ComplexVector x(4);
  x << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8);
  const SplitInput s = split_input(x);
  EXPECT_EQ(s.x1, Eigen::Vector4d(1, 2, 5, 6));
  EXPECT_EQ(s.x2, Eigen::Vector4d(3, 4, 7, 8));

  ComplexVector pair(2);
  pair << Complex(-1, 0.5), Complex(2, -3);
  const SplitInput p = split_input(pair);
  EXPECT_EQ(p.x1, Eigen::Vector2d(-1, 0.5));
  EXPECT_EQ(p.x2, Eigen::Vector2d(2, -3));

  EXPECT_THROW(split_input(ComplexVector::Ones(3)), ShapeError);
}

TEST(SplitInput, RecombinationIsExact) {
  ProblemGenerator gen(34);
  for (Index n = 2; n <= 12; n += 2) {
    const ComplexVector x = gen.vector(n);
    const SplitInput s = split_input(x);
    ComplexVector back(n);
    for (Index k = 0; k < n / 2; ++k) {
      back(2 * k) = Complex(s.x1(2 * k), s.x1(2 * k + 1));
      back(2 * k + 1) = Complex(s.x2(2 * k), s.x2(2 * k + 1));
    }
    EXPECT_EQ(back, x);
  }
}

TEST(ComputeS, SingleBlock) {
  ComplexMatrix a(1, 2);
  a << Complex(0.5, -1.5), Complex(9, 9);
  const CompiledKernel k = compile(a);
  const Eigen::Vector2d x2(2.0, 0.25);
  // u = 2.5, v = -1.25
  EXPECT_EQ(compute_S(k, x2), Eigen::Vector3d(3.75, 1.25, -1.25));
}

TEST(ComputeS, Annihilation) {
  ProblemGenerator gen(35);
  ComplexMatrix a = gen.matrix(3, 4);
  ComplexVector x = gen.vector(4);
  for (Index k = 0; k < 2; ++k) {
    const Complex shared = gen.complex();
    for (Index m = 0; m < 3; ++m) a(m, 2 * k) = shared;
    x(2 * k + 1) = -shared;
  }
  EXPECT_TRUE(compute_S(compile(a), split_input(x).x2).isZero(0));
}

TEST(ComputeS, MatchesBruteForceLifts) {
  ProblemGenerator gen(36);
  for (const auto& [m, n] : testing::test_grid()) {
    const ComplexMatrix a = gen.matrix(m, n);
    const ComplexVector x = gen.vector(n);
    const Eigen::VectorXd s = compute_S(compile(a), split_input(x).x2);
    EXPECT_LE(relative_error(s, brute_force_S(a, x)), kPipelineTol);
  }
}

TEST(ComputeXi, Examples) {
  EXPECT_TRUE(compute_xi(Eigen::Vector4d::Zero(), Eigen::Vector4d(1, 2, 3, 4), 3)
                  .isZero(0));

  const Eigen::VectorXd unit = compute_xi(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0), 3);
  Eigen::VectorXd expected(6);
  expected << -1, 0, -1, 0, -1, 0;
  EXPECT_EQ(unit, expected);

  ProblemGenerator gen(37);
  for (Index n = 2; n <= 10; n += 2) {
    const ComplexVector x = gen.vector(n);
    const SplitInput s = split_input(x);
    const Complex ref = -brute_force_xi(x);
    const Eigen::VectorXd xi = compute_xi(s.x1, s.x2, 2);
    ASSERT_EQ(xi.size(), 4);
    for (Index m = 0; m < 2; ++m) {
      EXPECT_LE(relative_error(Complex(xi(2 * m), xi(2 * m + 1)), ref),
                kPipelineTol);
    }
  }
}

TEST(Evaluate, Examples) {
  ProblemGenerator gen(38);
  const ComplexVector x = gen.vector(4);
  const ComplexVector zero = evaluate(compile(ComplexMatrix::Zero(3, 4)), x);
  for (Index m = 0; m < 3; ++m) EXPECT_EQ(zero(m), Complex(0, 0));

  ComplexMatrix a(1, 2);
  a << Complex(1, 0), Complex(0, 0);
  const ComplexVector x2 = gen.vector(2);
  EXPECT_LE(relative_error(evaluate(compile(a), x2)(0), x2(0)), kPipelineTol);

  const ComplexMatrix b = gen.matrix(3, 4);
  EXPECT_LE(relative_error(interleave(evaluate(compile(b), x)),
                           interleave(naive_cmv(b, x))),
            kPipelineTol);
}

TEST(Evaluate, Rejections) {
  const CompiledKernel k = compile(ComplexMatrix::Ones(2, 4));
  EXPECT_THROW(evaluate(k, ComplexVector::Ones(2)), ShapeError);
  ComplexVector x = ComplexVector::Ones(4);
  x(3) = Complex(0, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(evaluate(k, x), NonFiniteError);
}

TEST(Evaluate, MatchesNaiveOverGrid) {
  ProblemGenerator gen(39);
  for (const auto& [m, n] : testing::test_grid()) {
    for (int trial = 0; trial < 25; ++trial) {
      const ComplexMatrix a = gen.matrix(m, n);
      const ComplexVector x = gen.vector(n);
      EXPECT_LE(relative_error(interleave(evaluate(compile(a), x)),
                               interleave(naive_cmv(a, x))),
                kPipelineTol)
          << "M=" << m << " N=" << n;
    }
  }
}

TEST(Evaluate, Additivity) {
  ProblemGenerator gen(40);
  for (const auto& [m, n] : testing::test_grid()) {
    const CompiledKernel k = compile(gen.matrix(m, n));
    const ComplexVector x1 = gen.vector(n), x2 = gen.vector(n);
    const ComplexVector zero = evaluate(k, ComplexVector::Zero(n));
    EXPECT_LE(interleave(zero).cwiseAbs().maxCoeff(), 1e-15);
    const ComplexVector lhs = evaluate(k, (x1 + x2).eval()) + zero;
    const ComplexVector rhs = evaluate(k, x1) + evaluate(k, x2);
    EXPECT_LE(relative_error(interleave(lhs), interleave(rhs)), 1e-11);
  }
}

TEST(Evaluate, SingleRowMatchesWinogradInnerProduct) {
  ProblemGenerator gen(41);
  for (Index n = 2; n <= 16; n += 2) {
    const ComplexMatrix a = gen.matrix(1, n);
    const ComplexVector x = gen.vector(n);
    const ComplexVector row = a.row(0).transpose();
    EXPECT_LE(relative_error(evaluate(compile(a), x)(0),
                             winograd_inner_product(row, x)),
              kPipelineTol);
  }
}

TEST(Evaluate, PairPreservingColumnPermutation) {
  ProblemGenerator gen(42);
  std::mt19937_64& rng = gen.engine();
  for (const auto& [m, n] : testing::test_grid()) {
    const ComplexMatrix a = gen.matrix(m, n);
    const ComplexVector x = gen.vector(n);
    std::vector<Index> pairs(static_cast<std::size_t>(n / 2));
    std::iota(pairs.begin(), pairs.end(), 0);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    ComplexMatrix pa(m, n);
    ComplexVector px(n);
    for (Index k = 0; k < n / 2; ++k) {
      const Index src = pairs[static_cast<std::size_t>(k)];
      const bool swap = (rng() & 1U) != 0;
      const Index first = 2 * src + (swap ? 1 : 0);
      const Index second = 2 * src + (swap ? 0 : 1);
      pa.col(2 * k) = a.col(first);
      pa.col(2 * k + 1) = a.col(second);
      px(2 * k) = x(first);
      px(2 * k + 1) = x(second);
    }
    EXPECT_LE(relative_error(interleave(evaluate(compile(pa), px)),
                             interleave(evaluate(compile(a), x))),
              kPipelineTol);
  }
}

TEST(Evaluate, SharedKernelAcrossThreads) {
  ProblemGenerator gen(43);
  const ComplexMatrix a = gen.matrix(5, 8);
  const CompiledKernel k = compile(a);
  std::vector<ComplexVector> inputs;
  for (int i = 0; i < 64; ++i) inputs.push_back(gen.vector(8));
  std::vector<ComplexVector> serial, parallel(inputs.size());
  for (const auto& x : inputs) serial.push_back(evaluate(k, x));

  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < inputs.size(); i += 4) {
        parallel[i] = evaluate(k, inputs[i]);
      }
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t i = 0; i < inputs.size(); ++i) EXPECT_EQ(parallel[i], serial[i]);
}

TEST(PadToEven, Examples) {
  ProblemGenerator gen(44);
  const ComplexMatrix a = gen.matrix(2, 3);
  const ComplexVector x = gen.vector(3);
  const PaddedProblem p = pad_to_even(a, x);
  EXPECT_TRUE(p.padded);
  ASSERT_EQ(p.a.cols(), 4);
  EXPECT_EQ(p.a.leftCols(3), a);
  EXPECT_TRUE(p.a.col(3).isZero(0));
  EXPECT_EQ(p.x(3), Complex(0, 0));
  EXPECT_EQ(naive_cmv(p.a, p.x), naive_cmv(a, x));

  const ComplexMatrix even = gen.matrix(2, 4);
  const ComplexVector xe = gen.vector(4);
  const PaddedProblem same = pad_to_even(even, xe);
  EXPECT_FALSE(same.padded);
  EXPECT_EQ(same.a, even);
  EXPECT_EQ(same.x, xe);

  EXPECT_THROW(pad_to_even(a, gen.vector(4)), ShapeError);
}

TEST(PadToEven, OddBatchMatchesNaive) {
  ProblemGenerator gen(45);
  for (Index n = 1; n <= 9; n += 2) {
    for (Index m = 1; m <= 4; ++m) {
      const ComplexMatrix a = gen.matrix(m, n);
      const ComplexVector x = gen.vector(n);
      const PaddedProblem p = pad_to_even(a, x);
      EXPECT_LE(relative_error(interleave(evaluate(compile(p.a), p.x)),
                               interleave(naive_cmv(a, x))),
                kPipelineTol);
    }
  }
}

TEST(KernelOperators, WorkedExampleShapes) {
  const KernelOperators ops = build_kernel_operators(3, 4);
  auto shape = [](const StructuredOperator& op) {
    return std::pair{op.rows(), op.cols()};
  };
  using S = std::pair<Index, Index>;
  EXPECT_EQ(shape(ops.p_main), S(12, 4));
  EXPECT_EQ(shape(ops.ga_lift), S(18, 12));
  EXPECT_EQ(shape(ops.gb_lift), S(18, 12));
  EXPECT_EQ(shape(ops.sigma), S(9, 18));
  EXPECT_EQ(shape(ops.hcombine), S(6, 9));
  EXPECT_EQ(shape(ops.p_xi_bcast), S(6, 2));
  EXPECT_EQ(shape(ops.sigma_xi), S(3, 6));
  EXPECT_EQ(shape(ops.hcombine_xi), S(2, 3));
  EXPECT_EQ(shape(ops.ga_lift_xi), S(6, 4));
  EXPECT_EQ(shape(ops.gb_lift_xi), S(6, 4));
}

}  // namespace
}  // namespace cmvm
