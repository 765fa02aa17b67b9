#pragma once

#include "cmvm/core.hpp"

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace cmvm {

class StructuredOperator;

namespace ops {
struct Identity {
  Index n;
};
struct Ones {
  Index rows;
  Index cols;
};
struct Dense {
  Eigen::MatrixXd entries;
};
struct Kron;
struct DirectSum;
struct Diagonal {
  Eigen::VectorXd values;
};
struct Compose;
}  // namespace ops

/// Immutable, matrix-free real linear operator. Copies share the tree.
class StructuredOperator {
 public:
  using Variant = std::variant<ops::Identity, ops::Ones, ops::Dense,
                               std::shared_ptr<const ops::Kron>,
                               std::shared_ptr<const ops::DirectSum>,
                               ops::Diagonal,
                               std::shared_ptr<const ops::Compose>>;

  Index rows() const { return node_->rows; }
  Index cols() const { return node_->cols; }
  const Variant& variant() const { return node_->variant; }

  /// Compact formula, e.g. "kron(I2, kron(ones(3x1), I2))".
  std::string describe() const;

 private:
  struct Node {
    Index rows;
    Index cols;
    Variant variant;
  };

  StructuredOperator(Index rows, Index cols, Variant v);

  std::shared_ptr<const Node> node_;

  friend StructuredOperator identity(Index n);
  friend StructuredOperator ones(Index rows, Index cols);
  friend StructuredOperator dense(Eigen::MatrixXd entries);
  friend StructuredOperator kron(StructuredOperator left,
                                 StructuredOperator right);
  friend StructuredOperator direct_sum(std::vector<StructuredOperator> blocks);
  friend StructuredOperator diagonal(Eigen::VectorXd values);
  friend StructuredOperator compose(std::vector<StructuredOperator> factors);
};

namespace ops {
struct Kron {
  StructuredOperator left;
  StructuredOperator right;
};
struct DirectSum {
  std::vector<StructuredOperator> blocks;
};
/// Applied right to left: factors.back() touches the input first.
struct Compose {
  std::vector<StructuredOperator> factors;
};
}  // namespace ops

StructuredOperator identity(Index n);
StructuredOperator ones(Index rows, Index cols);
StructuredOperator dense(Eigen::MatrixXd entries);
StructuredOperator kron(StructuredOperator left, StructuredOperator right);
StructuredOperator direct_sum(std::vector<StructuredOperator> blocks);
StructuredOperator diagonal(Eigen::VectorXd values);
StructuredOperator compose(std::vector<StructuredOperator> factors);

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr Index kDefaultMaterializeCap = 1'000'000;

/// Dense copy of the operator. Refuses when rows * cols exceeds `cap`.
Eigen::MatrixXd materialize(const StructuredOperator& op,
                            Index cap = kDefaultMaterializeCap);

// Scalar algebra hook ------------------------------------------------------

template <typename Scalar>
struct Term {
  double coeff;
  Scalar value;
};

/// How `apply` forms zero and linear combinations in a given scalar type.
/// Terms are accumulated left to right; coefficients of +-1 never multiply.
/// Specialized for the dataflow tracer, which records one adder per call.
template <typename Scalar>
struct ScalarAlgebra {
  static Scalar zero() { return Scalar(0); }

  static Scalar scaled(const Term<Scalar>& t) {
    if (t.coeff == 1.0) return t.value;
    if (t.coeff == -1.0) return -t.value;
    return Scalar(t.coeff) * t.value;
  }

  static Scalar combine(std::span<const Term<Scalar>> terms) {
    if (terms.empty()) return zero();
    Scalar acc = scaled(terms[0]);
    for (std::size_t i = 1; i < terms.size(); ++i) {
      acc = acc + scaled(terms[i]);
    }
    return acc;
  }
};

namespace detail {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace detail

/// op * v without materializing Kronecker factors.
template <typename Scalar>
Vector<Scalar> apply(const StructuredOperator& op, const Vector<Scalar>& v) {
  using Algebra = ScalarAlgebra<Scalar>;
  if (v.size() != op.cols()) {
    throw ShapeError("apply: operator " + op.describe() + " is " +
                     std::to_string(op.rows()) + "x" +
                     std::to_string(op.cols()) + " but vector has length " +
                     std::to_string(v.size()));
  }

  return std::visit(
      detail::Overloaded{
          [&](const ops::Identity&) -> Vector<Scalar> { return v; },
          [&](const ops::Ones& o) -> Vector<Scalar> {
            std::vector<Term<Scalar>> terms;
            terms.reserve(static_cast<std::size_t>(o.cols));
            for (Index j = 0; j < o.cols; ++j) terms.push_back({1.0, v(j)});
            const Scalar sum = Algebra::combine(terms);
            Vector<Scalar> out(o.rows);
            for (Index i = 0; i < o.rows; ++i) out(i) = sum;
            return out;
          },
          [&](const ops::Dense& d) -> Vector<Scalar> {
            Vector<Scalar> out(d.entries.rows());
            std::vector<Term<Scalar>> terms;
            for (Index i = 0; i < d.entries.rows(); ++i) {
              terms.clear();
              for (Index j = 0; j < d.entries.cols(); ++j) {
                if (d.entries(i, j) != 0.0) {
                  terms.push_back({d.entries(i, j), v(j)});
                }
              }
              out(i) = Algebra::combine(terms);
            }
            return out;
          },
          [&](const std::shared_ptr<const ops::Kron>& k) -> Vector<Scalar> {
            // (L kron R) v: apply R to each input block, then L across the
            // blocks for every component of R's output.
            const Index blocks_in = k->left.cols();
            const Index blocks_out = k->left.rows();
            const Index block_in = k->right.cols();
            const Index block_out = k->right.rows();
            std::vector<Vector<Scalar>> inner;
            inner.reserve(static_cast<std::size_t>(blocks_in));
            for (Index j = 0; j < blocks_in; ++j) {
              inner.push_back(apply<Scalar>(
                  k->right, Vector<Scalar>(v.segment(j * block_in, block_in))));
            }
            Vector<Scalar> out(blocks_out * block_out);
            Vector<Scalar> lane(blocks_in);
            for (Index t = 0; t < block_out; ++t) {
              for (Index j = 0; j < blocks_in; ++j) {
                lane(j) = inner[static_cast<std::size_t>(j)](t);
              }
              const Vector<Scalar> mixed = apply<Scalar>(k->left, lane);
              for (Index i = 0; i < blocks_out; ++i) {
                out(i * block_out + t) = mixed(i);
              }
            }
            return out;
          },
          [&](const std::shared_ptr<const ops::DirectSum>& s) -> Vector<Scalar> {
            Vector<Scalar> out(op.rows());
            Index row = 0, col = 0;
            for (const auto& block : s->blocks) {
              out.segment(row, block.rows()) = apply<Scalar>(
                  block, Vector<Scalar>(v.segment(col, block.cols())));
              row += block.rows();
              col += block.cols();
            }
            return out;
          },
          [&](const ops::Diagonal& d) -> Vector<Scalar> {
            Vector<Scalar> out(d.values.size());
            for (Index i = 0; i < d.values.size(); ++i) {
              out(i) = d.values(i) == 0.0
                           ? Algebra::zero()
                           : Algebra::scaled({d.values(i), v(i)});
            }
            return out;
          },
          [&](const std::shared_ptr<const ops::Compose>& c) -> Vector<Scalar> {
            Vector<Scalar> cur = v;
            for (auto it = c->factors.rbegin(); it != c->factors.rend(); ++it) {
              cur = apply<Scalar>(*it, cur);
            }
            return cur;
          },
      },
      op.variant());
}

inline Eigen::VectorXd apply(const StructuredOperator& op,
                             const Eigen::VectorXd& v) {
  return apply<double>(op, v);
}

// Gauss blocks and the pipeline operators ----------------------------------

/// Lifts (a, b) to (a, b, a - b).
Eigen::MatrixXd gauss_left_block();
/// Lifts (c, d) to (c - d, c + d, d).
Eigen::MatrixXd gauss_right_block();
/// Collapses (p0, p1, p2) to (p0 + p2, p1 + p2).
Eigen::MatrixXd gauss_combine_block();

enum class LiftSide { Left, Right };

/// I_{N/2} kron (ones(M x 1) kron I_2): copies each complex pair M times.
StructuredOperator build_P(Index m, Index n);

/// I_pairs kron (left or right Gauss block); 3*pairs x 2*pairs.
StructuredOperator build_gauss_lift(Index pairs, LiftSide side);

struct SumCombine {
  StructuredOperator sigma;     // ones(1 x N/2) kron I_{3M}
  StructuredOperator hcombine;  // I_M kron H
};

SumCombine build_sum_combine(Index m, Index n);

/// ones(M x 1) kron I_2: repeats one complex pair M times.
StructuredOperator build_broadcast(Index m);

}  // namespace cmvm
