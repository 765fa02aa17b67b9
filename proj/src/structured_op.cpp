#include "cmvm/structured_op.hpp"

namespace cmvm {

namespace {

std::string shape(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_positive(const char* what, Index value) {
  if (value <= 0) {
    throw ShapeError(std::string(what) + ": dimension must be positive, got " +
                     std::to_string(value));
  }
}

void require_even(const char* what, Index n) {
  if (n <= 0 || n % 2 != 0) {
    throw ShapeError(std::string(what) + ": N must be a positive even number, got " +
                     std::to_string(n) + "; pad odd N with a zero column first");
  }
}

}  // namespace

StructuredOperator::StructuredOperator(Index rows, Index cols, Variant v)
    : node_(std::make_shared<const Node>(Node{rows, cols, std::move(v)})) {}

StructuredOperator identity(Index n) {
  require_positive("identity", n);
  return {n, n, ops::Identity{n}};
}

StructuredOperator ones(Index rows, Index cols) {
  require_positive("ones", rows);
  require_positive("ones", cols);
  return {rows, cols, ops::Ones{rows, cols}};
}

StructuredOperator dense(Eigen::MatrixXd entries) {
  require_positive("dense", entries.rows());
  require_positive("dense", entries.cols());
  const Index r = entries.rows(), c = entries.cols();
  return {r, c, ops::Dense{std::move(entries)}};
}

StructuredOperator kron(StructuredOperator left, StructuredOperator right) {
  const Index r = left.rows() * right.rows();
  const Index c = left.cols() * right.cols();
  return {r, c,
          std::make_shared<const ops::Kron>(
              ops::Kron{std::move(left), std::move(right)})};
}

StructuredOperator direct_sum(std::vector<StructuredOperator> blocks) {
  if (blocks.empty()) throw ShapeError("direct_sum: no blocks");
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  return {r, c,
          std::make_shared<const ops::DirectSum>(ops::DirectSum{std::move(blocks)})};
}

StructuredOperator diagonal(Eigen::VectorXd values) {
  require_positive("diagonal", values.size());
  const Index n = values.size();
  return {n, n, ops::Diagonal{std::move(values)}};
}

StructuredOperator compose(std::vector<StructuredOperator> factors) {
  if (factors.empty()) throw ShapeError("compose: no factors");
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    if (factors[i].cols() != factors[i + 1].rows()) {
      throw ShapeError("compose: factor " + std::to_string(i) + " is " +
                       shape(factors[i].rows(), factors[i].cols()) +
                       " but factor " + std::to_string(i + 1) + " is " +
                       shape(factors[i + 1].rows(), factors[i + 1].cols()));
    }
  }
  const Index r = factors.front().rows();
  const Index c = factors.back().cols();
  return {r, c,
          std::make_shared<const ops::Compose>(ops::Compose{std::move(factors)})};
}

std::string StructuredOperator::describe() const {
  return std::visit(
      detail::Overloaded{
          [](const ops::Identity& i) { return "I" + std::to_string(i.n); },
          [](const ops::Ones& o) { return "ones(" + shape(o.rows, o.cols) + ")"; },
          [](const ops::Dense& d) {
            return "dense(" + shape(d.entries.rows(), d.entries.cols()) + ")";
          },
          [](const std::shared_ptr<const ops::Kron>& k) {
            return "kron(" + k->left.describe() + ", " + k->right.describe() +
                   ")";
          },
          [](const std::shared_ptr<const ops::DirectSum>& s) {
            std::string out = "dsum(";
            for (std::size_t i = 0; i < s->blocks.size(); ++i) {
              if (i) out += ", ";
              out += s->blocks[i].describe();
            }
            return out + ")";
          },
          [](const ops::Diagonal& d) {
            return "diag(" + std::to_string(d.values.size()) + ")";
          },
          [](const std::shared_ptr<const ops::Compose>& c) {
            std::string out;
            for (std::size_t i = 0; i < c->factors.size(); ++i) {
              if (i) out += " * ";
              out += c->factors[i].describe();
            }
            return out;
          },
      },
      variant());
}

namespace {

Eigen::MatrixXd materialize_unchecked(const StructuredOperator& op) {
  return std::visit(
      detail::Overloaded{
          [](const ops::Identity& i) -> Eigen::MatrixXd {
            return Eigen::MatrixXd::Identity(i.n, i.n);
          },
          [](const ops::Ones& o) -> Eigen::MatrixXd {
            return Eigen::MatrixXd::Ones(o.rows, o.cols);
          },
          [](const ops::Dense& d) -> Eigen::MatrixXd { return d.entries; },
          [](const std::shared_ptr<const ops::Kron>& k) -> Eigen::MatrixXd {
            const Eigen::MatrixXd l = materialize_unchecked(k->left);
            const Eigen::MatrixXd r = materialize_unchecked(k->right);
            Eigen::MatrixXd out(l.rows() * r.rows(), l.cols() * r.cols());
            for (Index i = 0; i < l.rows(); ++i) {
              for (Index j = 0; j < l.cols(); ++j) {
                out.block(i * r.rows(), j * r.cols(), r.rows(), r.cols()) =
                    l(i, j) * r;
              }
            }
            return out;
          },
          [&op](const std::shared_ptr<const ops::DirectSum>& s) -> Eigen::MatrixXd {
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(op.rows(), op.cols());
            Index row = 0, col = 0;
            for (const auto& b : s->blocks) {
              out.block(row, col, b.rows(), b.cols()) = materialize_unchecked(b);
              row += b.rows();
              col += b.cols();
            }
            return out;
          },
          [](const ops::Diagonal& d) -> Eigen::MatrixXd {
            return d.values.asDiagonal();
          },
          [](const std::shared_ptr<const ops::Compose>& c) -> Eigen::MatrixXd {
            Eigen::MatrixXd out = materialize_unchecked(c->factors.front());
            for (std::size_t i = 1; i < c->factors.size(); ++i) {
              out = out * materialize_unchecked(c->factors[i]);
            }
            return out;
          },
      },
      op.variant());
}

}  // namespace

Eigen::MatrixXd materialize(const StructuredOperator& op, Index cap) {
  if (op.rows() * op.cols() > cap) {
    throw CapacityError("materialize: " + op.describe() + " has " +
                        std::to_string(op.rows() * op.cols()) +
                        " entries, cap is " + std::to_string(cap));
  }
  return materialize_unchecked(op);
}

Eigen::MatrixXd gauss_left_block() {
  Eigen::MatrixXd g(3, 2);
  g << 1, 0,
       0, 1,
       1, -1;
  return g;
}

Eigen::MatrixXd gauss_right_block() {
  Eigen::MatrixXd g(3, 2);
  g << 1, -1,
       1, 1,
       0, 1;
  return g;
}

Eigen::MatrixXd gauss_combine_block() {
  Eigen::MatrixXd h(2, 3);
  h << 1, 0, 1,
       0, 1, 1;
  return h;
}

StructuredOperator build_P(Index m, Index n) {
  require_positive("build_P", m);
  require_even("build_P", n);
  return kron(identity(n / 2), build_broadcast(m));
}

StructuredOperator build_gauss_lift(Index pairs, LiftSide side) {
  require_positive("build_gauss_lift", pairs);
  return kron(identity(pairs), dense(side == LiftSide::Left
                                         ? gauss_left_block()
                                         : gauss_right_block()));
}

SumCombine build_sum_combine(Index m, Index n) {
  require_positive("build_sum_combine", m);
  require_even("build_sum_combine", n);
  return {kron(ones(1, n / 2), identity(3 * m)),
          kron(identity(m), dense(gauss_combine_block()))};
}

StructuredOperator build_broadcast(Index m) {
  require_positive("build_broadcast", m);
  return kron(ones(m, 1), identity(2));
}

}  // namespace cmvm
