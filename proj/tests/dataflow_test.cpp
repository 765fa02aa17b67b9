#include "cmvm/dataflow.hpp"

#include "dot_check.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace cmvm {
namespace {

using testing::kPipelineTol;

std::size_t block_sums(const DataflowGraph& g, std::size_t fan_in) {
  std::size_t count = 0;
  for (const auto& n : g.nodes()) {
    const bool region =
        n.region == Region::BlockSum || n.region == Region::XiBlockSum;
    if (region && n.operands.size() == fan_in) ++count;
  }
  return count;
}

TEST(TracedValue, ZeroAndSignFolding) {
  DataflowGraph g;
  const TracedValue a = g.add_input("a");
  const TracedValue b = g.add_input("b");
  const TracedValue zero{};

  const TracedValue same = a + zero;
  EXPECT_EQ(same.id, a.id);
  EXPECT_TRUE((a * zero).is_zero());
  const TracedValue neg = -a;
  EXPECT_EQ(neg.id, a.id);
  EXPECT_TRUE(neg.negated);
  EXPECT_EQ(g.nodes().size(), 2U);

  const TracedValue diff = a - b;
  const DataflowNode& sub = g.node(diff.id);
  EXPECT_EQ(sub.kind, NodeKind::Add2);
  EXPECT_FALSE(sub.operands[0].negated);
  EXPECT_TRUE(sub.operands[1].negated);

  const TracedValue prod = (-a) * b;
  EXPECT_EQ(g.node(prod.id).kind, NodeKind::Mult);
  EXPECT_TRUE(prod.negated);

  const TracedValue c = g.add_constant("c", 2.0);
  EXPECT_EQ(g.node((a + c).id).kind, NodeKind::ConstAdd);
  const TracedValue three[] = {a, b, c};
  EXPECT_EQ(g.node(g.add_sum(three).id).kind, NodeKind::MultiAdd);

  const Term<TracedValue> scaled[] = {{2.0, a}};
  EXPECT_THROW(ScalarAlgebra<TracedValue>::combine(scaled), std::domain_error);
}

TEST(DataflowGraph, ValidateCatchesDeadOperators) {
  DataflowGraph g;
  const TracedValue a = g.add_input("a");
  const TracedValue b = g.add_input("b");
  g.add_output("y", a + b);
  EXPECT_NO_THROW(g.validate());
  (void)(a * b);
  EXPECT_THROW(g.validate(), std::logic_error);
}

TEST(DataflowGraph, ForwardEvaluationAppliesSigns) {
  DataflowGraph g;
  const TracedValue a = g.add_input("a");
  const TracedValue b = g.add_input("b");
  const TracedValue c = g.add_constant("c", 0.5);
  g.add_output("y0", (a - b) * (-c + a));
  g.add_output("y1", -(a * b));
  const Eigen::VectorXd y = g.evaluate(Eigen::Vector2d(3.0, 1.0));
  EXPECT_EQ(y(0), (3.0 - 1.0) * (3.0 - 0.5));
  EXPECT_EQ(y(1), -3.0);
}

TEST(Trace, MultiplierCountExamples) {
  ProblemGenerator gen(51);
  EXPECT_EQ(trace(compile(gen.matrix(1, 2))).count(NodeKind::Mult), 6U);
  const ComplexMatrix a = gen.matrix(3, 4);
  EXPECT_EQ(trace(compile(a)).count(NodeKind::Mult), 24U);
  EXPECT_EQ(trace_naive(a).count(NodeKind::Mult), 48U);
}

TEST(Trace, GridCounts) {
  ProblemGenerator gen(52);
  for (const auto& [m, n] : testing::test_grid()) {
    const DataflowGraph g = trace(compile(gen.matrix(m, n)));
    EXPECT_NO_THROW(g.validate());
    const auto um = static_cast<std::size_t>(m), un = static_cast<std::size_t>(n);
    EXPECT_EQ(g.count(NodeKind::Mult), 3 * un * (um + 1) / 2);
    EXPECT_EQ(g.count(NodeKind::ConstAdd), 2 * um * (un + 1));
    EXPECT_EQ(g.inputs().size(), 2 * un);
    EXPECT_EQ(g.outputs().size(), 2 * um);
    if (n >= 4) {
      EXPECT_EQ(block_sums(g, un / 2), 3 * (um + 1)) << "M=" << m << " N=" << n;
    } else {
      EXPECT_EQ(block_sums(g, 1), 0U);
    }
  }
}

TEST(Trace, ForwardPassMatchesEvaluate) {
  ProblemGenerator gen(53);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = 1 + trial % 6, n = 2 + 2 * (trial % 5);
    const CompiledKernel k = compile(gen.matrix(m, n));
    const DataflowGraph g = trace(k);
    const InterleavedVector x = interleave(gen.vector(n));
    EXPECT_LE(relative_error(g.evaluate(x), evaluate_interleaved(k, x)),
              kPipelineTol);
  }
}

TEST(TraceNaive, Counts) {
  ProblemGenerator gen(54);
  for (const auto& [m, n] : testing::test_grid()) {
    const ComplexMatrix a = gen.matrix(m, n);
    const DataflowGraph g = trace_naive(a);
    EXPECT_NO_THROW(g.validate());
    const auto um = static_cast<std::size_t>(m), un = static_cast<std::size_t>(n);
    EXPECT_EQ(g.count(NodeKind::Mult), 4 * um * un);
    std::size_t product_adds = 0, row_sums = 0;
    for (const auto& node : g.nodes()) {
      if (node.region == Region::NaiveProductAdd) {
        EXPECT_EQ(node.kind, NodeKind::Add2);
        ++product_adds;
      }
      if (node.region == Region::NaiveRowSum) {
        EXPECT_EQ(node.operands.size(), un);
        EXPECT_EQ(node.kind, n == 2 ? NodeKind::Add2 : NodeKind::MultiAdd);
        ++row_sums;
      }
    }
    EXPECT_EQ(product_adds, 2 * um * un);
    EXPECT_EQ(row_sums, 2 * um);

    const ComplexVector x = gen.vector(n);
    EXPECT_LE(relative_error(g.evaluate(interleave(x)), interleave(naive_cmv(a, x))),
              kPipelineTol);
  }
}

TEST(CountCosts, WorkedExample) {
  ProblemGenerator gen(55);
  const CostReport r = count_costs(trace(compile(gen.matrix(3, 4))), 3, 4);
  EXPECT_EQ(r.multipliers, 24U);
  EXPECT_EQ(r.predicted_multipliers, 24U);
  EXPECT_EQ(r.naive_multipliers, 48U);
  EXPECT_EQ(r.predicted_encoders, 30U);
  EXPECT_EQ(r.const_adders, 30U);
  EXPECT_EQ(r.predicted_block_sum_adders, 12U);
  EXPECT_EQ(r.block_sum_adders, 12U);
  EXPECT_EQ(r.predicted_add2, 32U);
  EXPECT_EQ(r.predicted_signed_add2, 62U);
  EXPECT_TRUE(r.adder_identity_holds);
  EXPECT_DOUBLE_EQ(r.multiplier_saving(), 0.5);
}

TEST(CountCosts, SavingsAtOtherSizes) {
  ProblemGenerator gen(56);
  const CostReport small = count_costs(trace(compile(gen.matrix(1, 2))), 1, 2);
  EXPECT_EQ(small.multipliers, 6U);
  EXPECT_EQ(small.naive_multipliers, 8U);
  EXPECT_DOUBLE_EQ(small.multiplier_saving(), 0.25);

  const CostReport big = count_costs(trace(compile(gen.matrix(6, 8))), 6, 8);
  EXPECT_EQ(big.multipliers, 84U);
  EXPECT_EQ(big.naive_multipliers, 192U);
  EXPECT_DOUBLE_EQ(big.multiplier_saving(), 0.5625);
}

TEST(CountCosts, TwoInputAdderDeltaIsSurfaced) {
  ProblemGenerator gen(57);
  for (const auto& [m, n] : testing::test_grid()) {
    const CostReport r = count_costs(trace(compile(gen.matrix(m, n))), m, n);
    EXPECT_TRUE(r.adder_identity_holds);
    // 1.5MN lift adds + 1.5N xi lift adds + 2M + 2 combine adds + 2M xi adds.
    EXPECT_EQ(static_cast<Index>(r.two_input_adders),
              3 * m * n / 2 + 3 * n / 2 + 4 * m + 2);
    const auto row = std::find_if(
        r.reconciliation.begin(), r.reconciliation.end(),
        [](const Reconciliation& q) { return q.quantity == "two-input adders"; });
    ASSERT_NE(row, r.reconciliation.end());
    EXPECT_FALSE(row->enforced);
    EXPECT_EQ(row->delta(), m * n / 2);
    for (const auto& q : r.reconciliation) {
      if (q.enforced) EXPECT_EQ(q.delta(), 0) << q.quantity;
    }
  }
}

TEST(EmitDot, StructureAndCounts) {
  ProblemGenerator gen(58);
  for (const auto& [m, n] : {std::pair<Index, Index>{1, 2}, {3, 4}, {2, 6}}) {
    const DataflowGraph g = trace(compile(gen.matrix(m, n)));
    const testing::DotSummary dot = testing::check_dot(emit_dot(g));
    ASSERT_TRUE(dot.valid) << dot.error;
    EXPECT_TRUE(dot.left_to_right);
    EXPECT_EQ(dot.nodes, g.nodes().size());
    EXPECT_EQ(dot.edges, g.edge_count());
    EXPECT_EQ(dot.circles, g.count(NodeKind::Mult));
    EXPECT_EQ(dot.boxes, g.count(NodeKind::ConstAdd) + g.count(NodeKind::Add2) +
                             g.count(NodeKind::MultiAdd));
    EXPECT_GT(dot.dashed, 0U);
  }
  const testing::DotSummary small =
      testing::check_dot(emit_dot(trace(compile(gen.matrix(1, 2)))));
  EXPECT_EQ(small.circles, 6U);
}

}  // namespace
}  // namespace cmvm
