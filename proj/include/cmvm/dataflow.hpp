#pragma once

#include "cmvm/kernel.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cmvm {

using NodeId = std::int32_t;

enum class NodeKind {
  Input,
  Constant,
  ConstAdd,  // one variable and one constant operand ("encoder")
  Add2,      // two variable operands, either may be subtracted
  MultiAdd,  // three or more operands
  Mult,
  Output,
};

const char* kind_name(NodeKind kind);

/// Where a node came from. Kernel regions mirror `Stage`; the naive trace
/// uses its own three.
enum class Region {
  Source,
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
  NaiveProduct,
  NaiveProductAdd,
  NaiveRowSum,
  Sink,
};

const char* region_name(Region region);
Region region_of(Stage stage);

struct Operand {
  NodeId node;
  bool negated = false;
};

struct DataflowNode {
  NodeId id;
  NodeKind kind;
  Region region;
  std::vector<Operand> operands;
  std::string label;
  double value = 0.0;  // Constant nodes only
};

class DataflowGraph;

/// Scalar that records arithmetic into a DataflowGraph. A default-constructed
/// value (no graph) is a structural zero; negation is folded into the sign of
/// the consuming edge and never creates a node.
struct TracedValue {
  DataflowGraph* graph = nullptr;
  NodeId id = -1;
  bool negated = false;

  bool is_zero() const { return graph == nullptr; }
};

TracedValue operator-(const TracedValue& v);
TracedValue operator+(const TracedValue& a, const TracedValue& b);
TracedValue operator-(const TracedValue& a, const TracedValue& b);
TracedValue operator*(const TracedValue& a, const TracedValue& b);

template <>
struct ScalarAlgebra<TracedValue> {
  static TracedValue zero() { return {}; }
  static TracedValue scaled(const Term<TracedValue>& t);
  /// One adder node per call; throws std::domain_error on coefficients
  /// other than +-1, which have no adder-only realization.
  static TracedValue combine(std::span<const Term<TracedValue>> terms);
};

class DataflowGraph {
 public:
  TracedValue add_input(std::string label);
  TracedValue add_constant(std::string label, double value);
  NodeId add_output(std::string label, const TracedValue& value);

  /// Signed sum of nonzero values. Classified by fan-in and constness.
  TracedValue add_sum(std::span<const TracedValue> values);
  TracedValue add_mult(const TracedValue& a, const TracedValue& b);

  void set_region(Region region) { region_ = region; }

  const std::vector<DataflowNode>& nodes() const { return nodes_; }
  const DataflowNode& node(NodeId id) const {
    return nodes_.at(static_cast<std::size_t>(id));
  }
  const std::vector<NodeId>& inputs() const { return inputs_; }
  const std::vector<NodeId>& outputs() const { return outputs_; }
  std::size_t edge_count() const;
  std::size_t count(NodeKind kind) const;

  /// Forward pass. `inputs` is indexed like inputs().
  Eigen::VectorXd evaluate(const Eigen::VectorXd& inputs) const;

  /// Throws std::logic_error when an operand-count, ordering or reachability
  /// invariant is broken.
  void validate() const;

 private:
  NodeId push(NodeKind kind, std::vector<Operand> operands, std::string label,
              double value = 0.0);

  std::vector<DataflowNode> nodes_;
  std::vector<NodeId> inputs_;
  std::vector<NodeId> outputs_;
  Region region_ = Region::Source;
};

/// Runs the kernel pipeline on traced scalars. Inputs are the 2N interleaved
/// entries of X; outputs the 2M interleaved entries of Y.
DataflowGraph trace(const CompiledKernel& kernel);

/// Schoolbook y_m = sum_n a_mn x_n with four-multiplication products.
DataflowGraph trace_naive(const ComplexMatrix& a);

struct RegionTally {
  Region region;
  std::size_t const_add = 0;
  std::size_t add2 = 0;
  std::size_t multi_add = 0;
  std::size_t mult = 0;
};

struct Reconciliation {
  std::string quantity;
  long long measured;
  long long predicted;
  bool enforced;  // a mismatch here is a defect, not a reported delta
  std::string note;

  long long delta() const { return measured - predicted; }
};

struct CostReport {
  Index rows = 0;
  Index cols = 0;

  std::size_t multipliers = 0;
  std::size_t const_adders = 0;
  std::size_t add2 = 0;
  std::map<std::size_t, std::size_t> multi_adders;  // fan-in -> count
  std::size_t block_sum_adders = 0;    // the N/2-input sums, any kind
  std::size_t two_input_adders = 0;    // Add2 outside the block sums
  std::size_t block_sum_binary_adds = 0;  // block sums as binary trees
  std::vector<RegionTally> regions;

  std::size_t naive_multipliers = 0;  // 4MN
  std::size_t naive_add2 = 0;         // 2MN
  std::size_t naive_row_adders = 0;   // 2M, fan-in N

  std::size_t predicted_multipliers = 0;        // 3N(M+1)/2
  std::size_t predicted_encoders = 0;           // 2M(N+1)
  std::size_t predicted_add2 = 0;               // M(N+4) + 1.5N + 2
  std::size_t predicted_signed_add2 = 0;        // 3M(N+2) + 1.5N + 2
  std::size_t predicted_block_sum_adders = 0;   // 3(M+1)
  bool adder_identity_holds = false;

  std::vector<Reconciliation> reconciliation;

  double multiplier_saving() const {
    return 1.0 - static_cast<double>(multipliers) /
                     static_cast<double>(naive_multipliers);
  }
};

CostReport count_costs(const DataflowGraph& graph, Index m, Index n);

/// Left-to-right DOT digraph: multipliers are circles, adders boxes and
/// subtracted operands dashed edges.
std::string emit_dot(const DataflowGraph& graph);

}  // namespace cmvm

namespace Eigen {
template <>
struct NumTraits<cmvm::TracedValue> : GenericNumTraits<cmvm::TracedValue> {
  using Real = cmvm::TracedValue;
  using NonInteger = cmvm::TracedValue;
  using Nested = cmvm::TracedValue;
  using Literal = cmvm::TracedValue;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 1,
    MulCost = 1,
  };
};
}  // namespace Eigen
