#include "cmvm/dataflow.hpp"

#include <sstream>
#include <stdexcept>

namespace cmvm {

const char* kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Input: return "input";
    case NodeKind::Constant: return "constant";
    case NodeKind::ConstAdd: return "const-add";
    case NodeKind::Add2: return "add2";
    case NodeKind::MultiAdd: return "multi-add";
    case NodeKind::Mult: return "mult";
    case NodeKind::Output: return "output";
  }
  return "?";
}

const char* region_name(Region region) {
  switch (region) {
    case Region::Source: return "source";
    case Region::LiftPreAdd: return "lift pre-add";
    case Region::GaussLift: return "gauss lift";
    case Region::Product: return "product";
    case Region::BlockSum: return "block sum";
    case Region::Combine: return "combine";
    case Region::XiLift: return "xi gauss lift";
    case Region::XiProduct: return "xi product";
    case Region::XiBlockSum: return "xi block sum";
    case Region::XiCombine: return "xi combine";
    case Region::ConstantAdd: return "constant add";
    case Region::XiAdd: return "xi add";
    case Region::NaiveProduct: return "naive product";
    case Region::NaiveProductAdd: return "naive product add";
    case Region::NaiveRowSum: return "naive row sum";
    case Region::Sink: return "sink";
  }
  return "?";
}

Region region_of(Stage stage) {
  switch (stage) {
    case Stage::LiftPreAdd: return Region::LiftPreAdd;
    case Stage::GaussLift: return Region::GaussLift;
    case Stage::Product: return Region::Product;
    case Stage::BlockSum: return Region::BlockSum;
    case Stage::Combine: return Region::Combine;
    case Stage::XiLift: return Region::XiLift;
    case Stage::XiProduct: return Region::XiProduct;
    case Stage::XiBlockSum: return Region::XiBlockSum;
    case Stage::XiCombine: return Region::XiCombine;
    case Stage::ConstantAdd: return Region::ConstantAdd;
    case Stage::XiAdd: return Region::XiAdd;
  }
  return Region::Source;
}

// TracedValue arithmetic ---------------------------------------------------

namespace {

DataflowGraph* common_graph(const TracedValue& a, const TracedValue& b) {
  if (a.graph != b.graph) {
    throw std::logic_error("traced values from different graphs combined");
  }
  return a.graph;
}

}  // namespace

TracedValue operator-(const TracedValue& v) {
  if (v.is_zero()) return v;
  return {v.graph, v.id, !v.negated};
}

TracedValue operator+(const TracedValue& a, const TracedValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const TracedValue both[] = {a, b};
  return common_graph(a, b)->add_sum(both);
}

TracedValue operator-(const TracedValue& a, const TracedValue& b) {
  return a + (-b);
}

TracedValue operator*(const TracedValue& a, const TracedValue& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return common_graph(a, b)->add_mult(a, b);
}

TracedValue ScalarAlgebra<TracedValue>::scaled(const Term<TracedValue>& t) {
  if (t.coeff == 1.0) return t.value;
  if (t.coeff == -1.0) return -t.value;
  if (t.coeff == 0.0) return {};
  throw std::domain_error("tracing supports only +-1 coefficients, got " +
                          std::to_string(t.coeff));
}

TracedValue ScalarAlgebra<TracedValue>::combine(
    std::span<const Term<TracedValue>> terms) {
  std::vector<TracedValue> values;
  values.reserve(terms.size());
  DataflowGraph* graph = nullptr;
  for (const auto& t : terms) {
    const TracedValue v = scaled(t);
    if (v.is_zero()) continue;
    if (graph != nullptr && v.graph != graph) {
      throw std::logic_error("traced values from different graphs combined");
    }
    graph = v.graph;
    values.push_back(v);
  }
  if (graph == nullptr) return {};
  return graph->add_sum(values);
}

// DataflowGraph ------------------------------------------------------------

NodeId DataflowGraph::push(NodeKind kind, std::vector<Operand> operands,
                           std::string label, double value) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(DataflowNode{id, kind, region_, std::move(operands),
                                std::move(label), value});
  return id;
}

TracedValue DataflowGraph::add_input(std::string label) {
  const NodeId id = push(NodeKind::Input, {}, std::move(label));
  inputs_.push_back(id);
  return {this, id, false};
}

TracedValue DataflowGraph::add_constant(std::string label, double value) {
  return {this, push(NodeKind::Constant, {}, std::move(label), value), false};
}

NodeId DataflowGraph::add_output(std::string label, const TracedValue& value) {
  TracedValue source = value;
  if (source.is_zero()) source = add_constant("0", 0.0);
  if (source.graph != this) {
    throw std::logic_error("output value belongs to another graph");
  }
  const NodeId id = push(NodeKind::Output, {{source.id, source.negated}},
                         std::move(label));
  outputs_.push_back(id);
  return id;
}

TracedValue DataflowGraph::add_sum(std::span<const TracedValue> values) {
  std::vector<Operand> operands;
  operands.reserve(values.size());
  for (const auto& v : values) {
    if (v.is_zero()) continue;
    if (v.graph != this) {
      throw std::logic_error("summand belongs to another graph");
    }
    operands.push_back({v.id, v.negated});
  }
  if (operands.empty()) return {};
  if (operands.size() == 1) {
    return {this, operands.front().node, operands.front().negated};
  }

  NodeKind kind = NodeKind::MultiAdd;
  std::string label = "+";
  if (operands.size() == 2) {
    const int constants =
        (node(operands[0].node).kind == NodeKind::Constant ? 1 : 0) +
        (node(operands[1].node).kind == NodeKind::Constant ? 1 : 0);
    kind = constants == 1 ? NodeKind::ConstAdd : NodeKind::Add2;
  } else {
    label = "+" + std::to_string(operands.size());
  }
  return {this, push(kind, std::move(operands), std::move(label)), false};
}

TracedValue DataflowGraph::add_mult(const TracedValue& a, const TracedValue& b) {
  if (a.graph != this || b.graph != this) {
    throw std::logic_error("factor belongs to another graph");
  }
  const NodeId id =
      push(NodeKind::Mult, {{a.id, false}, {b.id, false}}, "x");
  return {this, id, a.negated != b.negated};
}

std::size_t DataflowGraph::edge_count() const {
  std::size_t edges = 0;
  for (const auto& n : nodes_) edges += n.operands.size();
  return edges;
}

std::size_t DataflowGraph::count(NodeKind kind) const {
  std::size_t total = 0;
  for (const auto& n : nodes_) total += n.kind == kind ? 1 : 0;
  return total;
}

Eigen::VectorXd DataflowGraph::evaluate(const Eigen::VectorXd& inputs) const {
  require_dims("DataflowGraph::evaluate",
               static_cast<Index>(inputs_.size()), inputs.size());
  std::vector<double> values(nodes_.size(), 0.0);
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    values[static_cast<std::size_t>(inputs_[i])] =
        inputs(static_cast<Index>(i));
  }
  auto operand = [&](const Operand& o) {
    const double v = values[static_cast<std::size_t>(o.node)];
    return o.negated ? -v : v;
  };
  for (const auto& n : nodes_) {
    double& out = values[static_cast<std::size_t>(n.id)];
    switch (n.kind) {
      case NodeKind::Input:
        break;
      case NodeKind::Constant:
        out = n.value;
        break;
      case NodeKind::Mult:
        out = operand(n.operands[0]) * operand(n.operands[1]);
        break;
      case NodeKind::ConstAdd:
      case NodeKind::Add2:
      case NodeKind::MultiAdd: {
        double acc = operand(n.operands[0]);
        for (std::size_t i = 1; i < n.operands.size(); ++i) {
          acc = acc + operand(n.operands[i]);
        }
        out = acc;
        break;
      }
      case NodeKind::Output:
        out = operand(n.operands[0]);
        break;
    }
  }
  Eigen::VectorXd result(static_cast<Index>(outputs_.size()));
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    result(static_cast<Index>(i)) =
        values[static_cast<std::size_t>(outputs_[i])];
  }
  return result;
}

void DataflowGraph::validate() const {
  auto fail = [](const DataflowNode& n, const std::string& why) {
    throw std::logic_error("node " + std::to_string(n.id) + " (" +
                           kind_name(n.kind) + "): " + why);
  };
  std::vector<bool> consumed(nodes_.size(), false);
  for (const auto& n : nodes_) {
    for (const auto& o : n.operands) {
      if (o.node < 0 || o.node >= n.id) fail(n, "operand is not an earlier node");
      consumed[static_cast<std::size_t>(o.node)] = true;
    }
    const std::size_t arity = n.operands.size();
    switch (n.kind) {
      case NodeKind::Input:
      case NodeKind::Constant:
        if (arity != 0) fail(n, "source with operands");
        break;
      case NodeKind::Mult:
      case NodeKind::Add2:
        if (arity != 2) fail(n, "needs exactly two operands");
        break;
      case NodeKind::ConstAdd: {
        if (arity != 2) fail(n, "needs exactly two operands");
        int constants = 0;
        for (const auto& o : n.operands) {
          constants += node(o.node).kind == NodeKind::Constant ? 1 : 0;
        }
        if (constants != 1) fail(n, "needs exactly one constant operand");
        break;
      }
      case NodeKind::MultiAdd:
        if (arity < 3) fail(n, "needs at least three operands");
        break;
      case NodeKind::Output:
        if (arity != 1) fail(n, "needs exactly one operand");
        break;
    }
    if (n.kind != NodeKind::Input && n.kind != NodeKind::Constant &&
        n.kind != NodeKind::Output) {
      for (const auto& o : n.operands) {
        if (node(o.node).kind == NodeKind::Output) fail(n, "consumes an output");
      }
    }
  }
  // Every operator must feed something; outputs are the only sinks.
  for (const auto& n : nodes_) {
    const bool is_operator = n.kind != NodeKind::Input &&
                             n.kind != NodeKind::Constant &&
                             n.kind != NodeKind::Output;
    if (is_operator && !consumed[static_cast<std::size_t>(n.id)]) {
      fail(n, "result is never used");
    }
  }
}

// Tracing ------------------------------------------------------------------

namespace {

Vector<TracedValue> input_vector(DataflowGraph& g, Index complex_len) {
  Vector<TracedValue> x(2 * complex_len);
  for (Index k = 0; k < complex_len; ++k) {
    x(2 * k) = g.add_input("x" + std::to_string(k) + ".re");
    x(2 * k + 1) = g.add_input("x" + std::to_string(k) + ".im");
  }
  return x;
}

Vector<TracedValue> constant_vector(DataflowGraph& g, const std::string& name,
                                    const Eigen::VectorXd& values) {
  Vector<TracedValue> out(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    std::ostringstream label;
    label << name << '[' << i << "]=" << values(i);
    out(i) = g.add_constant(label.str(), values(i));
  }
  return out;
}

void add_outputs(DataflowGraph& g, const Vector<TracedValue>& y) {
  g.set_region(Region::Sink);
  for (Index k = 0; k < y.size() / 2; ++k) {
    g.add_output("y" + std::to_string(k) + ".re", y(2 * k));
    g.add_output("y" + std::to_string(k) + ".im", y(2 * k + 1));
  }
}

}  // namespace

DataflowGraph trace(const CompiledKernel& kernel) {
  DataflowGraph g;
  g.set_region(Region::Source);
  const Vector<TracedValue> x = input_vector(g, kernel.cols());
  const Vector<TracedValue> a1 = constant_vector(g, "a1", kernel.a1());
  const Vector<TracedValue> a2 = constant_vector(g, "a2", kernel.a2());
  const Vector<TracedValue> c_neg = constant_vector(g, "c", kernel.c_neg());
  const auto [x1, x2] = pipeline::split<TracedValue>(x);

  const Vector<TracedValue> y = pipeline::evaluate<TracedValue>(
      kernel.ops(), a1, a2, c_neg, x1, x2,
      [&g](Stage stage) { g.set_region(region_of(stage)); });
  add_outputs(g, y);
  return g;
}

DataflowGraph trace_naive(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ShapeError("trace_naive: matrix dimensions must be positive");
  }
  DataflowGraph g;
  g.set_region(Region::Source);
  const Vector<TracedValue> x = input_vector(g, a.cols());
  Vector<TracedValue> y(2 * a.rows());
  std::vector<TracedValue> re_terms, im_terms;
  for (Index m = 0; m < a.rows(); ++m) {
    re_terms.clear();
    im_terms.clear();
    for (Index n = 0; n < a.cols(); ++n) {
      g.set_region(Region::Source);
      std::ostringstream re_label, im_label;
      re_label << "a" << m << n << ".re=" << a(m, n).real();
      im_label << "a" << m << n << ".im=" << a(m, n).imag();
      const TracedValue ar = g.add_constant(re_label.str(), a(m, n).real());
      const TracedValue ai = g.add_constant(im_label.str(), a(m, n).imag());
      const TracedValue& xr = x(2 * n);
      const TracedValue& xi = x(2 * n + 1);
      g.set_region(Region::NaiveProduct);
      const TracedValue ac = g.add_mult(ar, xr);
      const TracedValue bd = g.add_mult(ai, xi);
      const TracedValue ad = g.add_mult(ar, xi);
      const TracedValue bc = g.add_mult(ai, xr);
      g.set_region(Region::NaiveProductAdd);
      re_terms.push_back(ac - bd);
      im_terms.push_back(ad + bc);
    }
    g.set_region(Region::NaiveRowSum);
    y(2 * m) = g.add_sum(re_terms);
    y(2 * m + 1) = g.add_sum(im_terms);
  }
  add_outputs(g, y);
  return g;
}

// Cost accounting ----------------------------------------------------------

CostReport count_costs(const DataflowGraph& graph, Index m, Index n) {
  CostReport r;
  r.rows = m;
  r.cols = n;

  std::map<Region, RegionTally> regions;
  for (const auto& node : graph.nodes()) {
    RegionTally& tally = regions[node.region];
    tally.region = node.region;
    const bool block_sum =
        node.region == Region::BlockSum || node.region == Region::XiBlockSum;
    switch (node.kind) {
      case NodeKind::Mult:
        ++r.multipliers;
        ++tally.mult;
        break;
      case NodeKind::ConstAdd:
        ++r.const_adders;
        ++tally.const_add;
        break;
      case NodeKind::Add2:
        ++r.add2;
        ++tally.add2;
        if (!block_sum) ++r.two_input_adders;
        break;
      case NodeKind::MultiAdd:
        ++r.multi_adders[node.operands.size()];
        ++tally.multi_add;
        break;
      default:
        break;
    }
    if (block_sum && node.kind != NodeKind::Mult &&
        !node.operands.empty()) {
      ++r.block_sum_adders;
      r.block_sum_binary_adds += node.operands.size() - 1;
    }
  }
  for (const auto& [region, tally] : regions) {
    if (tally.const_add + tally.add2 + tally.multi_add + tally.mult > 0) {
      r.regions.push_back(tally);
    }
  }

  const auto um = static_cast<std::size_t>(m);
  const auto un = static_cast<std::size_t>(n);
  r.naive_multipliers = 4 * um * un;
  r.naive_add2 = 2 * um * un;
  r.naive_row_adders = 2 * um;

  r.predicted_multipliers = 3 * un * (um + 1) / 2;
  r.predicted_encoders = 2 * um * (un + 1);
  r.predicted_add2 = um * (un + 4) + 3 * un / 2 + 2;
  r.predicted_signed_add2 = 3 * um * (un + 2) + 3 * un / 2 + 2;
  r.predicted_block_sum_adders = 3 * (um + 1);
  r.adder_identity_holds =
      r.predicted_encoders + r.predicted_add2 == r.predicted_signed_add2;

  auto ll = [](std::size_t v) { return static_cast<long long>(v); };
  std::size_t lift_adds = 0;
  for (const auto& t : r.regions) {
    if (t.region == Region::GaussLift) lift_adds = t.add2;
  }

  r.reconciliation.push_back(
      {"multipliers", ll(r.multipliers), ll(r.predicted_multipliers), true,
       "3N(M+1)/2: three real products per complex product, N/2 per row "
       "plus N/2 for xi"});
  r.reconciliation.push_back(
      {"encoders (const-add)", ll(r.const_adders), ll(r.predicted_encoders),
       false, "2MN pre-adds of A(1)/A(2) plus 2M additions of C"});
  r.reconciliation.push_back(
      {"N/2-input adders", ll(r.block_sum_adders),
       ll(r.predicted_block_sum_adders), n >= 4,
       n >= 4 ? "3M body block sums plus 3 xi block sums"
              : "with N = 2 each block sum has one input and is a wire"});
  r.reconciliation.push_back(
      {"two-input adders", ll(r.two_input_adders), ll(r.predicted_add2), false,
       "measured Ga/Gb lifts use " + std::to_string(lift_adds) +
           " adders (1.5MN); the formula implies MN there"});
  r.reconciliation.push_back(
      {"two-input adders, encoders as adders",
       ll(r.two_input_adders + r.const_adders), ll(r.predicted_signed_add2),
       false, "same lift-adder delta as above"});
  return r;
}

std::string emit_dot(const DataflowGraph& graph) {
  std::ostringstream out;
  out << "digraph cmvm {\n";
  out << "  rankdir=LR;\n";
  for (const auto& n : graph.nodes()) {
    const char* shape = "box";
    switch (n.kind) {
      case NodeKind::Mult:
        shape = "circle";
        break;
      case NodeKind::Input:
      case NodeKind::Constant:
      case NodeKind::Output:
        shape = "plaintext";
        break;
      default:
        break;
    }
    out << "  n" << n.id << " [label=\"" << n.label << "\", shape=" << shape
        << "];\n";
  }
  for (const auto& n : graph.nodes()) {
    for (const auto& o : n.operands) {
      out << "  n" << o.node << " -> n" << n.id;
      if (o.negated) out << " [style=dashed]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace cmvm
