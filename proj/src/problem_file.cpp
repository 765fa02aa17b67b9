#include "cmvm/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cmvm {

namespace {

using nlohmann::json;

Index positive_int(const json& doc, const char* field) {
  if (!doc.contains(field)) {
    throw ParseError(std::string("missing field '") + field + "'");
  }
  const json& v = doc.at(field);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ParseError(std::string("field '") + field +
                     "' must be a positive integer");
  }
  return static_cast<Index>(v.get<long long>());
}

Complex pair_at(const json& array, const std::string& field, std::size_t i) {
  const json& p = array.at(i);
  const std::string where = field + "[" + std::to_string(i) + "]";
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
      !p[1].is_number()) {
    throw ParseError(where + ": expected a [re, im] pair of numbers");
  }
  const double re = p[0].get<double>();
  const double im = p[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw ParseError(where + ": values must be finite");
  }
  return {re, im};
}

const json& pair_array(const json& doc, const char* field, std::size_t len) {
  if (!doc.contains(field)) {
    throw ParseError(std::string("missing field '") + field + "'");
  }
  const json& a = doc.at(field);
  if (!a.is_array()) {
    throw ParseError(std::string("field '") + field + "' must be an array");
  }
  if (a.size() != len) {
    throw ParseError(std::string("field '") + field + "' has " +
                     std::to_string(a.size()) + " entries, expected " +
                     std::to_string(len));
  }
  return a;
}

json pairs(const auto& values) {
  json out = json::array();
  for (Index i = 0; i < values.size(); ++i) {
    out.push_back({values(i).real(), values(i).imag()});
  }
  return out;
}

json reals(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("problem file must be a JSON object");

  const Index m = positive_int(doc, "m");
  const Index n = positive_int(doc, "n");
  const json& entries =
      pair_array(doc, "matrix", static_cast<std::size_t>(m * n));

  ProblemFile problem;
  problem.matrix.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      problem.matrix(i, j) =
          pair_at(entries, "matrix", static_cast<std::size_t>(i * n + j));
    }
  }
  if (doc.contains("vector")) {
    const json& v = pair_array(doc, "vector", static_cast<std::size_t>(n));
    ComplexVector x(n);
    for (Index j = 0; j < n; ++j) {
      x(j) = pair_at(v, "vector", static_cast<std::size_t>(j));
    }
    problem.vector = std::move(x);
  }
  return problem;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_problem(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json problem_to_json(const ProblemFile& problem) {
  json doc;
  doc["m"] = problem.matrix.rows();
  doc["n"] = problem.matrix.cols();
  json matrix = json::array();
  for (Index i = 0; i < problem.matrix.rows(); ++i) {
    for (Index j = 0; j < problem.matrix.cols(); ++j) {
      matrix.push_back(
          {problem.matrix(i, j).real(), problem.matrix(i, j).imag()});
    }
  }
  doc["matrix"] = std::move(matrix);
  if (problem.vector) doc["vector"] = pairs(*problem.vector);
  return doc;
}

json kernel_to_json(const CompiledKernel& kernel, bool padded) {
  json doc;
  doc["m"] = kernel.rows();
  doc["n"] = kernel.cols();
  doc["padded"] = padded;
  doc["a1"] = reals(kernel.a1());
  doc["a2"] = reals(kernel.a2());
  doc["c_neg"] = reals(kernel.c_neg());
  json ops = json::array();
  for (const auto& [name, op] : named_operators(kernel.ops())) {
    ops.push_back({{"name", name},
                   {"rows", op->rows()},
                   {"cols", op->cols()},
                   {"formula", op->describe()}});
  }
  doc["operators"] = std::move(ops);
  return doc;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace cmvm
