#pragma once

#include "cmvm/kernel.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace cmvm {

/// {"m": M, "n": N, "matrix": [[re, im], ...] (row-major, M*N pairs),
///  "vector": [[re, im], ...] (optional, N pairs)}
struct ProblemFile {
  ComplexMatrix matrix;
  std::optional<ComplexVector> vector;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::filesystem::path& path);

nlohmann::json problem_to_json(const ProblemFile& problem);

/// Constants and operator shapes of a compiled kernel.
nlohmann::json kernel_to_json(const CompiledKernel& kernel, bool padded);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cmvm
