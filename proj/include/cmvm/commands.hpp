#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace cmvm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
};

struct CompileOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> out;
};

struct EvalOptions {
  std::filesystem::path input;
  bool naive = false;
};

struct VerifyOptions {
  int m_max = 6;
  int n_max = 10;
  int trials = 25;
  std::uint64_t seed = 20240601;
  double tolerance = 1e-12;
  bool perturb_c = false;  // negative control: corrupt the stored constants
};

struct ReportOptions {
  std::filesystem::path input;
};

struct DotOptions {
  std::filesystem::path input;
  std::filesystem::path out;
};

// Each command writes results to `out`, diagnostics to `err`, and returns an
// ExitCode. Problem files with odd N are padded with a zero column, with a
// note on `out`.
int cmd_compile(const CompileOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);
int cmd_dot(const DotOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace cmvm::cli
