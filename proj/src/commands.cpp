#include "cmvm/commands.hpp"

#include "cmvm/dataflow.hpp"
#include "cmvm/problem_file.hpp"
#include "cmvm/random.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace cmvm::cli {

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsageError;
}

/// Loads the file and pads odd N, noting it on `out`.
ProblemFile load_padded(const std::filesystem::path& path, std::ostream& out,
                        bool* padded = nullptr) {
  ProblemFile p = load_problem(path);
  const Index n = p.matrix.cols();
  const bool odd = n % 2 != 0;
  if (odd) {
    p.matrix = pad_to_even(p.matrix);
    if (p.vector) p.vector = pad_to_even(*p.vector);
    out << "note: n = " << n << " is odd; padded to n = " << n + 1
        << " with a zero column\n";
  }
  if (padded) *padded = odd;
  return p;
}

std::string shape(const StructuredOperator& op) {
  return std::to_string(op.rows()) + "x" + std::to_string(op.cols());
}

}  // namespace

int cmd_compile(const CompileOptions& opts, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    bool padded = false;
    const ProblemFile p = load_padded(opts.input, out, &padded);
    const CompiledKernel kernel = compile(p.matrix);

    out << "M = " << kernel.rows() << ", N = " << kernel.cols() << '\n';
    out << "a1: " << kernel.a1().size() << " entries, a2: "
        << kernel.a2().size() << " entries, c_neg: " << kernel.c_neg().size()
        << " entries\n";
    out << std::left << std::setw(14) << "operator" << std::setw(10) << "shape"
        << "formula\n";
    for (const auto& [name, op] : named_operators(kernel.ops())) {
      out << std::setw(14) << name << std::setw(10) << shape(*op)
          << op->describe() << '\n';
    }
    out << std::right;
    if (opts.out) {
      write_text(*opts.out, kernel_to_json(kernel, padded).dump(2) + "\n");
      out << "wrote " << opts.out->string() << '\n';
    }
    return kSuccess;
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ostringstream notes;
    const ProblemFile p = load_padded(opts.input, notes);
    if (!p.vector) {
      err << "usage error: eval needs a \"vector\" field in "
          << opts.input.string() << '\n';
      return static_cast<int>(kUsageError);
    }
    const ComplexVector y = opts.naive
                                ? naive_cmv(p.matrix, *p.vector)
                                : evaluate(compile(p.matrix), *p.vector);
    // Padding notes go to stderr so stdout stays one "re im" line per row.
    err << notes.str();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Index m = 0; m < y.size(); ++m) {
      out << y(m).real() << ' ' << y(m).imag() << '\n';
    }
    return static_cast<int>(kSuccess);
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out,
               std::ostream& err) {
  if (opts.m_max < 1 || opts.n_max < 2 || opts.n_max % 2 != 0 ||
      opts.trials < 1) {
    err << "usage error: need --m-max >= 1, even --n-max >= 2, --trials >= 1\n";
    return kUsageError;
  }
  return guarded(err, [&] {
    ProblemGenerator gen(opts.seed);
    int configs = 0, failures = 0;
    double worst_overall = 0.0;
    out << "verify: M = 1.." << opts.m_max << ", N = 2.." << opts.n_max
        << " (even), " << opts.trials << " trials, seed " << opts.seed
        << ", tolerance " << opts.tolerance
        << (opts.perturb_c ? ", constants perturbed" : "") << '\n';
    for (int m = 1; m <= opts.m_max; ++m) {
      for (int n = 2; n <= opts.n_max; n += 2) {
        double worst = 0.0;
        for (int t = 0; t < opts.trials; ++t) {
          const ComplexMatrix a = gen.matrix(m, n);
          const ComplexVector x = gen.vector(n);
          CompiledKernel kernel = compile(a);
          if (opts.perturb_c) kernel = with_perturbed_constants(kernel, 1e-3);
          worst = std::max(worst,
                           relative_error(evaluate(kernel, x), naive_cmv(a, x)));
        }
        const bool ok = worst <= opts.tolerance;
        ++configs;
        failures += ok ? 0 : 1;
        worst_overall = std::max(worst_overall, worst);
        out << "M=" << m << " N=" << std::setw(2) << std::left << n
            << std::right << " worst " << std::scientific
            << std::setprecision(3) << worst << std::defaultfloat
            << (ok ? "  pass" : "  FAIL") << '\n';
      }
    }
    out << (failures == 0 ? "PASS" : "FAIL") << ": " << configs - failures
        << "/" << configs << " configurations within tolerance, worst "
        << std::scientific << std::setprecision(3) << worst_overall
        << std::defaultfloat << '\n';
    return static_cast<int>(failures == 0 ? kSuccess : kVerificationFailed);
  });
}

int cmd_report(const ReportOptions& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile p = load_padded(opts.input, out);
    const CompiledKernel kernel = compile(p.matrix);
    const DataflowGraph graph = trace(kernel);
    const CostReport r = count_costs(graph, kernel.rows(), kernel.cols());

    out << "cost report, M = " << r.rows << ", N = " << r.cols << "\n\n";
    out << std::left << std::setw(38) << "quantity" << std::right
        << std::setw(10) << "measured" << std::setw(11) << "predicted"
        << std::setw(8) << "delta" << '\n';
    for (const auto& row : r.reconciliation) {
      out << std::left << std::setw(38) << row.quantity << std::right
          << std::setw(10) << row.measured << std::setw(11) << row.predicted
          << std::setw(8) << row.delta() << (row.enforced ? "  [exact]" : "")
          << '\n';
      out << "    " << row.note << '\n';
    }

    out << "\nmulti-input adders:";
    if (r.multi_adders.empty()) out << " none";
    for (const auto& [fan_in, count] : r.multi_adders) {
      out << ' ' << count << " x fan-in " << fan_in;
    }
    out << "\nblock sums as binary trees: " << r.block_sum_binary_adds
        << " two-input adders\n";

    out << "\nnaive baseline: " << r.naive_multipliers << " multipliers, "
        << r.naive_add2 << " two-input adders, " << r.naive_row_adders
        << " adders of fan-in " << r.cols << '\n';
    out << "multipliers: " << r.multipliers << " vs naive "
        << r.naive_multipliers << ", saving " << std::fixed
        << std::setprecision(2) << 100.0 * r.multiplier_saving() << "%\n"
        << std::defaultfloat;
    out << "adder formula identity 2M(N+1) + M(N+4)+1.5N+2 == "
           "3M(N+2)+1.5N+2: "
        << r.predicted_encoders << " + " << r.predicted_add2 << " vs "
        << r.predicted_signed_add2
        << (r.adder_identity_holds ? " (holds)" : " (BROKEN)") << '\n';

    out << "\nregion breakdown\n";
    out << std::left << std::setw(20) << "region" << std::right
        << std::setw(10) << "const-add" << std::setw(7) << "add2"
        << std::setw(11) << "multi-add" << std::setw(7) << "mult" << '\n';
    for (const auto& t : r.regions) {
      out << std::left << std::setw(20) << region_name(t.region) << std::right
          << std::setw(10) << t.const_add << std::setw(7) << t.add2
          << std::setw(11) << t.multi_add << std::setw(7) << t.mult << '\n';
    }
    return static_cast<int>(kSuccess);
  });
}

int cmd_dot(const DotOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile p = load_padded(opts.input, out);
    const DataflowGraph graph = trace(compile(p.matrix));
    write_text(opts.out, emit_dot(graph));
    out << "wrote " << opts.out.string() << ": " << graph.nodes().size()
        << " nodes, " << graph.edge_count() << " edges, "
        << graph.count(NodeKind::Mult) << " multipliers\n";
    return static_cast<int>(kSuccess);
  });
}

}  // namespace cmvm::cli
