// Command-line front end: analyze, range, suite.
//
// Exit codes: 0 success, 1 suite property failures, 2 usage or validation
// error, 3 operator not A-bounded.

#include "semihilbert/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

namespace io = semihilbert::io;
namespace harness = semihilbert::harness;

constexpr int kOk = 0;
constexpr int kFailures = 1;
constexpr int kInvalid = 2;
constexpr int kUnbounded = 3;

struct Flags {
  std::string input;
  std::string output;
  std::string samples;
  std::optional<double> tol;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  int trials = 100;
  std::vector<int> sizes{2, 3, 4, 5, 6};
  std::string repro_dir = "suite_failures";
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::FormatError("cannot write " + path);
  out << text;
}

io::Problem load(const Flags& f) {
  io::Problem p = io::read_problem(f.input);
  if (f.tol) p.options.tol.decision = *f.tol;
  if (f.grid) p.options.grid = *f.grid;
  if (f.seed) p.options.seed = *f.seed;
  return p;
}

/// Runs a problem command, mapping failures onto the exit-code contract.
template <typename Body>
int guarded(const Flags& f, Body body) {
  try {
    body();
    return kOk;
  } catch (const io::FormatError& e) {
    std::cerr << "error: " << f.input;
    if (e.line() > 0) std::cerr << ":" << e.line() << ":" << e.column();
    std::cerr << ": " << e.what() << "\n";
    return kInvalid;
  } catch (const io::UnboundedError& e) {
    std::cerr << "error: " << f.input << ": " << e.what() << "\n" << e.diagnostic().dump(2) << "\n";
    return kUnbounded;
  } catch (const semihilbert::Error& e) {
    std::cerr << "error: " << f.input << ": " << e.what() << "\n";
    return e.kind() == semihilbert::ErrorKind::NotABounded ? kUnbounded : kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << f.input << ": " << e.what() << "\n";
    return kInvalid;
  }
}

int cmd_analyze(const Flags& f) {
  return guarded(f, [&] {
    const io::Problem p = load(f);
    std::optional<std::string> samples;
    if (!f.samples.empty()) {
      write_text(f.samples, io::range_csv(p, p.options.grid));
      samples = f.samples;
    }
    write_text(f.output, io::analyze(p, samples).dump(2) + "\n");
  });
}

int cmd_range(const Flags& f) {
  return guarded(f, [&] {
    const io::Problem p = load(f);
    write_text(f.output, io::range_csv(p, p.options.grid));
  });
}

int cmd_suite(const Flags& f) {
  harness::SuiteConfig cfg;
  cfg.trials = f.trials;
  cfg.seed = f.seed.value_or(cfg.seed);
  cfg.sizes = f.sizes;
  if (f.tol) cfg.tol.decision = *f.tol;
  if (f.grid) cfg.oracle_density = *f.grid;
  cfg.repro_dir = f.repro_dir;
  const harness::SuiteReport r = harness::run_suite(cfg);

  std::printf("suite: %ld trials, seed %llu, %ld resamples, %.2f s on %d threads\n", r.trials,
              static_cast<unsigned long long>(cfg.seed), r.resamples, r.wall_seconds, r.threads_used);
  for (const auto& p : r.properties) {
    std::printf("  %-26s %5ld/%-5ld max %.3e", p.name.c_str(), p.passes, p.trials, p.max_residual);
    if (p.decision) std::printf("  verdicts %ld/%ld", p.true_verdicts, p.false_verdicts);
    std::printf("\n");
  }
  for (const auto& g : r.coverage_gaps) std::printf("coverage gap: %s\n", g.c_str());
  for (const auto& fr : r.failures)
    std::printf("FAIL %s seed %llu residual %.3e reproducer %s\n", fr.property.c_str(),
                static_cast<unsigned long long>(fr.seed), fr.residual, fr.reproducer.c_str());
  if (!f.output.empty()) write_text(f.output, io::suite_report_to_json(r).dump(2) + "\n");
  const long failures = r.failure_count();
  std::printf("%s: %ld failures\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? kOk : kFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator geometry in semi-Hilbertian spaces"};
  app.require_subcommand(1);
  Flags f;

  auto positive = CLI::PositiveNumber;
  auto* analyze = app.add_subcommand("analyze", "Write a JSON report for one problem file");
  auto* range = app.add_subcommand("range", "Write W_A(T) boundary samples as CSV");
  auto* suite = app.add_subcommand("suite", "Run the randomized property suite");

  for (auto* sub : {analyze, range}) {
    sub->add_option("input", f.input, "Problem or report JSON")->required();
    sub->add_option("-o,--output", f.output, "Output path (default stdout)");
    sub->add_option("--tol", f.tol, "Decision tolerance")->check(positive);
    sub->add_option("--grid", f.grid, "Range sample count")->check(CLI::Range(8, 1 << 20));
    sub->add_option("--seed", f.seed, "Seed for multistart searches");
  }
  analyze->add_option("--samples", f.samples, "Also write range CSV to this path");

  suite->add_option("--trials", f.trials, "Number of trials")->check(CLI::Range(1, 1 << 24));
  suite->add_option("--seed", f.seed, "Master seed");
  suite->add_option("--sizes", f.sizes, "Comma-separated dimensions")
      ->delimiter(',')
      ->check(CLI::Range(1, 64));
  suite->add_option("--tol", f.tol, "Decision tolerance")->check(positive);
  suite->add_option("--grid", f.grid, "Oracle grid density, 0 disables")->check(CLI::Range(0, 4096));
  suite->add_option("-o,--output", f.output, "JSON report path");
  suite->add_option("--repro-dir", f.repro_dir, "Directory for failure reproducers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  if (analyze->parsed()) return cmd_analyze(f);
  if (range->parsed()) return cmd_range(f);
  return cmd_suite(f);
}
