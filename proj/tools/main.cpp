#include <cctype>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/generator.hpp"
#include "ghsvd/pipeline.hpp"
#include "ghsvd/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

struct Options {
  std::string phases;
  std::string variant = "vp";
  std::string strategy = "me";
  std::size_t threads = 1;
  int simd = 8;
  std::uint64_t seed = 1;
  std::string gen;
  std::string in;
  std::string out;
  bool oracle = false;
  double tol = 1e-9;
  std::size_t cmax = 30;
};

ghsvd::RunConfig to_config(const Options& o) {
  ghsvd::RunConfig cfg;
  if (!o.phases.empty()) cfg.phases = ghsvd::parse_phases(o.phases);
  if (!o.in.empty()) cfg.input = o.in;
  if (!o.gen.empty()) cfg.gen = ghsvd::parse_generator_spec(o.gen);
  if (!o.out.empty()) cfg.out_dir = o.out;
  cfg.hz.variant = o.variant == "bo" ? ghsvd::Variant::BO : o.variant == "fb" ? ghsvd::Variant::FB : ghsvd::Variant::VP;
  cfg.hz.strategy = o.strategy == "mm" ? ghsvd::StrategyClass::MM : ghsvd::StrategyClass::ME;
  cfg.hz.workers = o.threads;
  cfg.hz.lanes.value = o.simd;
  cfg.hz.c_max = o.cmax;
  cfg.seed = o.seed;
  cfg.oracle = o.oracle;
  cfg.tol = o.tol;
  return cfg;
}

int run(const Options& o) {
  const ghsvd::RunConfig cfg = to_config(o);
  const ghsvd::RunReport report = ghsvd::run_pipeline(cfg);
  std::cout << ghsvd::report_text(report);
  if (cfg.out_dir) ghsvd::write_outputs(report, *cfg.out_dir);
  switch (report.status) {
    case ghsvd::RunStatus::Ok:
      return kOk;
    case ghsvd::RunStatus::NumericalFailure:
      return kNumerical;
    case ghsvd::RunStatus::UsageError:
      return kUsage;
  }
  return kUsage;
}

int generate(const Options& o) {
  ghsvd::require(!o.gen.empty(), "generate: --gen is required");
  ghsvd::require(!o.out.empty(), "generate: --out is required");
  const auto spec = ghsvd::parse_generator_spec(o.gen);
  ghsvd::write_dataset(ghsvd::generate(spec, o.seed), o.out);
  std::cout << "wrote " << ghsvd::to_string(spec) << " (seed " << o.seed << ") to " << o.out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Hermitian eigensolver via the implicit HZ one-sided Jacobi method"};
  app.require_subcommand(1);
  Options o;

  auto* gen_cmd = app.add_subcommand("generate", "Write a random dataset");
  gen_cmd->add_option("--gen", o.gen, "atoms:na=2,nl=4,ng=8 | hermitian-pair:n=64,... | gsvd-pair:n=64,...")
      ->required()
      ->envname("GHSVD_GEN");
  gen_cmd->add_option("--out", o.out, "Output directory")->required();
  gen_cmd->add_option("--seed", o.seed, "64-bit seed")->envname("GHSVD_SEED");

  auto* run_cmd = app.add_subcommand("run", "Run the phases on a dataset");
  auto* in_opt = run_cmd->add_option("--in", o.in, "Dataset directory")->envname("GHSVD_IN");
  auto* gen_opt = run_cmd->add_option("--gen", o.gen, "Generate the input in memory")->envname("GHSVD_GEN");
  in_opt->excludes(gen_opt);
  run_cmd->add_option("--out", o.out, "Directory for the outputs and reports")->envname("GHSVD_OUT");
  run_cmd->add_option("--phases", o.phases, "e.g. 1-4, 1,3,4, 3 (default: all the input allows)")->envname("GHSVD_PHASES");
  run_cmd->add_option("--variant", o.variant)
      ->check(CLI::IsMember({"vp", "bo", "fb"}, CLI::ignore_case))
      ->envname("GHSVD_VARIANT");
  run_cmd->add_option("--strategy", o.strategy)
      ->check(CLI::IsMember({"mm", "me"}, CLI::ignore_case))
      ->envname("GHSVD_STRATEGY");
  run_cmd->add_option("--threads", o.threads, "Worker count")->check(CLI::PositiveNumber)->envname("GHSVD_THREADS");
  run_cmd->add_option("--simd", o.simd, "Reduction lanes")
      ->check(CLI::IsMember({1, 2, 4, 8, 16}))
      ->envname("GHSVD_SIMD");
  run_cmd->add_option("--seed", o.seed, "64-bit seed")->envname("GHSVD_SEED");
  run_cmd->add_flag("--oracle", o.oracle, "Compare against the dense reference solver")->envname("GHSVD_ORACLE");
  run_cmd->add_option("--tol", o.tol, "Relative tolerance of the comparisons")->envname("GHSVD_TOL");
  run_cmd->add_option("--cmax", o.cmax, "Sweep limit")->check(CLI::PositiveNumber)->envname("GHSVD_CMAX");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return generate(o);
    for (auto& c : o.variant) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto& c : o.strategy) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return run(o);
  } catch (const ghsvd::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
