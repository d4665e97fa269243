#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ghsvd/assembly.hpp"
#include "ghsvd/generator.hpp"
#include "ghsvd/hz.hpp"
#include "ghsvd/oracle.hpp"
#include "ghsvd/shorten.hpp"

namespace ghsvd {

/// Phases 1 (assembly), 2 (shortening), 3 (HZ) and 4 (inversion).
struct PhaseSet {
  bool p1 = false, p2 = false, p3 = false, p4 = false;

  bool has(int phase) const;
  int first() const;
  std::string str() const;
};

/// Accepts "1-4", "3", "1,3,4", ...
PhaseSet parse_phases(const std::string& text);

/// Phase 2 may be skipped between 1 and 3; every other gap is an error.
/// Atoms enter at phase 1, a pencil at phase 2 or 3.
void validate(const PhaseSet& phases, bool input_is_atoms);

struct RunConfig {
  /// Unset means every phase the input allows: 1-4 for atoms, 2-4 for a pencil.
  std::optional<PhaseSet> phases;
  std::optional<std::filesystem::path> input;
  std::optional<GeneratorSpec> gen;
  HZConfig hz;
  std::optional<std::filesystem::path> out_dir;
  std::uint64_t seed = 1;
  bool oracle = false;
  double tol = 1e-9;
};

enum class RunStatus { Ok, NumericalFailure, UsageError };

struct PhaseTiming {
  std::string name;
  double seconds = 0.0;
};

/// Everything a run produced.  Optional members are set only when the
/// producing phase ran.
struct RunReport {
  RunStatus status = RunStatus::Ok;
  std::string failed_phase;
  std::string error;

  std::string source;
  std::string phases;
  std::string variant;
  std::string strategy;
  std::size_t workers = 1;
  int lanes = 8;
  std::uint64_t seed = 0;

  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<PhaseTiming> timings;

  std::optional<FactoredPencil> pencil;
  std::optional<JqrResult> jqr;
  /// Column order of the square factors relative to the tall ones.
  Permutation col_perm;
  std::optional<HZOutput> hz;
  std::optional<ComplexMatrix> X;

  std::optional<double> eigen_residual;
  std::optional<double> err_f;
  std::optional<double> err_g;
  std::optional<double> kappa_z;
  std::size_t perturbed_pivots = 0;

  std::vector<double> lambda_sorted;
  std::optional<std::vector<double>> lambda_oracle;
  std::optional<Comparison> oracle_cmp;
  std::string oracle_error;
  std::optional<Comparison> known_cmp;
};

RunReport run_pipeline(const RunConfig& cfg);

/// Writes Lambda, Sigma and Z (and X, the JQR factors) plus report.json and
/// report.txt into `dir`.
void write_outputs(const RunReport& report, const std::filesystem::path& dir);

}  // namespace ghsvd
