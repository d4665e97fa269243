#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ghsvd/assembly.hpp"
#include "ghsvd/matrix.hpp"

namespace ghsvd {

/// std::mt19937_64 with explicitly defined conversions, so a seed yields the
/// same numbers on every platform:
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller on two uniforms, cosine branch only
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Real and imaginary parts independent N(0, 1/2).
  Complex complex_normal();
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

enum class GeneratorKind { Atoms, HermitianPair, GsvdPair };
enum class SpectrumLaw { Uniform, LogUniform };

/// Textual form: "<kind>:key=value,key=value".  Keys:
///   atoms:          na, nl, ng
///   hermitian-pair: n, m, neg, kappa, lo, hi, law, hyper
///   gsvd-pair:      n, m, kappa, lo, hi, law
/// `neg` counts negative eigenvalues; `kappa` is the target condition number
/// of G; |lambda| follows `law` on (lo, hi); `hyper` is the rapidity of the
/// hyperbolic rotations mixed into F.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::HermitianPair;
  std::size_t n_a = 2;
  std::size_t n_l = 4;
  std::size_t n_g = 8;
  std::size_t n = 64;
  std::size_t m = 0;
  std::size_t neg = 0;
  double kappa = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  SpectrumLaw law = SpectrumLaw::Uniform;
  double hyper = 0.0;

  std::size_t rows() const noexcept { return m == 0 ? 2 * n : m; }
};

GeneratorSpec parse_generator_spec(const std::string& text);
std::string to_string(const GeneratorSpec& spec);
void validate(const GeneratorSpec& spec);

/// Either atoms (Phase 1 input) or a factored pencil (Phase 2/3 input).
struct Dataset {
  std::vector<AtomBlock> atoms;
  std::optional<FactoredPencil> pencil;
  /// Known eigenvalues, ascending, when the generator controls them.
  std::vector<double> lambda;

  bool has_atoms() const noexcept { return !atoms.empty(); }
};

Dataset generate(const GeneratorSpec& spec, std::uint64_t seed);

/// Layout: a text manifest plus one binary file per matrix role.
void write_dataset(const Dataset& d, const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

/// Haar-distributed m x n matrix with orthonormal columns.
ComplexMatrix random_orthonormal(std::size_t m, std::size_t n, Rng& rng);
ComplexMatrix random_matrix(std::size_t m, std::size_t n, Rng& rng);
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);

}  // namespace ghsvd
