#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "ghsvd/matrix.hpp"

namespace ghsvd::io {

// Little-endian container shared by every on-disk artifact:
//   "GHP1" | u64 rows | u64 cols | u8 kind | payload
// kind 0: column-major (re, im) f64 pairs; kind 1: `rows` i8 entries of +-1.

enum class Kind : std::uint8_t { ComplexMatrix = 0, Signature = 1 };

void write_matrix(std::ostream& out, const ComplexMatrix& m);
void write_signature(std::ostream& out, const Signature& j);
ComplexMatrix read_matrix(std::istream& in);
Signature read_signature(std::istream& in);
Kind peek_kind(std::istream& in);

void save(const std::filesystem::path& path, const ComplexMatrix& m);
void save(const std::filesystem::path& path, const Signature& j);
ComplexMatrix load_matrix(const std::filesystem::path& path);
Signature load_signature(const std::filesystem::path& path);

/// Real vectors (diagonals, eigenvalues) travel as n x 1 complex matrices
/// with zero imaginary parts.
ComplexMatrix column_of(std::span<const double> values);
std::vector<double> real_column(const ComplexMatrix& m);

}  // namespace ghsvd::io
