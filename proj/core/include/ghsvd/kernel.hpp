#pragma once

#include <cstdint>
#include <span>

#include "ghsvd/matrix.hpp"

namespace ghsvd {

/// Number of interleaved partial sums used by every reduction.  Fixing it
/// fixes the summation order, so results are reproducible run to run.
/// Supported values: 1, 2, 4, 8, 16.
struct Lanes {
  int value = 8;
};

void validate(Lanes lanes);

/// f^* J g.
Complex jdot(std::span<const Complex> f, std::span<const Complex> g, const Signature& j, Lanes lanes = {});
/// Same sum with J given entrywise; bitwise equal to the run-length overload.
Complex jdot(std::span<const Complex> f, std::span<const Complex> g, std::span<const std::int8_t> signs,
             Lanes lanes = {});
/// f^* g.
Complex dot(std::span<const Complex> f, std::span<const Complex> g, Lanes lanes = {});

/// f^* J f; the imaginary part is never formed.
double jnormsq(std::span<const Complex> f, const Signature& j, Lanes lanes = {});
double jnormsq(std::span<const Complex> f, std::span<const std::int8_t> signs, Lanes lanes = {});
double normsq(std::span<const Complex> f, Lanes lanes = {});

/// The three entries of the 2x2 J-Grammian of a column pair, in one pass.
/// Each entry is bitwise equal to the corresponding jdot / jnormsq call.
struct Gram3 {
  double pp = 0.0;
  double qq = 0.0;
  Complex pq{};
};
Gram3 jgram3(std::span<const Complex> p, std::span<const Complex> q, const Signature& j, Lanes lanes = {});
Gram3 gram3(std::span<const Complex> p, std::span<const Complex> q, Lanes lanes = {});

/// [p q] <- [p q] * z, in place.
void vrotm(std::span<Complex> p, std::span<Complex> q, const Rotation2& z);

/// Copy of m with row i multiplied by J_ii.
ComplexMatrix scale_rows(const ComplexMatrix& m, const Signature& j);
void scale_rows_in_place(MatrixView m, const Signature& j);

/// Eigendecomposition of the Hermitian matrix [[a, b], [conj(b), c]]:
/// r^* A r = diag(l1, l2) with r unitary.  r = I when b == 0.
struct Eig2 {
  double l1 = 0.0;
  double l2 = 0.0;
  Rotation2 r;
};
Eig2 hermitian_eig2(double a, Complex b, double c);

}  // namespace ghsvd
