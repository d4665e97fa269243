#pragma once

#include "ghsvd/matrix.hpp"

namespace ghsvd {

enum class Op { None, Adjoint };

/// c <- alpha * op(a) * op(b) + beta * c.  Backed by a sequential BLAS so the
/// result does not depend on any BLAS-internal threading.
void gemm(Op op_a, Op op_b, Complex alpha, ConstMatrixView a, ConstMatrixView b, Complex beta, MatrixView c);

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b, Op op_a = Op::None,
                       Op op_b = Op::None);

/// g^* g with both triangles filled.
ComplexMatrix gram_matrix(ConstMatrixView g);

ComplexMatrix adjoint(ConstMatrixView a);

/// Replaces a by (a + a^*) / 2; the diagonal becomes exactly real.
void make_hermitian(ComplexMatrix& a);

double frobenius_norm(ConstMatrixView a);
double max_abs(ConstMatrixView a);
/// ||a - b||_F.
double frobenius_distance(ConstMatrixView a, ConstMatrixView b);

}  // namespace ghsvd
