#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <optional>
#include <span>
#include <vector>

namespace ghsvd {

using Complex = std::complex<double>;

/// Column starts are aligned to one cache line (8 lanes of 8-byte reals).
inline constexpr std::size_t kAlignBytes = 64;
inline constexpr std::size_t kStrideQuantum = kAlignBytes / sizeof(Complex);

template <class T>
struct AlignedAllocator {
  using value_type = T;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{kAlignBytes}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{kAlignBytes}); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

/// Non-owning column-major view.  stride >= rows.
struct MatrixView {
  Complex* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;

  Complex& operator()(std::size_t i, std::size_t j) const { return data[i + j * stride]; }
  std::span<Complex> col(std::size_t j) const { return {data + j * stride, rows}; }
  MatrixView columns(std::size_t first, std::size_t count) const {
    return {data + first * stride, rows, count, stride};
  }
};

struct ConstMatrixView {
  const Complex* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;

  ConstMatrixView() = default;
  ConstMatrixView(const Complex* d, std::size_t r, std::size_t c, std::size_t s)
      : data(d), rows(r), cols(c), stride(s) {}
  ConstMatrixView(const MatrixView& v) : data(v.data), rows(v.rows), cols(v.cols), stride(v.stride) {}

  const Complex& operator()(std::size_t i, std::size_t j) const { return data[i + j * stride]; }
  std::span<const Complex> col(std::size_t j) const { return {data + j * stride, rows}; }
  ConstMatrixView columns(std::size_t first, std::size_t count) const {
    return {data + first * stride, rows, count, stride};
  }
};

/// Dense column-major complex matrix.  Padding rows between `rows()` and
/// `stride()` are zero and stay zero as long as writes go through the
/// accessors, which only expose the first `rows()` entries of a column.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t stride() const noexcept { return stride_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i + j * stride_]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i + j * stride_]; }

  std::span<Complex> col(std::size_t j) { return {data_.data() + j * stride_, rows_}; }
  std::span<const Complex> col(std::size_t j) const { return {data_.data() + j * stride_, rows_}; }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }

  MatrixView view() { return {data(), rows_, cols_, stride_}; }
  ConstMatrixView view() const { return {data(), rows_, cols_, stride_}; }
  MatrixView columns(std::size_t first, std::size_t count) { return view().columns(first, count); }
  ConstMatrixView columns(std::size_t first, std::size_t count) const {
    return view().columns(first, count);
  }

  void set_zero();

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Complex, AlignedAllocator<Complex>> data_;
};

std::size_t padded_stride(std::size_t rows);

ComplexMatrix copy_of(ConstMatrixView v);
void copy_into(ConstMatrixView src, MatrixView dst);

/// Entrywise bit-pattern comparison of the logical (unpadded) part.
bool bitwise_equal(const ComplexMatrix& a, const ComplexMatrix& b);

/// A maximal run of -1 entries on the diagonal of a signature matrix.
/// `start` is zero-based.
struct NegBlock {
  std::size_t start = 0;
  std::size_t length = 0;
  bool operator==(const NegBlock&) const = default;
};

/// Diagonal +-1 matrix stored as its runs of negative entries.
class Signature {
 public:
  Signature() = default;

  static Signature identity(std::size_t order);
  /// Sorted form: `n_plus` leading +1 entries followed by -1 entries.
  static Signature sorted(std::size_t n_plus, std::size_t order);
  static Signature from_blocks(std::size_t order, std::vector<NegBlock> blocks);
  static Signature concat(std::span<const Signature> parts);

  std::size_t order() const noexcept { return order_; }
  std::span<const NegBlock> neg_blocks() const noexcept { return blocks_; }
  /// Present iff every +1 precedes every -1.
  std::optional<std::size_t> n_plus() const noexcept { return n_plus_; }
  std::size_t negative_count() const noexcept;

  /// Entry i as +1 or -1.
  int operator[](std::size_t i) const;

  /// Restriction to rows [first, first + count).
  Signature slice(std::size_t first, std::size_t count) const;

  bool operator==(const Signature& other) const {
    return order_ == other.order_ && blocks_ == other.blocks_;
  }

 private:
  Signature(std::size_t order, std::vector<NegBlock> blocks);

  std::size_t order_ = 0;
  std::vector<NegBlock> blocks_;
  std::optional<std::size_t> n_plus_;
};

Signature encode_signature(std::span<const std::int8_t> diag);
std::vector<std::int8_t> decode_signature(const Signature& j);

/// Two-by-two complex matrix applied from the right to a column pair.
struct Rotation2 {
  Complex z11{1.0, 0.0};
  Complex z12{0.0, 0.0};
  Complex z21{0.0, 0.0};
  Complex z22{1.0, 0.0};

  static Rotation2 identity() { return {}; }
  bool is_identity() const {
    return z11 == Complex(1.0) && z12 == Complex(0.0) && z21 == Complex(0.0) && z22 == Complex(1.0);
  }
  Rotation2 adjoint() const { return {std::conj(z11), std::conj(z21), std::conj(z12), std::conj(z22)}; }
};

Rotation2 operator*(const Rotation2& a, const Rotation2& b);

/// perm[j] is the source index that lands at position j.
using Permutation = std::vector<std::size_t>;

bool is_permutation(std::span<const std::size_t> perm);
Permutation inverse_permutation(std::span<const std::size_t> perm);
Permutation identity_permutation(std::size_t n);

}  // namespace ghsvd
