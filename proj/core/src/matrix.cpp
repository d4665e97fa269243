#include "ghsvd/matrix.hpp"

#include <algorithm>
#include <cstring>

#include "ghsvd/errors.hpp"

namespace ghsvd {

std::size_t padded_stride(std::size_t rows) {
  const std::size_t r = std::max<std::size_t>(rows, 1);
  return (r + kStrideQuantum - 1) / kStrideQuantum * kStrideQuantum;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(padded_stride(rows)), data_(stride_ * cols) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void ComplexMatrix::set_zero() { std::fill(data_.begin(), data_.end(), Complex{}); }

ComplexMatrix copy_of(ConstMatrixView v) {
  ComplexMatrix m(v.rows, v.cols);
  copy_into(v, m.view());
  return m;
}

void copy_into(ConstMatrixView src, MatrixView dst) {
  require(src.rows == dst.rows && src.cols == dst.cols, "copy_into: shape mismatch");
  for (std::size_t j = 0; j < src.cols; ++j) {
    std::memcpy(static_cast<void*>(dst.data + j * dst.stride), src.data + j * src.stride,
                src.rows * sizeof(Complex));
  }
}

bool bitwise_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (std::memcmp(a.col(j).data(), b.col(j).data(), a.rows() * sizeof(Complex)) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Signature::Signature(std::size_t order, std::vector<NegBlock> blocks)
    : order_(order), blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    n_plus_ = order_;
  } else if (blocks_.size() == 1 && blocks_.front().start + blocks_.front().length == order_) {
    n_plus_ = blocks_.front().start;
  }
}

Signature Signature::identity(std::size_t order) { return Signature(order, {}); }

Signature Signature::sorted(std::size_t n_plus, std::size_t order) {
  require(n_plus <= order, "Signature::sorted: n_plus exceeds order");
  if (n_plus == order) return identity(order);
  return Signature(order, {NegBlock{n_plus, order - n_plus}});
}

Signature Signature::from_blocks(std::size_t order, std::vector<NegBlock> blocks) {
  std::size_t next_free = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    require(b.length >= 1, "Signature: empty negative block");
    require(b.start >= next_free, "Signature: blocks overlap or are unsorted");
    // Adjacent blocks would not be maximal runs.
    require(k == 0 || b.start > next_free, "Signature: adjacent blocks must be merged");
    require(b.start + b.length <= order, "Signature: block exceeds order");
    next_free = b.start + b.length;
  }
  return Signature(order, std::move(blocks));
}

Signature Signature::concat(std::span<const Signature> parts) {
  std::size_t order = 0;
  std::vector<NegBlock> blocks;
  for (const auto& p : parts) {
    for (const auto& b : p.neg_blocks()) {
      const NegBlock shifted{b.start + order, b.length};
      if (!blocks.empty() && blocks.back().start + blocks.back().length == shifted.start) {
        blocks.back().length += shifted.length;
      } else {
        blocks.push_back(shifted);
      }
    }
    order += p.order();
  }
  return Signature(order, std::move(blocks));
}

std::size_t Signature::negative_count() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.length;
  return n;
}

int Signature::operator[](std::size_t i) const {
  require(i < order_, "Signature: index out of range");
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), i,
                             [](std::size_t v, const NegBlock& b) { return v < b.start; });
  if (it == blocks_.begin()) return 1;
  --it;
  return i < it->start + it->length ? -1 : 1;
}

Signature Signature::slice(std::size_t first, std::size_t count) const {
  require(first + count <= order_, "Signature::slice: range exceeds order");
  std::vector<NegBlock> out;
  const std::size_t last = first + count;
  for (const auto& b : blocks_) {
    const std::size_t lo = std::max(b.start, first);
    const std::size_t hi = std::min(b.start + b.length, last);
    if (lo < hi) out.push_back({lo - first, hi - lo});
  }
  return Signature(count, std::move(out));
}

Signature encode_signature(std::span<const std::int8_t> diag) {
  std::vector<NegBlock> blocks;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const auto d = diag[i];
    require(d == 1 || d == -1, "encode_signature: entries must be +1 or -1");
    if (d == -1) {
      if (!blocks.empty() && blocks.back().start + blocks.back().length == i) {
        ++blocks.back().length;
      } else {
        blocks.push_back({i, 1});
      }
    }
  }
  return Signature::from_blocks(diag.size(), std::move(blocks));
}

std::vector<std::int8_t> decode_signature(const Signature& j) {
  std::vector<std::int8_t> out(j.order(), 1);
  for (const auto& b : j.neg_blocks()) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(b.start), b.length, std::int8_t{-1});
  }
  return out;
}

Rotation2 operator*(const Rotation2& a, const Rotation2& b) {
  return {a.z11 * b.z11 + a.z12 * b.z21, a.z11 * b.z12 + a.z12 * b.z22, a.z21 * b.z11 + a.z22 * b.z21,
          a.z21 * b.z12 + a.z22 * b.z22};
}

bool is_permutation(std::span<const std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Permutation inverse_permutation(std::span<const std::size_t> perm) {
  require(is_permutation(perm), "inverse_permutation: not a permutation");
  Permutation inv(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) inv[perm[j]] = j;
  return inv;
}

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace ghsvd
