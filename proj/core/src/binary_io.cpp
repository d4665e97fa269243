#include "ghsvd/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ghsvd/errors.hpp"

namespace ghsvd::io {
namespace {

constexpr std::array<char, 4> kMagic{'G', 'H', 'P', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw IoError("GHP1: truncated header");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return v;
}

void put_f64(std::ostream& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

struct Header {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  Kind kind = Kind::ComplexMatrix;
};

void write_header(std::ostream& out, const Header& h) {
  out.write(kMagic.data(), 4);
  put_u64(out, h.rows);
  put_u64(out, h.cols);
  const auto k = static_cast<char>(h.kind);
  out.write(&k, 1);
}

Header read_header(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kMagic) throw IoError("GHP1: bad magic");
  Header h;
  h.rows = get_u64(in);
  h.cols = get_u64(in);
  char k = 0;
  in.read(&k, 1);
  if (!in) throw IoError("GHP1: truncated header");
  if (k != 0 && k != 1) throw IoError("GHP1: unknown payload kind");
  h.kind = static_cast<Kind>(k);
  return h;
}

}  // namespace

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  write_header(out, {m.rows(), m.cols(), Kind::ComplexMatrix});
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      put_f64(out, m(i, j).real());
      put_f64(out, m(i, j).imag());
    }
  }
  if (!out) throw IoError("GHP1: write failed");
}

void write_signature(std::ostream& out, const Signature& j) {
  write_header(out, {j.order(), 1, Kind::Signature});
  const auto diag = decode_signature(j);
  out.write(reinterpret_cast<const char*>(diag.data()), static_cast<std::streamsize>(diag.size()));
  if (!out) throw IoError("GHP1: write failed");
}

ComplexMatrix read_matrix(std::istream& in) {
  const Header h = read_header(in);
  if (h.kind != Kind::ComplexMatrix) throw IoError("GHP1: expected a complex matrix payload");
  ComplexMatrix m(h.rows, h.cols);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double re = std::bit_cast<double>(get_u64(in));
      const double im = std::bit_cast<double>(get_u64(in));
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Signature read_signature(std::istream& in) {
  const Header h = read_header(in);
  if (h.kind != Kind::Signature) throw IoError("GHP1: expected a signature payload");
  std::vector<std::int8_t> diag(h.rows);
  in.read(reinterpret_cast<char*>(diag.data()), static_cast<std::streamsize>(diag.size()));
  if (!in) throw IoError("GHP1: truncated signature payload");
  try {
    return encode_signature(diag);
  } catch (const ContractViolation& e) {
    throw IoError(std::string("GHP1: ") + e.what());
  }
}

Kind peek_kind(std::istream& in) {
  const auto pos = in.tellg();
  const Header h = read_header(in);
  in.seekg(pos);
  return h.kind;
}

void save(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix(out, m);
}

void save(const std::filesystem::path& path, const Signature& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_signature(out, j);
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix(in);
}

Signature load_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_signature(in);
}

ComplexMatrix column_of(std::span<const double> values) {
  ComplexMatrix m(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
  return m;
}

std::vector<double> real_column(const ComplexMatrix& m) {
  require(m.cols() == 1, "real_column: expected a single column");
  std::vector<double> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, 0).real();
  return v;
}

}  // namespace ghsvd::io
