#include "ghsvd/generator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ghsvd/binary_io.hpp"
#include "ghsvd/dense.hpp"
#include "ghsvd/errors.hpp"

namespace ghsvd {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

ComplexMatrix random_matrix(std::size_t m, std::size_t n, Rng& rng) {
  ComplexMatrix a(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) a(i, j) = rng.complex_normal();
  }
  return a;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  ComplexMatrix t(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    t(j, j) = a(j, j).real();
    for (std::size_t i = j + 1; i < n; ++i) {
      t(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
      t(j, i) = std::conj(t(i, j));
    }
  }
  return t;
}

ComplexMatrix random_orthonormal(std::size_t m, std::size_t n, Rng& rng) {
  require(m >= n, "random_orthonormal: need m >= n");
  ComplexMatrix q = random_matrix(m, n, rng);
  if (n == 0) return q;
  std::vector<Complex> tau(n);
  const auto lm = static_cast<lapack_int>(m), ln = static_cast<lapack_int>(n);
  const auto ld = static_cast<lapack_int>(q.stride());
  if (LAPACKE_zgeqrf(LAPACK_COL_MAJOR, lm, ln, q.data(), ld, tau.data()) != 0) {
    throw NumericalError("random_orthonormal: zgeqrf failed");
  }
  std::vector<Complex> phase(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex d = q(j, j);
    phase[j] = std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
  }
  if (LAPACKE_zungqr(LAPACK_COL_MAJOR, lm, ln, ln, q.data(), ld, tau.data()) != 0) {
    throw NumericalError("random_orthonormal: zungqr failed");
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (auto& v : q.col(j)) v *= phase[j];
  }
  return q;
}

namespace {

std::string kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Atoms: return "atoms";
    case GeneratorKind::HermitianPair: return "hermitian-pair";
    case GeneratorKind::GsvdPair: return "gsvd-pair";
  }
  return "?";
}

std::size_t to_count(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ContractViolation("generator spec: '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ContractViolation("generator spec: '" + key + "' expects a number, got '" + v + "'");
  }
}

// Rows [0, n) get sigma_F X; J is sorted before the final row shuffle.
FactoredPencil make_pencil(const GeneratorSpec& spec, Rng& rng, std::vector<double>& lambda) {
  const std::size_t n = spec.n;
  const std::size_t m = spec.rows();
  const std::size_t neg = spec.kind == GeneratorKind::GsvdPair ? 0 : spec.neg;

  std::vector<double> mag(n);
  for (auto& v : mag) {
    do {
      const double u = rng.uniform();
      v = spec.law == SpectrumLaw::Uniform
              ? spec.lo + (spec.hi - spec.lo) * u
              : std::exp(std::log(spec.lo) + (std::log(spec.hi) - std::log(spec.lo)) * u);
    } while (!(v > 0.0));
  }
  std::vector<double> sf(n), sg(n);
  for (std::size_t i = 0; i < n; ++i) {
    sf[i] = std::sqrt(mag[i] / (1.0 + mag[i]));
    sg[i] = 1.0 / std::sqrt(1.0 + mag[i]);
  }

  // X = W1 diag(d) W2 with d log-spaced in [1/kappa, 1].
  const ComplexMatrix w1 = random_orthonormal(n, n, rng);
  const ComplexMatrix w2 = random_orthonormal(n, n, rng);
  ComplexMatrix w1d = w1;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = n > 1 ? std::pow(spec.kappa, -static_cast<double>(j) / static_cast<double>(n - 1)) : 1.0;
    for (auto& v : w1d.col(j)) v *= d;
  }
  const ComplexMatrix x = multiply(w1d, w2);

  // Signs: the last `neg` of the first n rows, and a matching share of the rest.
  std::vector<std::int8_t> sign(m, 1);
  for (std::size_t i = n - neg; i < n; ++i) sign[i] = -1;
  const std::size_t extra = n > 0 ? static_cast<std::size_t>(std::llround(double(m - n) * double(neg) / double(n))) : 0;
  for (std::size_t i = m - extra; i < m; ++i) sign[i] = -1;

  ComplexMatrix f(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) f(i, j) = sf[i] * x(i, j);
  }
  std::vector<std::size_t> pos, negs;
  for (std::size_t i = 0; i < m; ++i) (sign[i] > 0 ? pos : negs).push_back(i);

  const auto mix = [&](const std::vector<std::size_t>& rows) {
    if (rows.size() < 2) return;
    const std::size_t r = rows.size();
    ComplexMatrix sub(r, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < r; ++i) sub(i, j) = f(rows[i], j);
    }
    const ComplexMatrix q = random_orthonormal(r, r, rng);
    const ComplexMatrix mixed = multiply(q, sub);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < r; ++i) f(rows[i], j) = mixed(i, j);
    }
  };
  mix(pos);
  mix(negs);
  if (spec.hyper > 0.0 && !pos.empty() && !negs.empty()) {
    const std::size_t pairs = std::min(pos.size(), negs.size());
    for (std::size_t k = 0; k < pairs; ++k) {
      const double theta = spec.hyper * rng.uniform(0.5, 1.0);
      const double c = std::cosh(theta), s = std::sinh(theta);
      for (std::size_t j = 0; j < n; ++j) {
        const Complex a = f(pos[k], j), b = f(negs[k], j);
        f(pos[k], j) = c * a + s * b;
        f(negs[k], j) = s * a + c * b;
      }
    }
    mix(pos);
    mix(negs);
  }

  // Shuffle rows so that J has many runs.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  FactoredPencil p{ComplexMatrix(m, n), Signature{}, ComplexMatrix{}};
  std::vector<std::int8_t> js(m);
  for (std::size_t i = 0; i < m; ++i) {
    js[i] = sign[order[i]];
    for (std::size_t j = 0; j < n; ++j) p.F(i, j) = f(order[i], j);
  }
  p.J = encode_signature(js);

  ComplexMatrix v = random_orthonormal(m, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto& e : v.col(j)) e *= sg[j];
  }
  p.G = multiply(v, x);

  lambda.resize(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = (i >= n - neg ? -1.0 : 1.0) * mag[i];
  std::sort(lambda.begin(), lambda.end());
  return p;
}

std::vector<AtomBlock> make_atoms(const GeneratorSpec& spec, Rng& rng) {
  std::vector<AtomBlock> atoms(spec.n_a);
  const double tscale = 1.0 / std::sqrt(2.0 * static_cast<double>(spec.n_l));
  const double ascale = 1.0 / std::sqrt(static_cast<double>(spec.n_g));
  for (auto& a : atoms) {
    a.A = random_matrix(spec.n_l, spec.n_g, rng);
    a.B = random_matrix(spec.n_l, spec.n_g, rng);
    for (auto* mtx : {&a.A, &a.B}) {
      for (std::size_t j = 0; j < spec.n_g; ++j) {
        for (auto& v : mtx->col(j)) v *= ascale;
      }
    }
    a.U.resize(spec.n_l);
    for (auto& u : a.U) u = rng.uniform(0.5, 1.5);
    a.T_AA = random_hermitian(spec.n_l, rng);
    a.T_BB = random_hermitian(spec.n_l, rng);
    a.T_AB = random_matrix(spec.n_l, spec.n_l, rng);
    for (auto* mtx : {&a.T_AA, &a.T_BB, &a.T_AB}) {
      for (std::size_t j = 0; j < spec.n_l; ++j) {
        for (auto& v : mtx->col(j)) v *= tscale;
      }
    }
  }
  return atoms;
}

std::string atom_file(std::size_t a, const char* role) {
  std::ostringstream s;
  s << "atom_" << std::setw(4) << std::setfill('0') << a << '_' << role << ".ghp";
  return s.str();
}

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "atoms") {
    spec.kind = GeneratorKind::Atoms;
  } else if (kind == "hermitian-pair") {
    spec.kind = GeneratorKind::HermitianPair;
  } else if (kind == "gsvd-pair") {
    spec.kind = GeneratorKind::GsvdPair;
  } else {
    throw ContractViolation("generator spec: unknown kind '" + kind + "'");
  }
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ContractViolation("generator spec: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      if (key == "na") spec.n_a = to_count(key, val);
      else if (key == "nl") spec.n_l = to_count(key, val);
      else if (key == "ng") spec.n_g = to_count(key, val);
      else if (key == "n") spec.n = to_count(key, val);
      else if (key == "m") spec.m = to_count(key, val);
      else if (key == "neg") spec.neg = to_count(key, val);
      else if (key == "kappa") spec.kappa = to_real(key, val);
      else if (key == "lo") spec.lo = to_real(key, val);
      else if (key == "hi") spec.hi = to_real(key, val);
      else if (key == "hyper") spec.hyper = to_real(key, val);
      else if (key == "law") {
        if (val == "uniform") spec.law = SpectrumLaw::Uniform;
        else if (val == "log") spec.law = SpectrumLaw::LogUniform;
        else throw ContractViolation("generator spec: law must be 'uniform' or 'log'");
      } else {
        throw ContractViolation("generator spec: unknown key '" + key + "'");
      }
    }
  }
  validate(spec);
  return spec;
}

std::string to_string(const GeneratorSpec& spec) {
  std::ostringstream s;
  s.precision(17);
  s << kind_name(spec.kind) << ':';
  if (spec.kind == GeneratorKind::Atoms) {
    s << "na=" << spec.n_a << ",nl=" << spec.n_l << ",ng=" << spec.n_g;
    return s.str();
  }
  s << "n=" << spec.n << ",m=" << spec.rows();
  if (spec.kind == GeneratorKind::HermitianPair) s << ",neg=" << spec.neg << ",hyper=" << spec.hyper;
  s << ",kappa=" << spec.kappa << ",lo=" << spec.lo << ",hi=" << spec.hi
    << ",law=" << (spec.law == SpectrumLaw::Uniform ? "uniform" : "log");
  return s.str();
}

void validate(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::Atoms) {
    require(spec.n_a > 0 && spec.n_l > 0 && spec.n_g > 0, "generator spec: atom dimensions must be positive");
    return;
  }
  require(spec.n > 0, "generator spec: n must be positive");
  require(spec.rows() >= spec.n, "generator spec: m must be at least n");
  require(spec.neg <= spec.n, "generator spec: neg cannot exceed n");
  require(spec.kappa >= 1.0, "generator spec: kappa must be at least 1");
  require(spec.lo >= 0.0 && spec.lo < spec.hi, "generator spec: need 0 <= lo < hi");
  require(spec.law == SpectrumLaw::Uniform || spec.lo > 0.0, "generator spec: the log law needs lo > 0");
  require(spec.hyper >= 0.0, "generator spec: hyper must be non-negative");
  require(spec.kind != GeneratorKind::GsvdPair || (spec.neg == 0 && spec.hyper == 0.0),
          "generator spec: gsvd-pair has J = I, so neg and hyper must be 0");
}

Dataset generate(const GeneratorSpec& spec, std::uint64_t seed) {
  validate(spec);
  Rng rng(seed);
  Dataset d;
  if (spec.kind == GeneratorKind::Atoms) {
    d.atoms = make_atoms(spec, rng);
  } else {
    d.pencil = make_pencil(spec, rng, d.lambda);
  }
  return d;
}

void write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw IoError("cannot write " + (dir / "manifest.txt").string());
  manifest << "format ghsvd-dataset 1\n";
  if (d.has_atoms()) {
    const auto& a0 = d.atoms.front();
    manifest << "kind atoms\nN_A " << d.atoms.size() << "\nN_L " << a0.n_l() << "\nN_G " << a0.n_g() << "\n";
    for (std::size_t a = 0; a < d.atoms.size(); ++a) {
      const AtomBlock& at = d.atoms[a];
      io::save(dir / atom_file(a, "A"), at.A);
      io::save(dir / atom_file(a, "B"), at.B);
      io::save(dir / atom_file(a, "U"), io::column_of(at.U));
      io::save(dir / atom_file(a, "TAA"), at.T_AA);
      io::save(dir / atom_file(a, "TBB"), at.T_BB);
      io::save(dir / atom_file(a, "TAB"), at.T_AB);
    }
  } else {
    require(d.pencil.has_value(), "write_dataset: empty dataset");
    const FactoredPencil& p = *d.pencil;
    manifest << "kind pencil\nm " << p.rows() << "\nn " << p.cols() << "\n";
    io::save(dir / "F.ghp", p.F);
    io::save(dir / "J.ghp", p.J);
    io::save(dir / "G.ghp", p.G);
    if (!d.lambda.empty()) io::save(dir / "lambda.ghp", io::column_of(d.lambda));
  }
  if (!manifest) throw IoError("write failed for " + (dir / "manifest.txt").string());
}

Dataset read_dataset(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) throw IoError("cannot open " + (dir / "manifest.txt").string());
  std::map<std::string, std::string> kv;
  std::string key, value;
  while (manifest >> key && std::getline(manifest >> std::ws, value)) kv[key] = value;
  if (!kv.contains("kind")) throw IoError("manifest: missing 'kind'");
  const auto count = [&](const std::string& k) -> std::size_t {
    if (!kv.contains(k)) throw IoError("manifest: missing '" + k + "'");
    try {
      return static_cast<std::size_t>(std::stoull(kv[k]));
    } catch (const std::exception&) {
      throw IoError("manifest: bad value for '" + k + "'");
    }
  };
  Dataset d;
  if (kv["kind"] == "atoms") {
    const std::size_t na = count("N_A"), nl = count("N_L"), ng = count("N_G");
    d.atoms.resize(na);
    for (std::size_t a = 0; a < na; ++a) {
      AtomBlock& at = d.atoms[a];
      at.A = io::load_matrix(dir / atom_file(a, "A"));
      at.B = io::load_matrix(dir / atom_file(a, "B"));
      at.U = io::real_column(io::load_matrix(dir / atom_file(a, "U")));
      at.T_AA = io::load_matrix(dir / atom_file(a, "TAA"));
      at.T_BB = io::load_matrix(dir / atom_file(a, "TBB"));
      at.T_AB = io::load_matrix(dir / atom_file(a, "TAB"));
      if (at.n_l() != nl || at.n_g() != ng) throw IoError("atom " + std::to_string(a) + " disagrees with the manifest");
    }
  } else if (kv["kind"] == "pencil") {
    FactoredPencil p{io::load_matrix(dir / "F.ghp"), io::load_signature(dir / "J.ghp"), io::load_matrix(dir / "G.ghp")};
    if (p.rows() != count("m") || p.cols() != count("n")) throw IoError("pencil disagrees with the manifest");
    if (p.J.order() != p.rows() || p.G.rows() != p.rows() || p.G.cols() != p.cols()) {
      throw IoError("pencil files have inconsistent shapes");
    }
    if (std::filesystem::exists(dir / "lambda.ghp")) d.lambda = io::real_column(io::load_matrix(dir / "lambda.ghp"));
    d.pencil = std::move(p);
  } else {
    throw IoError("manifest: unknown kind '" + kv["kind"] + "'");
  }
  return d;
}

}  // namespace ghsvd
