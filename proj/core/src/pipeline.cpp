#include "ghsvd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "ghsvd/binary_io.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/finalize.hpp"
#include "ghsvd/report.hpp"

namespace ghsvd {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Rows of z reordered so that row perm[i] of the result is row i of z.
ComplexMatrix unpermute_rows(const ComplexMatrix& z, const Permutation& perm) {
  ComplexMatrix out(z.rows(), z.cols());
  for (std::size_t j = 0; j < z.cols(); ++j) {
    for (std::size_t i = 0; i < z.rows(); ++i) out(perm[i], j) = z(i, j);
  }
  return out;
}

}  // namespace

bool PhaseSet::has(int phase) const {
  switch (phase) {
    case 1: return p1;
    case 2: return p2;
    case 3: return p3;
    case 4: return p4;
    default: return false;
  }
}

int PhaseSet::first() const {
  for (int k = 1; k <= 4; ++k) {
    if (has(k)) return k;
  }
  return 0;
}

std::string PhaseSet::str() const {
  std::string s;
  for (int k = 1; k <= 4; ++k) {
    if (!has(k)) continue;
    if (!s.empty()) s += ',';
    s += static_cast<char>('0' + k);
  }
  return s;
}

PhaseSet parse_phases(const std::string& text) {
  PhaseSet p;
  const auto set = [&](int k) {
    require(k >= 1 && k <= 4, "phases: expected numbers between 1 and 4 in '" + text + "'");
    (k == 1 ? p.p1 : k == 2 ? p.p2 : k == 3 ? p.p3 : p.p4) = true;
  };
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    require(!item.empty(), "phases: empty item in '" + text + "'");
    const auto dash = item.find('-');
    require(item.find_first_not_of("0123456789-") == std::string::npos, "phases: cannot parse '" + text + "'");
    if (dash == std::string::npos) {
      set(std::stoi(item));
      continue;
    }
    require(dash > 0 && dash + 1 < item.size(), "phases: bad range in '" + text + "'");
    const int a = std::stoi(item.substr(0, dash));
    const int b = std::stoi(item.substr(dash + 1));
    require(a <= b, "phases: descending range in '" + text + "'");
    for (int k = a; k <= b; ++k) set(k);
  }
  require(p.first() != 0, "phases: nothing selected");
  return p;
}

void validate(const PhaseSet& phases, bool input_is_atoms) {
  const int first = phases.first();
  require(first != 0, "phases: nothing selected");
  if (input_is_atoms) {
    require(first == 1, "phases: per-atom input must start at phase 1");
  } else {
    require(first == 2 || first == 3, "phases: a factored pencil enters at phase 2 or 3");
  }
  require(!phases.p4 || phases.p3, "phases: phase 4 needs phase 3");
  int last = 0;
  for (int k = 1; k <= 4; ++k) {
    if (phases.has(k)) last = k;
  }
  for (int k = first; k <= last; ++k) {
    require(phases.has(k) || k == 2, "phases: only phase 2 may be skipped inside the selected range");
  }
}

RunReport run_pipeline(const RunConfig& cfg) {
  RunReport r;
  r.variant = to_string(cfg.hz.variant);
  r.strategy = to_string(cfg.hz.strategy);
  r.workers = cfg.hz.workers;
  r.lanes = cfg.hz.lanes.value;
  r.seed = cfg.seed;
  std::string phase = "input";
  try {
    require(cfg.input.has_value() != cfg.gen.has_value(), "run: give exactly one of an input directory or a generator spec");
    Dataset d;
    {
      Stopwatch sw;
      if (cfg.input) {
        r.source = cfg.input->string();
        d = read_dataset(*cfg.input);
      } else {
        r.source = to_string(*cfg.gen);
        d = generate(*cfg.gen, cfg.seed);
      }
      r.timings.push_back({"input", sw.seconds()});
    }
    const PhaseSet phases = cfg.phases.value_or(PhaseSet{d.has_atoms(), true, true, true});
    r.phases = phases.str();
    validate(phases, d.has_atoms());
    HZConfig hz = cfg.hz;
    if (phases.p4) hz.want_uv = true;
    validate(hz);

    FactoredPencil tall;
    if (phases.p1) {
      phase = "1 (assembly)";
      Stopwatch sw;
      tall = assemble(d.atoms, hz.workers);
      r.timings.push_back({"phase1", sw.seconds()});
    } else {
      tall = std::move(*d.pencil);
    }
    r.m = tall.rows();
    r.n = tall.cols();

    std::optional<HermitianPair> hs;
    if (phases.p3) {
      phase = "explicit H, S";
      Stopwatch sw;
      hs = form_HS(tall);
      r.timings.push_back({"form_hs", sw.seconds()});
    }

    ComplexMatrix f, g;
    Signature j;
    r.col_perm = identity_permutation(r.n);
    if (phases.p2) {
      phase = "2 (shortening)";
      Stopwatch sw;
      JqrResult q = jqr(tall.F, tall.J, hz.lanes);
      g = tsqr(prepermute(tall.G, q.col_perm));
      f = q.F;
      j = q.J;
      r.col_perm = q.col_perm;
      r.jqr = std::move(q);
      r.timings.push_back({"phase2", sw.seconds()});
    } else {
      f = tall.F;
      g = tall.G;
      j = tall.J;
    }

    if (phases.p3) {
      phase = "3 (hz)";
      Stopwatch sw;
      HZOutput out = hz_solve(f, g, j, hz);
      r.timings.push_back({"phase3", sw.seconds()});
      r.lambda_sorted = out.Lambda;
      std::sort(r.lambda_sorted.begin(), r.lambda_sorted.end());
      const ComplexMatrix z = unpermute_rows(out.Z, r.col_perm);
      r.eigen_residual = eigen_residual(hs->H, hs->S, z, out.Lambda);

      if (phases.p4) {
        phase = "4 (inversion)";
        Stopwatch sw4;
        const LuCp lu = lu_complete(out.Z);
        ComplexMatrix x = invert(lu, hz.workers);
        const Residuals res = residuals(f, g, out.U, out.V, out.SigmaF, out.SigmaG, x);
        r.timings.push_back({"phase4", sw4.seconds()});
        r.err_f = res.err_f;
        r.err_g = res.err_g;
        r.kappa_z = kappa_proxy(lu);
        r.perturbed_pivots = lu.perturbed;
        r.X = std::move(x);
      }
      r.hz = std::move(out);

      if (!d.lambda.empty()) r.known_cmp = compare(r.lambda_sorted, d.lambda, cfg.tol);
      if (cfg.oracle) {
        phase = "oracle";
        Stopwatch swo;
        try {
          OracleResult o = oracle_solve(hs->H, hs->S);
          r.oracle_cmp = compare(r.lambda_sorted, o.lambda, cfg.tol);
          r.lambda_oracle = std::move(o.lambda);
        } catch (const IndefiniteMetric& e) {
          r.oracle_error = e.what();
        }
        r.timings.push_back({"oracle", swo.seconds()});
      }
    }
    r.pencil = std::move(tall);
  } catch (const NumericalError& e) {
    r.status = RunStatus::NumericalFailure;
    r.failed_phase = phase;
    r.error = e.what();
  } catch (const ContractViolation& e) {
    r.status = RunStatus::UsageError;
    r.failed_phase = phase;
    r.error = e.what();
  } catch (const IoError& e) {
    r.status = RunStatus::UsageError;
    r.failed_phase = phase;
    r.error = e.what();
  }
  return r;
}

void write_outputs(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  if (r.hz) {
    io::save(dir / "Lambda.ghp", io::column_of(r.hz->Lambda));
    io::save(dir / "SigmaF.ghp", io::column_of(r.hz->SigmaF));
    io::save(dir / "SigmaG.ghp", io::column_of(r.hz->SigmaG));
    io::save(dir / "Z.ghp", r.hz->Z);
  }
  if (r.X) io::save(dir / "X.ghp", *r.X);
  if (r.jqr) {
    io::save(dir / "jqr_F.ghp", r.jqr->F);
    io::save(dir / "jqr_J.ghp", r.jqr->J);
    std::ofstream side(dir / "jqr.txt");
    side.precision(17);
    side << "col_perm";
    for (const auto p : r.jqr->col_perm) side << ' ' << p;
    side << "\nrow_swaps";
    for (const auto& [a, b] : r.jqr->row_swaps) side << ' ' << a << ':' << b;
    side << "\ntau";
    for (const auto& refl : r.jqr->reflectors) side << ' ' << refl.tau;
    side << "\ntwo_by_two " << r.jqr->two_by_two_count << '\n';
    if (!side) throw IoError("write failed for jqr.txt");
  }
  std::ofstream js(dir / "report.json");
  js << report_json(r) << '\n';
  std::ofstream txt(dir / "report.txt");
  txt << report_text(r);
  if (!js || !txt) throw IoError("cannot write the report into " + dir.string());
}

}  // namespace ghsvd
