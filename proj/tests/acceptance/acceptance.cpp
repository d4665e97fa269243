// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ghsvd/assembly.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/generator.hpp"
#include "ghsvd/hz.hpp"
#include "ghsvd/hz_kernel.hpp"
#include "ghsvd/oracle.hpp"
#include "ghsvd/pipeline.hpp"
#include "ghsvd/report.hpp"
#include "ghsvd/shorten.hpp"
#include "ghsvd/strategy.hpp"
#include "reference.hpp"

using namespace ghsvd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double phase_time(const RunReport& r, const std::string& name) {
  for (const auto& t : r.timings)
    if (t.name == name) return t.seconds;
  return 0.0;
}

GeneratorSpec pair_spec(std::size_t n, std::size_t neg, double kappa) {
  GeneratorSpec s;
  s.kind = GeneratorKind::HermitianPair;
  s.n = n;
  s.neg = neg;
  s.kappa = kappa;
  s.lo = 0.1;
  s.hi = 10.0;
  s.law = SpectrumLaw::LogUniform;
  return s;
}

RunConfig pipeline_config(const GeneratorSpec& gen, Variant v, std::size_t workers, std::uint64_t seed,
                          const char* phases = nullptr) {
  RunConfig c;
  c.gen = gen;
  c.seed = seed;
  c.hz.variant = v;
  c.hz.workers = workers;
  if (phases) c.phases = parse_phases(phases);
  return c;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  return true;
}

bool same_bits(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const Complex x = a(i, j), y = b(i, j);
      if (std::bit_cast<std::uint64_t>(x.real()) != std::bit_cast<std::uint64_t>(y.real()) ||
          std::bit_cast<std::uint64_t>(x.imag()) != std::bit_cast<std::uint64_t>(y.imag()))
        return false;
    }
  return true;
}

// ||A - U diag(sigma) X||_F / ||A||_F with plain loops.
double factor_residual(const ComplexMatrix& a, const ComplexMatrix& u, std::span<const double> sigma,
                       const ComplexMatrix& x) {
  ComplexMatrix us = u;
  for (std::size_t j = 0; j < us.cols(); ++j)
    for (auto& v : us.col(j)) v *= sigma[j];
  return ref::rel_diff(ref::product(us, x), a);
}

Outcome hebpj_reconstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  bool ok = true;
  for (std::size_t order : {8u, 98u, 242u}) {
    const ComplexMatrix t = random_hermitian(order, rng);
    const HebpjResult r = hebpj(t);
    const double err = ref::rel_diff(ref::jgram(r.M, decode_signature(r.J)), t);
    const double bound = 100.0 * double(order * order) * ref::kEps;
    worst = std::max(worst, err / bound);
    ok = ok && err <= bound;
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 5.0, fmt("worst err/bound %.3g, %.2f s (limit 5 s)", worst, secs)};
}

Outcome phase2_grammians() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(202);
  const std::size_t m = 2000, n = 200;
  const ComplexMatrix ft = random_matrix(m, n, rng);
  const auto jt = ref::random_signs(m, rng);
  const ComplexMatrix gt = random_matrix(m, n, rng);
  const JqrResult q = jqr(ft, encode_signature(jt));
  const ComplexMatrix r = tsqr(prepermute(gt, q.col_perm));
  const double secs = seconds_since(t0);
  const double ef = ref::rel_diff(ref::jgram(q.F, decode_signature(q.J)), ref::jgram(prepermute(ft, q.col_perm), jt));
  const double eg = ref::rel_diff(ref::gram(r), ref::gram(prepermute(gt, q.col_perm)));
  const bool ok = ef <= 1e-11 && eg <= 1e-11 && secs < 30.0;
  return {ok, fmt("F Grammian %.2e, G Grammian %.2e (tol 1e-11), %.1f s (limit 30 s)", ef, eg, secs)};
}

Outcome ghsvd_residuals() {
  bool ok = true;
  std::string detail;
  double n500 = 0.0;
  for (std::size_t n : {100u, 300u, 500u}) {
    const GeneratorSpec gen = pair_spec(n, n / 3, 10.0);
    const auto t0 = std::chrono::steady_clock::now();
    const RunReport r = run_pipeline(pipeline_config(gen, Variant::BO, 4, 300 + n, "2-4"));
    const double secs = seconds_since(t0);
    if (r.status != RunStatus::Ok) return {false, fmt("n=%zu: %s", n, r.error.c_str())};
    if (n == 500) n500 = secs;
    // Square factors rebuilt from the same seed.
    const Dataset d = generate(gen, 300 + n);
    const ComplexMatrix g = tsqr(prepermute(d.pencil->G, r.col_perm));
    const HZOutput& hz = *r.hz;
    const double ef = factor_residual(r.jqr->F, hz.U, hz.SigmaF, *r.X);
    const double eg = factor_residual(g, hz.V, hz.SigmaG, *r.X);
    ok = ok && ef <= 1e-11 && eg <= 1e-11 && *r.err_f <= 1e-11 && *r.err_g <= 1e-11;
    detail += fmt("n=%zu errF %.2e errG %.2e; ", n, std::max(ef, *r.err_f), std::max(eg, *r.err_g));
  }
  ok = ok && n500 < 300.0;
  return {ok, detail + fmt("n=500 %.1f s (tol 1e-11, limit 300 s)", n500)};
}

Outcome oracle_equivalence() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {64u, 150u, 300u}) {
    // kappa(G) <= 500 keeps kappa(S) below 1e6 after the sigma_G scaling.
    const GeneratorSpec gen = pair_spec(n, n / 4, 500.0);
    RunConfig c = pipeline_config(gen, Variant::BO, 4, 400 + n, "2,3");
    c.oracle = true;
    const RunReport r = run_pipeline(c);
    if (r.status != RunStatus::Ok || !r.lambda_oracle) return {false, fmt("n=%zu: %s %s", n, r.error.c_str(), r.oracle_error.c_str())};
    const Dataset d = generate(gen, 400 + n);
    const HermitianPair hs = form_HS(*d.pencil);
    const std::vector<double> s_eig = ref::eigenvalues(hs.S);
    const double kappa_s = s_eig.back() / s_eig.front();
    const double vs_oracle = ref::max_rel(r.lambda_sorted, *r.lambda_oracle);
    const double vs_lapack = ref::max_rel(r.lambda_sorted, ref::generalized_eigenvalues(hs.H, hs.S));
    ok = ok && kappa_s <= 1e6 && vs_oracle <= 1e-9 && vs_lapack <= 1e-9;
    detail += fmt("n=%zu k(S) %.1e oracle %.2e lapack %.2e; ", n, kappa_s, vs_oracle, vs_lapack);
  }
  return {ok, detail + "tol 1e-9"};
}

Outcome gsvd_mode() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {50u, 200u}) {
    GeneratorSpec gen = pair_spec(n, 0, 50.0);
    gen.kind = GeneratorKind::GsvdPair;
    const RunReport r = run_pipeline(pipeline_config(gen, Variant::BO, 4, 500 + n, "2,3"));
    if (r.status != RunStatus::Ok) return {false, fmt("n=%zu: %s", n, r.error.c_str())};
    if (r.hz->signs.end() != std::find(r.hz->signs.begin(), r.hz->signs.end(), -1)) return {false, "negative sign with J = I"};
    std::vector<double> sv;
    for (std::size_t i = 0; i < n; ++i) sv.push_back(r.hz->SigmaF[i] / r.hz->SigmaG[i]);
    std::sort(sv.begin(), sv.end());
    const Dataset d = generate(gen, 500 + n);
    const ComplexMatrix ff = ref::gram(d.pencil->F), gg = ref::gram(d.pencil->G);
    std::vector<double> want = oracle_solve(ff, gg).lambda;
    std::vector<double> lap = ref::generalized_eigenvalues(ff, gg);
    for (auto& v : want) v = std::sqrt(v);
    for (auto& v : lap) v = std::sqrt(v);
    const double e1 = ref::max_rel(sv, want), e2 = ref::max_rel(sv, lap);
    ok = ok && e1 <= 1e-10 && e2 <= 1e-10;
    detail += fmt("n=%zu oracle %.2e lapack %.2e; ", n, e1, e2);
  }
  return {ok, detail + "tol 1e-10"};
}

// Z^* S Z - I and the off-diagonal of Z^* H Z, in extended precision.
struct Congruence {
  double s_err = 0.0;
  double h_off = 0.0;
};

Congruence congruence(const PivotBlock2& b, const Rotation2& zr) {
  using LC = std::complex<long double>;
  const auto lc = [](Complex v) { return LC(v.real(), v.imag()); };
  const LC z[2][2] = {{lc(zr.z11), lc(zr.z12)}, {lc(zr.z21), lc(zr.z22)}};
  const LC h[2][2] = {{LC(b.h_pp), lc(b.h_pq)}, {std::conj(lc(b.h_pq)), LC(b.h_qq)}};
  const LC s[2][2] = {{LC(b.s_pp), lc(b.s_pq)}, {std::conj(lc(b.s_pq)), LC(b.s_qq)}};
  const auto form = [&](const LC (&a)[2][2], int i, int j) {
    LC sum = 0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) sum += std::conj(z[r][i]) * a[r][c] * z[c][j];
    return sum;
  };
  const long double e = std::max({std::abs(form(s, 0, 0) - 1.0L), std::abs(form(s, 1, 1) - 1.0L),
                                  std::abs(form(s, 0, 1))});
  return {static_cast<double>(e), static_cast<double>(std::abs(form(h, 0, 1)))};
}

Outcome kernel_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(606);
  const int count = 10000;
  std::vector<PivotBlock2> blocks;
  for (int k = 0; k < count; ++k) {
    const int branch = k % 4;
    PivotBlock2 b;
    b.s_pp = std::exp(rng.uniform(-4.0, 4.0));
    b.s_qq = std::exp(rng.uniform(-4.0, 4.0));
    const double x = rng.uniform(0.0, 0.99);
    const Complex ph = std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
    const double root = std::sqrt(b.s_pp * b.s_qq);
    b.s_pq = x * ph * root;
    b.h_pp = rng.normal() * b.s_pp;
    b.h_qq = rng.normal() * b.s_qq;
    b.h_pq = rng.complex_normal() * root;
    if (branch == 1) {
      b.h_pq = 0.0;
      b.s_pq = 0.0;
    } else if (branch == 2) {
      b.s_pq = 0.0;
    } else if (branch == 3) {
      const double dd = rng.normal();
      b.h_pp = dd * b.s_pp;
      b.h_qq = dd * b.s_qq;
      b.h_pq = rng.normal() * ph * root;
    }
    blocks.push_back(b);
  }
  std::vector<Transform2> batched(blocks.size());
  compute_transforms(blocks, batched);
  // Worst error / bound for x = |s_pq| / sqrt(s_pp s_qq) below and above 0.95.
  std::array<double, 2> worst_s{}, worst_h{};
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const PivotBlock2& b = blocks[k];
    const PivotBlock2 p = prescale(b);
    const double hn = std::sqrt(p.h_pp * p.h_pp + p.h_qq * p.h_qq + 2.0 * std::norm(p.h_pq));
    const std::size_t band = std::abs(p.s_pq) < 0.95 ? 0 : 1;
    for (const Transform2& t : {compute_transform(b), batched[k]}) {
      // Identity kind leaves the columns alone, so its contract is on the prescaled block.
      const PivotBlock2& on = t.kind == TransformKind::Identity ? p : b;
      const Congruence c = congruence(on, t.kind == TransformKind::Identity ? Rotation2{} : t.Z);
      worst_s[band] = std::max(worst_s[band], c.s_err / (64 * ref::kEps));
      if (hn > 0.0) worst_h[band] = std::max(worst_h[band], c.h_off / (64 * ref::kEps * hn));
    }
  }
  const double secs = seconds_since(t0);
  const double worst = std::max({worst_s[0], worst_s[1], worst_h[0], worst_h[1]});
  return {worst <= 1.0 && secs < 10.0,
          fmt("%d blocks, 4 branches, err/(64 eps): x<0.95 S %.3g H %.3g; 0.95<=x<0.99 S %.3g H %.3g; %.2f s (limit 10 s)",
              count, worst_s[0], worst_h[0], worst_s[1], worst_h[1], secs)};
}

// Independent check: indices in range, p < q, disjoint within a step, every pair present.
bool valid_table(const Strategy& s, std::size_t n) {
  std::set<IndexPair> seen;
  for (const auto& step : s.steps) {
    std::vector<bool> used(n, false);
    for (const auto& [p, q] : step) {
      if (!(p < q && q < n) || used[p] || used[q]) return false;
      used[p] = used[q] = true;
      seen.insert({p, q});
    }
  }
  return seen.size() == n * (n - 1) / 2;
}

Outcome strategy_validity() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::size_t me_built = 0;
  for (std::size_t n = 2; n <= 256; n += 2) {
    const Strategy mm = strategy_mm(n);
    ok = ok && valid_table(mm, n) && covers_all_pairs(mm) && steps_disjoint(mm);
    if (me_constructible(n)) {
      ++me_built;
      const Strategy me = strategy_me(n);
      ok = ok && valid_table(me, n) && me.steps.size() == n - 1;
      for (const auto& step : me.steps) ok = ok && step.size() == n / 2;
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 10.0, fmt("MM for 128 orders, ME for %zu orders, %.2f s (limit 10 s)", me_built, secs)};
}

struct BigRuns {
  RunReport vp, bo, fb;
};

BigRuns& big_runs() {
  static BigRuns runs = [] {
    const GeneratorSpec gen = pair_spec(1024, 256, 10.0);
    BigRuns b;
    for (auto [v, dst] : {std::pair{Variant::BO, &b.bo}, {Variant::VP, &b.vp}, {Variant::FB, &b.fb}}) {
      *dst = run_pipeline(pipeline_config(gen, v, 4, 808, "2,3"));
      std::printf("    n=1024 %-2s: %s, %zu sweeps, phase 3 %.1f s\n", to_string(v).c_str(),
                  to_string(dst->status).c_str(), dst->hz ? dst->hz->sweeps : 0, phase_time(*dst, "phase3"));
      std::fflush(stdout);
    }
    return b;
  }();
  return runs;
}

Outcome sweep_budget() {
  const BigRuns& b = big_runs();
  for (const RunReport* r : {&b.vp, &b.bo, &b.fb})
    if (r->status != RunStatus::Ok) return {false, r->variant + ": " + r->error};
  const std::size_t sweeps = b.bo.hz->sweeps;
  const double vp = ref::max_rel(b.vp.lambda_sorted, b.bo.lambda_sorted);
  const double fb = ref::max_rel(b.fb.lambda_sorted, b.bo.lambda_sorted);
  const bool ok = b.bo.hz->converged && sweeps <= 30 && vp <= 1e-9 && fb <= 1e-9;
  return {ok, fmt("BO %zu block sweeps (limit 30); VP vs BO %.2e, FB vs BO %.2e (tol 1e-9)", sweeps, vp, fb)};
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (Variant v : {Variant::VP, Variant::BO}) {
    const RunConfig c = pipeline_config(pair_spec(200, 60, 100.0), v, 4, 909, "2-4");
    const RunReport a = run_pipeline(c), b = run_pipeline(c);
    if (a.status != RunStatus::Ok || b.status != RunStatus::Ok) return {false, a.error + b.error};
    const bool same = same_bits(a.hz->Lambda, b.hz->Lambda) && same_bits(a.hz->SigmaF, b.hz->SigmaF) &&
                      same_bits(a.hz->SigmaG, b.hz->SigmaG) && same_bits(a.hz->Z, b.hz->Z) &&
                      same_bits(*a.X, *b.X) && same_bits(a.jqr->F, b.jqr->F) && a.col_perm == b.col_perm;
    ok = ok && same;
    detail += to_string(v) + (same ? " identical; " : " DIFFERS; ");
  }
  return {ok, detail + "n=200, 4 workers, 8 lanes"};
}

Outcome ill_conditioned() {
  const GeneratorSpec gen = pair_spec(100, 30, 1e8);
  RunConfig c = pipeline_config(gen, Variant::BO, 4, 1010, "2,3");
  const RunReport r = run_pipeline(c);
  if (r.status != RunStatus::Ok) return {false, r.error};
  const Dataset d = generate(gen, 1010);
  const HermitianPair hs = form_HS(*d.pencil);
  std::string oracle;
  bool oracle_bad = false;
  try {
    const double err = ref::max_rel(oracle_solve(hs.H, hs.S).lambda, d.lambda);
    oracle_bad = err > 1e-3;
    oracle = fmt("oracle error %.2e", err);
  } catch (const IndefiniteMetric&) {
    oracle_bad = true;
    oracle = "oracle Cholesky failed";
  }
  const double known = ref::max_rel(r.lambda_sorted, d.lambda);
  const bool ok = oracle_bad && *r.eigen_residual <= 1e-8;
  return {ok, fmt("%s (needs > 1e-3 or failure); hz eigen residual %.2e (tol 1e-8), hz vs known %.2e", oracle.c_str(),
                  *r.eigen_residual, known)};
}

Outcome performance() {
  const BigRuns& b = big_runs();
  if (b.vp.status != RunStatus::Ok || b.bo.status != RunStatus::Ok) return {false, "a run failed"};
  const double bo = phase_time(b.bo, "phase3"), vp = phase_time(b.vp, "phase3");
  const double ratio = bo / vp;
  return {ratio < 1.0, fmt("n=1024, 4 workers: BO %.1f s, VP %.1f s, ratio %.3f (gate < 1)", bo, vp, ratio)};
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"hebpj reconstruction", hebpj_reconstruction},
      {"phase 2 Grammian preservation", phase2_grammians},
      {"GHSVD residuals", ghsvd_residuals},
      {"oracle equivalence", oracle_equivalence},
      {"GSVD mode", gsvd_mode},
      {"kernel exactness", kernel_exactness},
      {"strategy validity", strategy_validity},
      {"sweep budget", sweep_budget},
      {"determinism", determinism},
      {"ill-conditioned showcase", ill_conditioned},
      {"performance sanity", performance},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    if (!only.empty() && !only.contains(index)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%2d] %s  %-30s %s\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  const std::size_t ran = only.empty() ? criteria.size() : only.size();
  std::printf("%zu of %zu criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
