#include "ghsvd/hz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ghsvd/assembly.hpp"
#include "ghsvd/dense.hpp"
#include "ghsvd/errors.hpp"
#include "ghsvd/parallel.hpp"

namespace ghsvd {
namespace {

struct Counts {
  std::size_t all = 0;
  std::size_t big = 0;
};

struct Level1Run {
  std::size_t sweeps = 0;
  Counts counts;
  bool converged = false;
};

struct Scratch {
  std::vector<PivotBlock2> blocks;
  std::vector<std::size_t> which;
  std::vector<Transform2> transforms;
};

// One step of a pointwise sweep on the pairs [first, last) of `step`.
Counts process_pairs(MatrixView f, MatrixView g, MatrixView z, const Signature& j, const std::vector<IndexPair>& step,
                     std::size_t first, std::size_t last, std::size_t n_conv, double eps, Lanes lanes, Scratch& sc) {
  sc.blocks.clear();
  sc.which.clear();
  for (std::size_t i = first; i < last; ++i) {
    const auto [p, q] = step[i];
    const PivotBlock2 b = gram2(f.col(p), f.col(q), g.col(p), g.col(q), j, lanes);
    if (needs_transform(prescale(b), n_conv, eps)) {
      sc.blocks.push_back(b);
      sc.which.push_back(i);
    }
  }
  Counts c;
  if (sc.blocks.empty()) return c;
  sc.transforms.resize(sc.blocks.size());
  compute_transforms(sc.blocks, sc.transforms);
  for (std::size_t k = 0; k < sc.which.size(); ++k) {
    const Transform2& t = sc.transforms[k];
    if (t.kind == TransformKind::Identity) continue;
    const auto [p, q] = step[sc.which[k]];
    vrotm(f.col(p), f.col(q), t.Z);
    vrotm(g.col(p), g.col(q), t.Z);
    vrotm(z.col(p), z.col(q), t.Z);
    c.all += 1;
    if (t.kind == TransformKind::Big) c.big += 1;
  }
  return c;
}

Counts sweep_once(MatrixView f, MatrixView g, MatrixView z, const Signature& j, const Strategy& st, std::size_t n_conv,
                  double eps, Lanes lanes, WorkerPool* pool, std::vector<Scratch>& scratch) {
  Counts total;
  const auto group = static_cast<std::size_t>(std::max(lanes.value, 1));
  std::vector<Counts> per_group;
  for (const auto& step : st.steps) {
    const std::size_t groups = (step.size() + group - 1) / group;
    per_group.assign(groups, Counts{});
    const auto body = [&](std::size_t gi, std::size_t worker) {
      const std::size_t first = gi * group;
      const std::size_t last = std::min(step.size(), first + group);
      per_group[gi] = process_pairs(f, g, z, j, step, first, last, n_conv, eps, lanes, scratch[worker]);
    };
    if (pool) {
      pool->for_each(groups, body);
    } else {
      for (std::size_t gi = 0; gi < groups; ++gi) body(gi, 0);
    }
    for (const Counts& c : per_group) {
      total.all += c.all;
      total.big += c.big;
    }
  }
  return total;
}

Level1Run run_level1(MatrixView f, MatrixView g, MatrixView z, const Signature& j, const Strategy& st,
                     std::size_t n_conv, std::size_t c_max, double eps, Lanes lanes, WorkerPool* pool,
                     bool outermost) {
  std::vector<Scratch> scratch(pool ? pool->size() : 1);
  Level1Run run;
  while (run.sweeps < c_max) {
    const Counts c = sweep_once(f, g, z, j, st, n_conv, eps, lanes, pool, scratch);
    run.sweeps += 1;
    run.counts.all += c.all;
    run.counts.big += c.big;
    if ((outermost ? c.big : c.all) == 0) {
      run.converged = true;
      break;
    }
  }
  return run;
}

ComplexMatrix leading_columns(const ComplexMatrix& a, std::size_t rows, std::size_t cols) {
  ComplexMatrix out(rows, cols);
  copy_into(ConstMatrixView(a.data(), rows, cols, a.stride()), out.view());
  return out;
}

// Widths of the 2t block columns: ceil(n / 2t) or one less, wider first.
std::vector<std::size_t> block_widths(std::size_t n, std::size_t blocks) {
  const std::size_t w = (n + blocks - 1) / blocks;
  const std::size_t wide = n - blocks * (w - 1);
  std::vector<std::size_t> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) out[b] = b < wide ? w : w - 1;
  return out;
}

// S = R^* R with R = U P^T from a diagonally pivoted Cholesky factorization.
ComplexMatrix pivoted_cholesky(const ComplexMatrix& s) {
  const std::size_t k = s.rows();
  ComplexMatrix a = s;
  std::vector<lapack_int> piv(k);
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_zpstrf(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(k), a.data(),
                                         static_cast<lapack_int>(a.stride()), piv.data(), &rank, -1.0);
  if (info < 0) throw NumericalError("pivoted_cholesky: zpstrf rejected its arguments");
  if (info > 0 || static_cast<std::size_t>(rank) < k) {
    throw IndefiniteMetric("block S is numerically indefinite or rank deficient (rank " + std::to_string(rank) +
                           " of " + std::to_string(k) + ")");
  }
  ComplexMatrix r(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto dst = static_cast<std::size_t>(piv[j] - 1);
    for (std::size_t i = 0; i <= j; ++i) r(i, dst) = a(i, j);
  }
  return r;
}

struct BlockSlot {
  std::size_t worker = 0;
  std::size_t offset = 0;
};

}  // namespace

void validate(const HZConfig& cfg) {
  require(cfg.c_max >= 1, "HZConfig: c_max must be at least 1");
  require(cfg.workers >= 1, "HZConfig: need at least one worker");
  require(cfg.eps > 0.0, "HZConfig: eps must be positive");
  ghsvd::validate(cfg.lanes);
}

Bordered border(const ComplexMatrix& f, const ComplexMatrix& g, const ComplexMatrix& z, const Signature& j) {
  require(f.cols() == g.cols() && z.rows() == f.cols() && z.cols() == f.cols() && j.order() == f.rows(),
          "border: inconsistent shapes");
  const std::size_t n = f.cols();
  Bordered out{ComplexMatrix(f.rows() + 1, n + 1), ComplexMatrix(g.rows() + 1, n + 1), ComplexMatrix(n + 1, n + 1),
               Signature{}};
  copy_into(f.view(), MatrixView{out.F.data(), f.rows(), n, out.F.stride()});
  copy_into(g.view(), MatrixView{out.G.data(), g.rows(), n, out.G.stride()});
  copy_into(z.view(), MatrixView{out.Z.data(), n, n, out.Z.stride()});
  out.F(f.rows(), n) = 1.0;
  out.G(g.rows(), n) = 1.0;
  out.Z(n, n) = 1.0;
  const Signature parts[] = {j, Signature::identity(1)};
  out.J = Signature::concat(parts);
  return out;
}

HZOutput hz_level1(const ComplexMatrix& f, const ComplexMatrix& g, const Signature& j, const HZConfig& cfg,
                   const Strategy* strategy) {
  validate(cfg);
  require(f.cols() == g.cols() && j.order() == f.rows(), "hz_level1: inconsistent shapes");
  const std::size_t n = f.cols();
  HZOutput out;
  if (n == 0) return out;

  const bool odd = n % 2 == 1;
  Bordered w = odd ? border(f, g, ComplexMatrix::identity(n), j)
                   : Bordered{f, g, ComplexMatrix::identity(n), j};
  const std::size_t nb = w.F.cols();
  const Strategy own = strategy ? Strategy{} : make_strategy(cfg.strategy, nb);
  const Strategy& st = strategy ? *strategy : own;
  require(st.n == nb, "hz_level1: strategy order does not match the problem");

  std::unique_ptr<WorkerPool> pool;
  if (cfg.workers > 1) pool = std::make_unique<WorkerPool>(cfg.workers);
  const Level1Run run =
      run_level1(w.F.view(), w.G.view(), w.Z.view(), w.J, st, n, cfg.c_max, cfg.eps, cfg.lanes, pool.get(), true);

  out.sweeps = run.sweeps;
  out.all_count = run.counts.all;
  out.big_count = run.counts.big;
  out.converged = run.converged;
  if (odd) {
    out.Fc = leading_columns(w.F, f.rows(), n);
    out.Gc = leading_columns(w.G, g.rows(), n);
    out.Zc = leading_columns(w.Z, n, n);
  } else {
    out.Fc = std::move(w.F);
    out.Gc = std::move(w.G);
    out.Zc = std::move(w.Z);
  }
  finalize_outputs(out, j, cfg.want_uv, cfg.lanes);
  return out;
}

HZOutput hz_level2(const ComplexMatrix& f, const ComplexMatrix& g, const Signature& j, const HZConfig& cfg) {
  validate(cfg);
  require(cfg.variant != Variant::VP, "hz_level2: VP is the pointwise method");
  require(f.cols() == g.cols() && j.order() == f.rows(), "hz_level2: inconsistent shapes");
  const std::size_t n = f.cols();
  const std::size_t t = cfg.workers;
  const std::size_t nblocks = 2 * t;
  require(n > nblocks, "hz_level2: order must exceed twice the worker count");

  const auto width = block_widths(n, nblocks);
  std::vector<std::size_t> start(nblocks, 0);
  for (std::size_t b = 1; b < nblocks; ++b) start[b] = start[b - 1] + width[b - 1];
  const std::size_t w = width[0];
  const std::size_t mf = f.rows(), mg = g.rows();
  const Strategy outer = make_strategy(cfg.strategy, nblocks);
  const std::size_t inner_c_max = cfg.variant == Variant::BO ? 1 : cfg.c_max;

  // Inner orders are w + w, w + (w - 1) or 2 (w - 1), bordered to even.
  std::map<std::size_t, Strategy> inner;
  for (std::size_t a = 0; a < nblocks; ++a) {
    for (std::size_t b = a + 1; b < nblocks; ++b) {
      const std::size_t k = width[a] + width[b];
      const std::size_t ke = k + (k % 2);
      if (!inner.contains(ke)) inner.emplace(ke, make_strategy(cfg.inner_strategy, ke));
    }
  }

  struct Buffers {
    ComplexMatrix f, g, z, sf, sg, sz;
    std::size_t block_p = 0, block_q = 0;
  };
  std::vector<Buffers> buf(t);
  for (auto& b : buf) {
    b.f = ComplexMatrix(mf, 2 * w);
    b.g = ComplexMatrix(mg, 2 * w);
    b.z = ComplexMatrix(n, 2 * w);
    b.sf = ComplexMatrix(mf, 2 * w);
    b.sg = ComplexMatrix(mg, 2 * w);
    b.sz = ComplexMatrix(n, 2 * w);
  }
  std::vector<BlockSlot> loc(nblocks);
  const auto place = [&](const std::vector<IndexPair>& step) {
    for (std::size_t i = 0; i < t; ++i) {
      const auto [p, q] = step[i];
      buf[i].block_p = p;
      buf[i].block_q = q;
    }
  };
  const auto offset_of = [&](std::size_t worker, std::size_t block) {
    return block == buf[worker].block_p ? w - width[block] : w;
  };

  // Initial distribution straight from the inputs.
  const ComplexMatrix identity = ComplexMatrix::identity(n);
  place(outer.steps.front());
  for (std::size_t i = 0; i < t; ++i) {
    for (const std::size_t b : {buf[i].block_p, buf[i].block_q}) {
      const std::size_t off = offset_of(i, b);
      copy_into(f.columns(start[b], width[b]), buf[i].f.columns(off, width[b]));
      copy_into(g.columns(start[b], width[b]), buf[i].g.columns(off, width[b]));
      copy_into(identity.columns(start[b], width[b]), buf[i].z.columns(off, width[b]));
      loc[b] = {i, off};
    }
  }

  WorkerPool pool(t);
  std::vector<Counts> counts(t);
  std::vector<std::size_t> inner_sweeps(t, 0);
  HZOutput out;

  const auto process = [&](std::size_t i, std::size_t) {
    Buffers& bf = buf[i];
    const std::size_t wp = width[bf.block_p], wq = width[bf.block_q];
    const std::size_t k = wp + wq;
    const std::size_t off = w - wp;
    const MatrixView xf = bf.f.columns(off, k);
    const MatrixView xg = bf.g.columns(off, k);
    const MatrixView xz = bf.z.columns(off, k);

    ComplexMatrix jx = copy_of(xf);
    scale_rows_in_place(jx.view(), j);
    ComplexMatrix h(k, k);
    gemm(Op::Adjoint, Op::None, 1.0, xf, jx.view(), 0.0, h.view());
    make_hermitian(h);
    ComplexMatrix s = gram_matrix(xg);
    make_hermitian(s);

    HebpjResult fac = hebpj(h);
    if (fac.rank < k) {
      throw RankDeficient("block H is rank deficient (rank " + std::to_string(fac.rank) + " of " +
                          std::to_string(k) + "); retry with a different worker count");
    }
    ComplexMatrix r = pivoted_cholesky(s);

    const std::size_t ke = k + (k % 2);
    ComplexMatrix zi = ComplexMatrix::identity(ke);
    ComplexMatrix fi, gi;
    Signature ji;
    if (ke == k) {
      fi = std::move(fac.M);
      gi = std::move(r);
      ji = fac.J;
    } else {
      Bordered bd = border(fac.M, r, ComplexMatrix::identity(k), fac.J);
      fi = std::move(bd.F);
      gi = std::move(bd.G);
      ji = std::move(bd.J);
    }
    const Level1Run run = run_level1(fi.view(), gi.view(), zi.view(), ji, inner.at(ke), n, inner_c_max, cfg.eps,
                                     cfg.lanes, nullptr, false);
    counts[i].all += run.counts.all;
    counts[i].big += run.counts.big;
    inner_sweeps[i] += run.sweeps;

    if (run.counts.all == 0) {
      copy_into(xf, bf.sf.columns(off, k));
      copy_into(xg, bf.sg.columns(off, k));
      copy_into(xz, bf.sz.columns(off, k));
      return;
    }
    const ConstMatrixView zhat(zi.data(), k, k, zi.stride());
    gemm(Op::None, Op::None, 1.0, xf, zhat, 0.0, bf.sf.columns(off, k));
    gemm(Op::None, Op::None, 1.0, xg, zhat, 0.0, bf.sg.columns(off, k));
    gemm(Op::None, Op::None, 1.0, xz, zhat, 0.0, bf.sz.columns(off, k));
  };

  const std::size_t nsteps = outer.steps.size();
  while (out.sweeps < cfg.c_max) {
    std::size_t sweep_big = 0;
    for (std::size_t s = 0; s < nsteps; ++s) {
      std::fill(counts.begin(), counts.end(), Counts{});
      pool.for_each(t, process);
      for (const Counts& c : counts) {
        out.all_count += c.all;
        out.big_count += c.big;
        sweep_big += c.big;
      }
      // Move every block from the owner's shadow into the next owner's buffer.
      std::vector<BlockSlot> from = loc;
      place(outer.steps[(s + 1) % nsteps]);
      pool.for_each(t, [&](std::size_t i, std::size_t) {
        for (const std::size_t b : {buf[i].block_p, buf[i].block_q}) {
          const std::size_t off = offset_of(i, b);
          const Buffers& src = buf[from[b].worker];
          copy_into(src.sf.columns(from[b].offset, width[b]), buf[i].f.columns(off, width[b]));
          copy_into(src.sg.columns(from[b].offset, width[b]), buf[i].g.columns(off, width[b]));
          copy_into(src.sz.columns(from[b].offset, width[b]), buf[i].z.columns(off, width[b]));
        }
      });
      for (std::size_t i = 0; i < t; ++i) {
        for (const std::size_t b : {buf[i].block_p, buf[i].block_q}) loc[b] = {i, offset_of(i, b)};
      }
    }
    out.sweeps += 1;
    if (sweep_big == 0) {
      out.converged = true;
      break;
    }
  }
  for (const std::size_t s : inner_sweeps) out.inner_sweeps += s;

  out.Fc = ComplexMatrix(mf, n);
  out.Gc = ComplexMatrix(mg, n);
  out.Zc = ComplexMatrix(n, n);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const Buffers& src = buf[loc[b].worker];
    copy_into(src.f.columns(loc[b].offset, width[b]), out.Fc.columns(start[b], width[b]));
    copy_into(src.g.columns(loc[b].offset, width[b]), out.Gc.columns(start[b], width[b]));
    copy_into(src.z.columns(loc[b].offset, width[b]), out.Zc.columns(start[b], width[b]));
  }
  finalize_outputs(out, j, cfg.want_uv, cfg.lanes);
  return out;
}

HZOutput hz_solve(const ComplexMatrix& f, const ComplexMatrix& g, const Signature& j, const HZConfig& cfg) {
  if (cfg.variant == Variant::VP || f.cols() <= 2 * cfg.workers) return hz_level1(f, g, j, cfg);
  return hz_level2(f, g, j, cfg);
}

void finalize_outputs(HZOutput& out, const Signature& j, bool want_uv, Lanes lanes) {
  const std::size_t n = out.Fc.cols();
  require(out.Gc.cols() == n && out.Zc.cols() == n && j.order() == out.Fc.rows(),
          "finalize_outputs: inconsistent shapes");
  out.SigmaF.assign(n, 0.0);
  out.SigmaG.assign(n, 0.0);
  out.Sigma.assign(n, 0.0);
  out.Lambda.assign(n, 0.0);
  out.signs.assign(n, 1);
  std::vector<double> fraw(n), graw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = jnormsq(out.Fc.col(i), j, lanes);
    const double s = normsq(out.Gc.col(i), lanes);
    if (!(s > 0.0)) throw NumericalError("finalize_outputs: column " + std::to_string(i) + " of G is zero");
    fraw[i] = std::sqrt(std::abs(h));
    graw[i] = std::sqrt(s);
    out.signs[i] = h < 0.0 ? -1 : 1;
    out.Sigma[i] = std::hypot(fraw[i], graw[i]);
    out.SigmaF[i] = fraw[i] / out.Sigma[i];
    out.SigmaG[i] = graw[i] / out.Sigma[i];
    if (out.SigmaG[i] <= static_cast<double>(n) * std::numeric_limits<double>::epsilon()) {
      throw RankDeficient("finalize_outputs: infinite eigenvalue at column " + std::to_string(i) +
                          " (G is numerically rank deficient)");
    }
    const double ratio = out.SigmaF[i] / out.SigmaG[i];
    out.Lambda[i] = out.signs[i] * ratio * ratio;
  }
  out.Z = out.Zc;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : out.Z.col(i)) v /= out.Sigma[i];
  }
  if (!want_uv) return;
  out.U = out.Fc;
  out.V = out.Gc;
  for (std::size_t i = 0; i < n; ++i) {
    if (fraw[i] > 0.0) {
      for (auto& v : out.U.col(i)) v /= fraw[i];
    }
    for (auto& v : out.V.col(i)) v /= graw[i];
  }
}

}  // namespace ghsvd
