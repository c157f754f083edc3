#pragma once

#include <map>
#include <optional>

#include "holomera/lattice.hpp"
#include "holomera/statevector.hpp"

// Causal-cone contraction engine.  Reduced density matrices are descended
// from the core along the backward cone of the observable window; bulk flips
// swap v -> ṽ wherever the flipped coarse-grainer lies inside the represented
// windows, and cancel exactly everywhere else.

namespace holomera {

struct Win {
  std::int64_t start = 0;
  std::int64_t len = 0;
  bool operator==(const Win&) const = default;
  bool operator<(const Win& o) const {
    return start != o.start ? start < o.start : len < o.len;
  }
};

// Reorder qubits: new position perm[q] holds old qubit q.
inline Mat permute_qubits(const Mat& O, int nq, const std::vector<int>& perm) {
  const std::uint64_t dim = 1ull << nq;
  auto remap = [&](std::uint64_t b) {
    std::uint64_t r = 0;
    for (int q = 0; q < nq; ++q)
      r |= ((b >> q) & 1ull) << perm[static_cast<std::size_t>(q)];
    return r;
  };
  Mat out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t r = 0; r < dim; ++r)
    for (std::uint64_t c = 0; c < dim; ++c)
      out(static_cast<Eigen::Index>(remap(r)),
          static_cast<Eigen::Index>(remap(c))) =
          O(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

// Place a k-qubit operator with qubit i at position pos[i], identity
// elsewhere; positions need not be contiguous.
inline Mat embed_op_sites(const Mat& O, const std::vector<int>& pos,
                          int ktot) {
  const int k = static_cast<int>(pos.size());
  const std::uint64_t dim = 1ull << ktot;
  const std::uint64_t dk = 1ull << k;
  std::uint64_t mask = 0;
  for (int p : pos) mask |= 1ull << p;
  auto place = [&](std::uint64_t b) {
    std::uint64_t r = 0;
    for (int i = 0; i < k; ++i)
      r |= ((b >> i) & 1ull) << pos[static_cast<std::size_t>(i)];
    return r;
  };
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dim),
                      static_cast<Eigen::Index>(dim));
  for (std::uint64_t rest = 0; rest < dim; ++rest) {
    if (rest & mask) continue;
    for (std::uint64_t rb = 0; rb < dk; ++rb)
      for (std::uint64_t cb = 0; cb < dk; ++cb) {
        const cplx w =
            O(static_cast<Eigen::Index>(rb), static_cast<Eigen::Index>(cb));
        if (w == cplx(0.0, 0.0)) continue;
        out(static_cast<Eigen::Index>(rest | place(rb)),
            static_cast<Eigen::Index>(rest | place(cb))) = w;
      }
  }
  return out;
}

// One-step coarse causal cone of a contiguous window at a level with Lf
// sites: closure to whole disentangler pairs, then the covering
// coarse-grainer interval at Lf/2 sites.
inline Win coarse_cone_one(Win w, std::int64_t Lf) {
  const std::int64_t Lc = Lf / 2;
  if (w.len >= Lf - 1) return {0, Lc};
  std::int64_t start = w.start, len = w.len;
  if (start % 2 == 0) {  // extend to the pair (start-1, start)
    start = (start - 1 + Lf) % Lf;
    ++len;
  }
  if (len % 2 == 1) ++len;  // extend end to close its pair
  if (len >= Lf) return {0, Lc};
  const std::int64_t c0 = ((start - 1 + Lf) % Lf) / 2;
  const std::int64_t m = len / 2 + 1;
  if (m >= Lc) return {0, Lc};
  return {c0 % Lc, m};
}

// Merge overlapping windows (circular); disjoint windows stay separate —
// disentanglers between blocks act on traced-out legs only and cancel.
inline std::vector<Win> merge_windows(const std::vector<Win>& wins,
                                      std::int64_t L) {
  for (const auto& w : wins)
    if (w.len >= L) return {{0, L}};
  std::vector<char> cov(static_cast<std::size_t>(L), 0);
  for (const auto& w : wins)
    for (std::int64_t i = 0; i < w.len; ++i)
      cov[static_cast<std::size_t>((w.start + i) % L)] = 1;
  // Extract maximal covered runs, circularly.
  std::vector<Win> out;
  std::int64_t first_gap = -1;
  for (std::int64_t i = 0; i < L; ++i)
    if (!cov[static_cast<std::size_t>(i)]) {
      first_gap = i;
      break;
    }
  if (first_gap < 0) return {{0, L}};
  std::int64_t i = first_gap;
  for (std::int64_t step = 0; step < L;) {
    while (step < L && !cov[static_cast<std::size_t>(i % L)]) {
      ++i;
      ++step;
    }
    if (step >= L) break;
    const std::int64_t start = i % L;
    std::int64_t len = 0;
    while (step < L && cov[static_cast<std::size_t>(i % L)]) {
      ++i;
      ++step;
      ++len;
    }
    out.push_back({start, len});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {
inline bool contains(const Win& w, std::int64_t site, std::int64_t L) {
  return ((site - w.start + L) % L) < w.len;
}
}  // namespace detail

class Evaluator {
 public:
  Evaluator(const MeraNetwork& net, std::vector<BulkCoordinate> flips = {},
            std::shared_ptr<Evaluator> ground = {})
      : net_(&net), flips_(std::move(flips)), ground_(std::move(ground)) {
    for (std::size_t i = 0; i < flips_.size(); ++i) {
      net.check_coordinate(flips_[i]);
      for (std::size_t j = i + 1; j < flips_.size(); ++j)
        if (flips_[i] == flips_[j])
          throw ContractError("duplicate bulk-flip insertion");
    }
  }

  const MeraNetwork& net() const { return *net_; }
  const std::vector<BulkCoordinate>& flips() const { return flips_; }

  // Does any flip sit in the backward cone of (level, w)?
  bool affected(int level, Win w) const {
    if (flips_.empty()) return false;
    for (int lv = level; lv > 2; --lv) {
      const Win wc = coarse_cone_one(w, 1ll << lv);
      for (const auto& f : flips_)
        if (f.rho == lv - 1 &&
            detail::contains(wc, f.s, 1ll << (lv - 1)))
          return true;
      w = wc;
    }
    return false;
  }

  // Reduced density matrix of a contiguous window; qubit t of the result is
  // site (w.start + t) mod 2^level.
  const Mat& rdm(int level, Win w) {
    if (ground_ && !affected(level, w)) return ground_->rdm(level, w);
    const auto key = std::make_tuple(level, w.start, w.len);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Mat r = compute_rdm(level, {w})[0];
    return cache_.emplace(key, std::move(r)).first->second;
  }

  // Joint RDM of several disjoint windows; qubit order follows the window
  // list, each window in its own circular order.
  std::vector<Mat> joint_rdm(int level, const std::vector<Win>& wins) {
    return compute_rdm(level, wins, /*joint=*/true);
  }

  // <O> for a k-site operator at boundary sites (s0 .. s0+k-1 mod N).
  double expect_local(const Mat& O, int k, std::int64_t s0) {
    const std::int64_t N = net_->n_sites();
    const Mat& r = rdm(net_->D, {(s0 % N + N) % N, k});
    const cplx val = trace_prod(r, O);
    return std::real(val);
  }

  // Sum of <h_s> over all boundary sites (no prefactor).
  double sum_h() {
    const std::int64_t N = net_->n_sites();
    std::vector<double> vals(static_cast<std::size_t>(N));
    for (std::int64_t s = 0; s < N; ++s)
      vals[static_cast<std::size_t>(s)] =
          expect_local(local_term_op(), 3, s - 1);
    return pairwise_sum(vals);
  }

 private:
  // Descend RDMs to the target windows at `level`.  When joint is false the
  // single-window result is returned; multi-window targets share one block.
  std::vector<Mat> compute_rdm(int level, std::vector<Win> targets,
                               bool joint = false) {
    const std::int64_t L = 1ll << level;
    if (level == 2) {
      Mat full = net_->core * net_->core.adjoint();
      std::vector<Mat> out;
      if (joint && targets.size() > 1) {
        std::vector<int> keep;
        for (const auto& w : targets)
          for (std::int64_t i = 0; i < w.len; ++i)
            keep.push_back(static_cast<int>((w.start + i) % 4));
        out.push_back(ptrace(full, 4, keep));
        return out;
      }
      for (const auto& w : targets) {
        std::vector<int> keep;
        for (std::int64_t i = 0; i < w.len; ++i)
          keep.push_back(static_cast<int>((w.start + i) % 4));
        out.push_back(ptrace(full, 4, keep));
      }
      return out;
    }

    // Coarse cone (merged) of all targets.
    std::vector<Win> coarse;
    for (const auto& w : targets) coarse.push_back(coarse_cone_one(w, L));
    coarse = merge_windows(coarse, L / 2);

    Mat rho;
    if (coarse.size() == 1) {
      rho = affected_or_cached(level - 1, coarse[0]);
    } else {
      rho = compute_rdm(level - 1, coarse, /*joint=*/true)[0];
    }

    // Expand every coarse site through its isometry (in reverse position
    // order so earlier positions stay valid).
    const int lc = level - 1;
    const std::int64_t Lc = L / 2;
    std::vector<std::int64_t> csites;
    for (const auto& wc : coarse)
      for (std::int64_t i = 0; i < wc.len; ++i)
        csites.push_back((wc.start + i) % Lc);
    int nq = static_cast<int>(csites.size());
    for (int t = nq - 1; t >= 0; --t) {
      const std::int64_t c = csites[static_cast<std::size_t>(t)];
      bool fl = false;
      for (const auto& f : flips_)
        if (f.rho == lc && f.s == c) fl = true;
      rho = expand_site(rho, nq + (nq - 1 - t), t, net_->iso_at(lc, c, fl));
    }
    nq *= 2;

    // Disentanglers fully inside the expanded block.  Fine qubit positions:
    // coarse position t -> fine positions (2t, 2t+1) holding sites
    // (2c_t, 2c_t+1).
    {
      std::size_t base = 0;
      for (const auto& wc : coarse) {
        const std::int64_t m = wc.len;
        const bool full = (m == Lc);
        for (std::int64_t q = 1; q + 1 < 2 * m; q += 2) {
          const std::int64_t j = (wc.start + (q - 1) / 2) % Lc;
          conjugate_gate(rho, nq, static_cast<int>(2 * base + q),
                         static_cast<int>(2 * base + q + 1),
                         net_->u_at(lc, j));
        }
        if (full) {  // wrap-around pair
          const std::int64_t j = (wc.start + m - 1) % Lc;
          conjugate_gate(rho, nq, static_cast<int>(2 * base + 2 * m - 1),
                         static_cast<int>(2 * base), net_->u_at(lc, j));
        }
        base += static_cast<std::size_t>(m);
      }
    }

    // Trace to the requested fine windows.
    auto local_pos = [&](std::int64_t site) -> int {
      std::size_t base = 0;
      for (const auto& wc : coarse) {
        const std::int64_t fstart = (2 * wc.start) % L;
        const std::int64_t flen = 2 * wc.len;
        const std::int64_t off = (site - fstart + L) % L;
        if (off < flen) return static_cast<int>(2 * base + off);
        base += static_cast<std::size_t>(wc.len);
      }
      throw ContractError("target site escaped its causal cone");
    };

    std::vector<Mat> out;
    if (joint && targets.size() > 1) {
      std::vector<int> keep;
      for (const auto& w : targets)
        for (std::int64_t i = 0; i < w.len; ++i)
          keep.push_back(local_pos((w.start + i) % L));
      out.push_back(ptrace(rho, nq, keep));
      return out;
    }
    for (const auto& w : targets) {
      std::vector<int> keep;
      for (std::int64_t i = 0; i < w.len; ++i)
        keep.push_back(local_pos((w.start + i) % L));
      out.push_back(ptrace(rho, nq, keep));
    }
    return out;
  }

  const Mat& affected_or_cached(int level, Win w) { return rdm(level, w); }

  const MeraNetwork* net_;
  std::vector<BulkCoordinate> flips_;
  std::shared_ptr<Evaluator> ground_;
  std::map<std::tuple<int, std::int64_t, std::int64_t>, Mat> cache_;
};

// ---------------------------------------------------------------------------
// Positioned operator ascension (exact adjoint of the descent).

struct PosOp {
  Mat op;
  Win win;
};

inline PosOp ascend_window_once(const MeraNetwork& net, int lf, PosOp o) {
  const std::int64_t Lf = 1ll << lf;
  const std::int64_t Lc = Lf / 2;
  const int lc = lf - 1;

  if (o.win.len >= Lf) {  // whole-level operator
    if (o.win.start != 0) {
      std::vector<int> perm(static_cast<std::size_t>(Lf));
      for (std::int64_t q = 0; q < Lf; ++q)
        perm[static_cast<std::size_t>(q)] =
            static_cast<int>((q + o.win.start) % Lf);
      o.op = permute_qubits(o.op, static_cast<int>(Lf), perm);
      o.win.start = 0;
    }
    for (std::int64_t j = 0; j < Lc; ++j)
      sandwich_gate(o.op, static_cast<int>(Lf), static_cast<int>(2 * j + 1),
                    static_cast<int>((2 * j + 2) % Lf), net.u_at(lc, j));
    for (std::int64_t c = 0; c < Lc; ++c)
      o.op = contract_site(o.op, static_cast<int>(Lf - c), static_cast<int>(c),
                           net.iso_at(lc, c, false));
    return {std::move(o.op), {0, Lc}};
  }

  std::int64_t start = o.win.start, len = o.win.len;
  int k = static_cast<int>(len);
  // Closure to whole disentangler pairs (pairs are (odd, even)).
  if (start % 2 == 0) {
    o.op = embed_op(o.op, k, 1, k + 1);
    start = (start - 1 + Lf) % Lf;
    ++len;
    ++k;
  }
  if (len % 2 == 1) {
    o.op = embed_op(o.op, k, 0, k + 1);
    ++len;
    ++k;
  }
  if (len >= Lf) return ascend_window_once(net, lf, {o.op, {start, Lf}});

  for (std::int64_t q = 0; q + 1 < len; q += 2) {
    const std::int64_t j = (((start + q) - 1 + Lf) % Lf) / 2;
    sandwich_gate(o.op, k, static_cast<int>(q), static_cast<int>(q + 1),
                  net.u_at(lc, j % Lc));
  }

  // Pad to the covering coarse-grainer interval and contract.
  o.op = embed_op(o.op, k, 1, k + 2);
  k += 2;
  const std::int64_t c0 = (((start - 1 + Lf) % Lf) / 2) % Lc;
  const std::int64_t m = len / 2 + 1;
  for (std::int64_t c = 0; c < m; ++c)
    o.op = contract_site(o.op, k - static_cast<int>(c), static_cast<int>(c),
                         net.iso_at(lc, (c0 + c) % Lc, false));
  return {std::move(o.op), {c0, m}};
}

// Ascend a k-site boundary operator all the way to a 4-site core operator.
inline Mat ascend_to_core(const MeraNetwork& net, const Mat& O, int k,
                          std::int64_t s0) {
  const std::int64_t N = net.n_sites();
  PosOp cur{O, {(s0 % N + N) % N, k}};
  for (int lf = net.D; lf > 2; --lf) cur = ascend_window_once(net, lf, cur);
  if (cur.win.len == 4) {
    if (cur.win.start != 0) {
      std::vector<int> perm(4);
      for (int q = 0; q < 4; ++q)
        perm[static_cast<std::size_t>(q)] =
            static_cast<int>((q + cur.win.start) % 4);
      cur.op = permute_qubits(cur.op, 4, perm);
    }
    return cur.op;
  }
  std::vector<int> pos;
  for (std::int64_t i = 0; i < cur.win.len; ++i)
    pos.push_back(static_cast<int>((cur.win.start + i) % 4));
  return embed_op_sites(cur.op, pos, 4);
}

// Effective 16x16 core Hamiltonian: every h_s ascended along its own path.
inline Mat core_hamiltonian(const MeraNetwork& net) {
  Mat heff = Mat::Zero(16, 16);
  const std::int64_t N = net.n_sites();
  for (std::int64_t s = 0; s < N; ++s)
    heff += ascend_to_core(net, local_term_op(), 3, s - 1);
  const double herm = (heff - Mat(heff.adjoint())).norm();
  if (herm > 1e-10)
    throw SolverError("effective core Hamiltonian lost Hermiticity");
  return heff;
}

// Lowest eigenvector; degenerate ground spaces resolve to the Z2-even sector.
inline Vec optimize_core(const MeraNetwork& net) {
  const Mat heff = core_hamiltonian(net);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (heff + Mat(heff.adjoint())));
  const auto& evals = es.eigenvalues();
  int deg = 1;
  while (deg < 16 && evals(deg) - evals(0) < 1e-10 * std::max(1.0, std::abs(evals(0))))
    ++deg;
  if (deg == 1) return es.eigenvectors().col(0);
  // Project Z^⊗4 onto the degenerate block and pick the +1 sector.
  const Mat Z4 = pauli_string({3, 3, 3, 3});
  Mat block = es.eigenvectors().leftCols(deg);
  Mat zblk = block.adjoint() * Z4 * block;
  Eigen::SelfAdjointEigenSolver<Mat> zs(0.5 * (zblk + Mat(zblk.adjoint())));
  return block * zs.eigenvectors().col(deg - 1);  // largest eigenvalue ~ +1
}

inline MeraNetwork build_network(int D, const GateSet& gates) {
  if (D < 2) throw ParameterError("network depth must be >= 2");
  MeraNetwork net;
  net.D = D;
  net.gates = gates;
  net.core = Vec::Zero(16);
  net.core(0) = 1.0;
  net.core = optimize_core(net);
  net.core.normalize();
  return net;
}

// ---------------------------------------------------------------------------
// Public expectation entry points.

inline double ground_energy(const MeraNetwork& net) {
  Evaluator ev(net);
  return ChainHamiltonian(net.n_sites()).prefactor() * ev.sum_h();
}

// <Psi_flips| obs |Psi_flips> for a Hermitian k-site boundary operator.
inline double expectation(const MeraNetwork& net,
                          const std::vector<BulkCoordinate>& flips,
                          const Mat& obs, int k, std::int64_t s0) {
  if ((obs - Mat(obs.adjoint())).norm() > 1e-10)
    throw ContractError("observable must be Hermitian");
  if (k > 6) throw CapacityError("boundary operators capped at 6 sites");
  Evaluator ev(net, flips);
  return ev.expect_local(obs, k, s0);
}

// Connected correlator <A B> - <A><B> with A at s0=a0, B at a0+r.
inline double two_point(const MeraNetwork& net, const Mat& A, int ka,
                        const Mat& B, int kb, std::int64_t r,
                        std::int64_t a0 = 0) {
  if (r < 1) throw ParameterError("separation must be >= 1");
  const std::int64_t N = net.n_sites();
  Evaluator ev(net);
  const double ea = ev.expect_local(A, ka, a0);
  const double eb = ev.expect_local(B, kb, a0 + r);
  double eab;
  if (r < ka) {  // overlapping supports: single-window operator product
    const int k = static_cast<int>(r) + kb;
    const Mat AB = embed_op(A, ka, 0, k) * embed_op(B, kb, static_cast<int>(r), k);
    const Mat sym = 0.5 * (AB + Mat(AB.adjoint()));
    eab = ev.expect_local(sym, k, a0);
  } else {
    const Win wa{(a0 % N + N) % N, ka};
    const Win wb{((a0 + r) % N + N) % N, kb};
    Mat rho = ev.joint_rdm(net.D, {wa, wb})[0];
    eab = std::real(trace_prod(rho, kron(B, A)));
  }
  return eab - ea * eb;
}

}  // namespace holomera
