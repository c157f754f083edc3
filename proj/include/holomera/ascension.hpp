#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "holomera/engine.hpp"

namespace holomera {

// k-site ascension superoperators A^[k,j], j = 0..k-2.  Even j: the fine
// window starts on the first leg of a disentangler (odd site); the coarse
// output of m sites is embedded at offset j/2 in the k-site output window.
// Odd j: the fine window starts one site later (even site), offset (j-1)/2.
// Selective averages run over one parity class; "averaged" runs over all j.
enum class AscVariant { single, averaged, even_selective, odd_selective };

inline const char* variant_name(AscVariant v) {
  switch (v) {
    case AscVariant::single: return "single";
    case AscVariant::averaged: return "averaged";
    case AscVariant::even_selective: return "even";
    default: return "odd";
  }
}

struct Superoperator {
  int k = 0;
  AscVariant variant = AscVariant::averaged;
  int j = -1;  // set for variant == single
  Mat matrix;  // 4^k x 4^k, acts on column-major vec of a k-site operator
};

inline Vec vec_op(const Mat& O) {
  return Eigen::Map<const Vec>(O.data(), O.size());
}

inline Mat unvec_op(const Vec& v, int k) {
  const Eigen::Index d = Eigen::Index(1) << k;
  return Eigen::Map<const Mat>(v.data(), d, d);
}

inline std::vector<int> variant_j_list(int k, AscVariant v, int j) {
  if (k < 3 || k > 6) throw CapacityError("superoperator support size k not in [3,6]");
  std::vector<int> js;
  switch (v) {
    case AscVariant::single:
      if (j < 0 || j > k - 2) throw IndexError("superoperator index j not in [0,k-2]");
      js = {j};
      break;
    case AscVariant::averaged:
      for (int x = 0; x <= k - 2; ++x) js.push_back(x);
      break;
    case AscVariant::even_selective:
      for (int x = 0; x <= k - 2; x += 2) js.push_back(x);
      break;
    case AscVariant::odd_selective:
      for (int x = 1; x <= k - 2; x += 2) js.push_back(x);
      break;
  }
  return js;
}

// One application of A^[k,j] to a k-site operator, realized on a uniform
// network level wide enough that no window wraps.
inline Mat apply_single_ascension(const MeraNetwork& net, int lf, int k, int j,
                                  const Mat& O) {
  const std::int64_t Lf = 1ll << lf;
  const std::int64_t s0 = (j % 2 == 0) ? Lf / 2 + 1 : Lf / 2 + 2;
  const int delta = j / 2;
  PosOp res = ascend_window_once(net, lf, {O, {s0, k}});
  const int m = static_cast<int>(res.win.len);
  if (delta > k - m)
    throw IndexError("superoperator placement exceeds coarse window");
  return embed_op(res.op, m, delta, k);
}

inline std::uint64_t gate_hash(const GateSet& g) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const Mat& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      double parts[2] = {m.data()[i].real(), m.data()[i].imag()};
      const unsigned char* b = reinterpret_cast<const unsigned char*>(parts);
      for (std::size_t t = 0; t < sizeof(parts); ++t) {
        h ^= b[t];
        h *= 1099511628211ull;
      }
    }
  };
  mix(g.w);
  mix(g.u);
  return h;
}

inline bool load_matrix_cache(const std::string& path, Mat& m) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return false;
  std::uint64_t rows = 0, cols = 0;
  bool ok = std::fread(&rows, sizeof(rows), 1, f) == 1 &&
            std::fread(&cols, sizeof(cols), 1, f) == 1;
  if (ok) {
    m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    ok = std::fread(m.data(), sizeof(cplx), m.size(), f) ==
         static_cast<std::size_t>(m.size());
  }
  std::fclose(f);
  return ok;
}

inline void store_matrix_cache(const std::string& path, const Mat& m) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) return;
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  std::fwrite(&rows, sizeof(rows), 1, f);
  std::fwrite(&cols, sizeof(cols), 1, f);
  std::fwrite(m.data(), sizeof(cplx), m.size(), f);
  std::fclose(f);
}

inline Superoperator build_superoperator(int k, AscVariant v, const GateSet& g,
                                         int j = -1) {
  const std::vector<int> js = variant_j_list(k, v, j);

  std::string cache_path;
  if (const char* dir = std::getenv("HOLOMERA_CACHE")) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s/superop_k%d_%s_j%d_%016llx.bin", dir, k,
                  variant_name(v), j, (unsigned long long)gate_hash(g));
    cache_path = buf;
    Superoperator s{k, v, j, Mat()};
    if (load_matrix_cache(cache_path, s.matrix)) return s;
  }

  const int lf = 5;  // 32 fine sites: no wraparound for k <= 6 plus padding
  MeraNetwork net = build_network(lf, g);
  const Eigen::Index dim = Eigen::Index(1) << k;
  const Eigen::Index sdim = dim * dim;
  Superoperator s{k, v, j, Mat::Zero(sdim, sdim)};
  const double wgt = 1.0 / static_cast<double>(js.size());
  Mat E = Mat::Zero(dim, dim);
  for (Eigen::Index i = 0; i < sdim; ++i) {
    const Eigen::Index r = i % dim, c = i / dim;
    E(r, c) = 1.0;
    for (int jj : js) {
      const Mat out = apply_single_ascension(net, lf, k, jj, E);
      s.matrix.col(i) += wgt * vec_op(out);
    }
    E(r, c) = 0.0;
  }
  if (!cache_path.empty()) store_matrix_cache(cache_path, s.matrix);
  return s;
}

struct ScalingEntry {
  cplx lambda;
  double delta = 0.0;
  int charge = 1;
  std::string label;  // "1", "sigma", "eps", "T", "Tbar", "deps", "dbareps"
};

struct ScalingSpectrum {
  int k = 0;
  AscVariant variant = AscVariant::averaged;
  std::vector<ScalingEntry> entries;  // sorted by ascending delta
  Mat right_mat;                      // columns: vec(phi_a^R)
  Mat left_mat;                       // rows: functionals tr(phi_a^L . )
  std::vector<std::string> warnings;

  Mat right(std::size_t a) const {
    return unvec_op(right_mat.col(static_cast<Eigen::Index>(a)), k);
  }
  Mat left(std::size_t a) const {
    Vec row = left_mat.row(static_cast<Eigen::Index>(a)).transpose();
    return unvec_op(row, k).transpose();
  }
  std::size_t index_of(const std::string& label) const {
    for (std::size_t a = 0; a < entries.size(); ++a)
      if (entries[a].label == label) return a;
    throw ParameterError("no spectrum entry labeled " + label);
  }
  std::vector<std::size_t> group(double delta, double tol = 0.1) const {
    std::vector<std::size_t> g;
    for (std::size_t a = 0; a < entries.size(); ++a)
      if (std::abs(entries[a].delta - delta) < tol) g.push_back(a);
    return g;
  }
};

namespace detail {

inline void zgeev_full(Mat a, Vec& vals, Mat& vecs) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  vals.resize(n);
  vecs.resize(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, vals.data(),
                    nullptr, 1, vecs.data(), n);
  if (info != 0)
    throw SolverError("zgeev failed with info " + std::to_string(info));
}

}  // namespace detail

inline ScalingSpectrum eigendecompose(const Superoperator& s) {
  const int k = s.k;
  const Eigen::Index dim = Eigen::Index(1) << k;
  const Eigen::Index sdim = dim * dim;

  // The superoperator is block diagonal in the Z2 charge of the basis
  // operator; diagonalize per charge sector so charges come out exact.
  std::vector<Eigen::Index> idx[2];
  for (Eigen::Index i = 0; i < sdim; ++i) {
    const Eigen::Index r = i % dim, c = i / dim;
    const int q = (std::popcount(static_cast<std::uint64_t>(r)) +
                   std::popcount(static_cast<std::uint64_t>(c))) %
                  2;
    idx[q].push_back(i);
  }

  ScalingSpectrum spec;
  spec.k = k;
  spec.variant = s.variant;

  struct Raw {
    cplx lambda;
    int charge;
    Vec vec;
  };
  std::vector<Raw> raw;
  raw.reserve(static_cast<std::size_t>(sdim));
  for (int q = 0; q < 2; ++q) {
    const Eigen::Index n = static_cast<Eigen::Index>(idx[q].size());
    Mat block(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        block(a, b) = s.matrix(idx[q][static_cast<std::size_t>(a)],
                               idx[q][static_cast<std::size_t>(b)]);
    Vec vals;
    Mat vecs;
    detail::zgeev_full(std::move(block), vals, vecs);
    for (Eigen::Index a = 0; a < n; ++a) {
      Vec full = Vec::Zero(sdim);
      for (Eigen::Index b = 0; b < n; ++b)
        full(idx[q][static_cast<std::size_t>(b)]) = vecs(b, a);
      raw.push_back({vals(a), q == 0 ? 1 : -1, std::move(full)});
    }
  }

  auto mag_delta = [](const cplx& l) {
    const double m = std::abs(l);
    return m < 1e-14 ? std::numeric_limits<double>::infinity()
                     : -std::log2(m);
  };
  std::vector<std::size_t> order(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mag_delta(raw[a].lambda) < mag_delta(raw[b].lambda);
  });

  spec.right_mat.resize(sdim, sdim);
  spec.entries.resize(raw.size());
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Raw& r = raw[order[a]];
    spec.entries[a] = {r.lambda, mag_delta(r.lambda), r.charge, ""};
    spec.right_mat.col(static_cast<Eigen::Index>(a)) = r.vec.normalized();
  }

  // Fix the leading eigenoperator to be exactly the identity.
  const Vec vid = vec_op(Mat::Identity(dim, dim));
  Vec lead = spec.right_mat.col(0);
  const cplx ov = vid.dot(lead) / vid.norm();
  if (std::abs(std::abs(ov) - 1.0) > 1e-6) {
    spec.warnings.push_back("leading eigenoperator is not the identity");
  } else {
    spec.right_mat.col(0) = vid;
    spec.entries[0].label = "1";
  }

  Eigen::PartialPivLU<Mat> lu(spec.right_mat);
  spec.left_mat = lu.inverse();

  // Spot-check invertibility; a defective eigenbasis shows up here.
  double resid = 0.0;
  for (Eigen::Index t = 0; t < std::min<Eigen::Index>(8, sdim); ++t) {
    const Eigen::Index c = (t * 2654435761u) % sdim;
    resid = std::max(resid, (spec.left_mat * spec.right_mat.col(c) -
                             Vec::Unit(sdim, c))
                                .cwiseAbs()
                                .maxCoeff());
  }
  if (resid > 1e-6) {
    std::string w = "near-defective eigenbasis, residual " +
                    std::to_string(resid) + "; eigenvalue cluster:";
    for (std::size_t a = 1; a < spec.entries.size() && a < 24; ++a)
      if (std::abs(spec.entries[a].lambda - spec.entries[a - 1].lambda) < 1e-6)
        w += " " + std::to_string(spec.entries[a].lambda.real());
    spec.warnings.push_back(w);
  }
  return spec;
}

inline Mat conformal_project(const Mat& op, double delta,
                             const ScalingSpectrum& spec, double tol = 0.1) {
  const std::vector<std::size_t> g = spec.group(delta, tol);
  if (g.empty())
    throw ParameterError("no scaling operators at dimension " +
                         std::to_string(delta));
  const Vec v = vec_op(op);
  Vec out = Vec::Zero(v.size());
  for (std::size_t a : g)
    out += spec.right_mat.col(static_cast<Eigen::Index>(a)) *
           (spec.left_mat.row(static_cast<Eigen::Index>(a)) * v);
  return unvec_op(out, spec.k);
}

// Local term embedded centrally in a k-site frame (k odd).
inline Mat h_frame(int k) {
  return embed_op(local_term_op(), 3, (k - 3) / 2, k);
}

// Hologron conjugation operator: X on the ancilla leg pushed through its
// coarse-grainer and the two flanking disentanglers.  4-site, first site on
// the first leg of a disentangler.
inline Mat xtilde_op(const GateSet& g) {
  const Mat M = g.w * op2(pauli_I(), pauli_X()) * g.w.adjoint();
  const Mat U = kron(g.u, g.u);
  return U * embed_op(M, 2, 1, 4) * U.adjoint();
}

// Label the primaries and resolve the degenerate Delta = 2 group into
// {T, Tbar, d_eps, dbar_eps} via Koo-Saleur trials and discrete-derivative
// descendant trials, each conformally projected.  spec3 supplies the 3-site
// epsilon eigenoperator used to build the descendant trials.
inline void label_operators(ScalingSpectrum& spec,
                            const ScalingSpectrum& spec3) {
  const int k = spec.k;
  if (k != 5) throw CapacityError("operator labeling requires the 5-site frame");
  const Eigen::Index dim = Eigen::Index(1) << k;

  // Primaries: unique dimensions.
  for (std::size_t a = 0; a < spec.entries.size(); ++a) {
    ScalingEntry& e = spec.entries[a];
    if (!e.label.empty()) continue;
    if (std::abs(e.delta - 0.125) < 0.05 && e.charge == -1) e.label = "sigma";
    if (std::abs(e.delta - 1.0) < 0.05 && e.charge == 1) e.label = "eps";
  }

  std::vector<std::size_t> g2 = spec.group(2.0);
  if (g2.size() < 4)
    throw SolverError("Delta=2 multiplicity below 4; cannot label descendants");

  // Koo-Saleur stress tensor trials (v = 1).
  const Mat h = h_frame(k);
  const Mat p = (k == 5) ? momentum_density_op()
                         : embed_op(momentum_density_op(), 5, (k - 5) / 2, k);
  Mat trials[4];
  trials[0] = 0.5 * (h + p);
  trials[1] = 0.5 * (h - p);

  // Derivative descendants of epsilon from the 3-site epsilon eigenoperator
  // placed at neighboring offsets; d_t from the frame-restricted Hamiltonian.
  std::size_t e3 = spec3.entries.size();
  for (std::size_t a = 0; a < spec3.entries.size(); ++a)
    if (std::abs(spec3.entries[a].delta - 1.0) < 0.05 &&
        spec3.entries[a].charge == 1) {
      e3 = a;
      break;
    }
  if (e3 == spec3.entries.size())
    throw SolverError("3-site spectrum lacks an epsilon eigenoperator");
  Mat eps3 = spec3.right(e3);
  // Realness gauge: epsilon is Hermitian up to phase; rotate it real.
  cplx ph = eps3.trace();
  if (std::abs(ph) < 1e-8) {
    Eigen::Index rmax = 0, cmax = 0;
    eps3.cwiseAbs().maxCoeff(&rmax, &cmax);
    ph = eps3(rmax, cmax);
  }
  eps3 *= std::abs(ph) / ph;
  const int off = (k - 3) / 2;
  const Mat eps_a = embed_op(eps3, 3, off, k);
  const Mat eps_b = embed_op(eps3, 3, off + 1, k);
  Mat hloc = Mat::Zero(dim, dim);
  for (int o = 0; o + 3 <= k; ++o) hloc += embed_op(local_term_op(), 3, o, k);
  const cplx im(0.0, 1.0);
  const Mat dx = eps_b - eps_a;
  const Mat dt = im * (hloc * eps_a - eps_a * hloc);
  trials[2] = dx + dt;
  trials[3] = dx - dt;

  const char* names[4] = {"T", "Tbar", "deps", "dbareps"};
  Mat cols(dim * dim, 4);
  for (int t = 0; t < 4; ++t) {
    Mat proj = conformal_project(trials[t], 2.0, spec);
    const double n = proj.norm();
    if (n < 1e-10)
      throw SolverError("Delta=2 trial projection vanished; labeling failed");
    cols.col(t) = vec_op(proj) / n;
  }

  // Replace the Delta = 2 eigenvector columns by the labeled basis, keeping
  // any excess group members orthogonalized against it.
  Mat basis = cols;
  std::size_t fill = 4;
  for (std::size_t a : g2) {
    if (fill >= g2.size()) break;
    Vec orig = spec.right_mat.col(static_cast<Eigen::Index>(a));
    Vec r = orig - basis * basis.colPivHouseholderQr().solve(orig);
    if (r.norm() > 1e-6) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = r.normalized();
      ++fill;
    }
  }
  if (static_cast<std::size_t>(basis.cols()) != g2.size())
    throw SolverError("Delta=2 group could not be re-spanned by labeled basis");
  for (std::size_t t = 0; t < g2.size(); ++t) {
    spec.right_mat.col(static_cast<Eigen::Index>(g2[t])) =
        basis.col(static_cast<Eigen::Index>(t));
    spec.entries[g2[t]].label = t < 4 ? names[t] : "";
    spec.entries[g2[t]].charge = 1;
  }
  Eigen::PartialPivLU<Mat> lu(spec.right_mat);
  spec.left_mat = lu.inverse();
}

struct CoefficientTable {
  double c_T = 0.0;
  double c_Tbar = 0.0;
  double eps_gs = 0.0;     // tr(phi_1^L h): fixed-point energy density
  double mc2_half = 0.0;   // analytic single-hologron mass energy
  std::vector<std::pair<std::string, double>> C_alpha;
  std::vector<std::pair<double, double>> C_delta;  // (Delta, summed C)
};

// Offset of the 4-site hologron conjugation inside the k-site frame. The
// conjugation support starts one site left of the coarse-grainer output pair
// (statevector-verified), which is the frame's low edge in the odd-start
// convention; both hologrons sit at the same angular position, so the same
// offset is used for every conjugation factor.
inline constexpr int xtilde_frame_offset = 0;

inline CoefficientTable coefficient_table(const ScalingSpectrum& spec,
                                          const GateSet& g,
                                          int xoff = xtilde_frame_offset) {
  const int k = spec.k;
  for (const char* need : {"1", "eps", "T", "Tbar", "deps", "dbareps"})
    spec.index_of(need);  // throws if labeling has not been run

  const Mat X = embed_op(xtilde_op(g), 4, xoff, k);
  const Mat h = h_frame(k);
  const std::size_t i1 = spec.index_of("1");
  const Mat phi1L = spec.left(i1);
  const std::size_t iT = spec.index_of("T");
  const std::size_t iTb = spec.index_of("Tbar");
  const Mat phiTT = spec.right(iT) + spec.right(iTb);

  CoefficientTable t;
  t.c_T = std::real(trace_prod(spec.left(iT), h));
  t.c_Tbar = std::real(trace_prod(spec.left(iTb), h));
  t.eps_gs = std::real(trace_prod(phi1L, h));
  const double ctt = 0.5 * (t.c_T + t.c_Tbar);
  t.mc2_half = ctt / pi * std::real(trace_prod(phi1L, X * phiTT * X));

  const char* alphas[5] = {"eps", "T", "Tbar", "deps", "dbareps"};
  double c2sum = 0.0;
  for (const char* a : alphas) {
    const std::size_t ia = spec.index_of(a);
    double f1 = std::real(trace_prod(spec.left(ia), X * phiTT * X));
    if (ia == iT || ia == iTb) f1 -= 1.0;
    const double f2 = std::real(trace_prod(phi1L, X * spec.right(ia) * X));
    const double C = ctt / pi * f1 * f2;
    t.C_alpha.emplace_back(a, C);
    if (std::string(a) != "eps") c2sum += C;
  }
  t.C_delta.emplace_back(1.0, t.C_alpha.front().second);
  t.C_delta.emplace_back(2.0, c2sum);
  return t;
}

inline Mat ascend_iterated(const Mat& op, int steps, const Superoperator& s) {
  Vec v = vec_op(op);
  for (int n = 0; n < steps; ++n) v = s.matrix * v;
  return unvec_op(v, s.k);
}

}  // namespace holomera
