#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "holomera/common.hpp"
#include "holomera/tensor.hpp"

// Dense little-endian qubit kit: states, operators and reduced density
// matrices are Eigen arrays indexed so that site/qubit t is bit t.  Two-qubit
// gates are 4x4 with index (b_first + 2*b_second); isometries are 4x2.

namespace holomera {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// Two-qubit operator A on the first (low-bit) leg, B on the second.
inline Mat op2(const Mat& first, const Mat& second) {
  return kron(second, first);
}

inline const Mat& pauli(int i) {
  static const Mat mats[4] = {
      (Mat(2, 2) << 1, 0, 0, 1).finished(),
      (Mat(2, 2) << 0, 1, 1, 0).finished(),
      (Mat(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
      (Mat(2, 2) << 1, 0, 0, -1).finished()};
  return mats[i];
}
inline const Mat& pauli_I() { return pauli(0); }
inline const Mat& pauli_X() { return pauli(1); }
inline const Mat& pauli_Y() { return pauli(2); }
inline const Mat& pauli_Z() { return pauli(3); }

// codes[t] in {0,1,2,3} acts on qubit t.
inline Mat pauli_string(const std::vector<int>& codes) {
  Mat r = pauli(codes[0]);
  for (std::size_t t = 1; t < codes.size(); ++t) r = kron(pauli(codes[t]), r);
  return r;
}

// In-place 2-qubit gate on a contiguous amplitude array of 2^nq entries.
inline void apply_gate_inplace(cplx* v, int nq, int q1, int q2, const Mat& G) {
  const std::uint64_t dim = 1ull << nq;
  const std::uint64_t m1 = 1ull << q1, m2 = 1ull << q2;
  cplx g[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g[r][c] = G(r, c);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & (m1 | m2)) continue;
    const std::uint64_t i0 = i, i1 = i | m1, i2 = i | m2, i3 = i | m1 | m2;
    const cplx a0 = v[i0], a1 = v[i1], a2 = v[i2], a3 = v[i3];
    v[i0] = g[0][0] * a0 + g[0][1] * a1 + g[0][2] * a2 + g[0][3] * a3;
    v[i1] = g[1][0] * a0 + g[1][1] * a1 + g[1][2] * a2 + g[1][3] * a3;
    v[i2] = g[2][0] * a0 + g[2][1] * a1 + g[2][2] * a2 + g[2][3] * a3;
    v[i3] = g[3][0] * a0 + g[3][1] * a1 + g[3][2] * a2 + g[3][3] * a3;
  }
}

inline void apply_gate_state(Vec& psi, int nq, int q1, int q2, const Mat& G) {
  apply_gate_inplace(psi.data(), nq, q1, q2, G);
}

// M <- (G on row qubits q1,q2) * M
inline void left_mul_gate(Mat& M, int nq_rows, int q1, int q2, const Mat& G) {
  for (Eigen::Index c = 0; c < M.cols(); ++c)
    apply_gate_inplace(M.col(c).data(), nq_rows, q1, q2, G);
}

// M <- M * (G on column qubits q1,q2)
inline void right_mul_gate(Mat& M, int nq_cols, int q1, int q2, const Mat& G) {
  const std::uint64_t dim = 1ull << nq_cols;
  const std::uint64_t m1 = 1ull << q1, m2 = 1ull << q2;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & (m1 | m2)) continue;
    const Eigen::Index c0 = static_cast<Eigen::Index>(i);
    const Eigen::Index c1 = static_cast<Eigen::Index>(i | m1);
    const Eigen::Index c2 = static_cast<Eigen::Index>(i | m2);
    const Eigen::Index c3 = static_cast<Eigen::Index>(i | m1 | m2);
    Vec a0 = M.col(c0), a1 = M.col(c1), a2 = M.col(c2), a3 = M.col(c3);
    M.col(c0) = a0 * G(0, 0) + a1 * G(1, 0) + a2 * G(2, 0) + a3 * G(3, 0);
    M.col(c1) = a0 * G(0, 1) + a1 * G(1, 1) + a2 * G(2, 1) + a3 * G(3, 1);
    M.col(c2) = a0 * G(0, 2) + a1 * G(1, 2) + a2 * G(2, 2) + a3 * G(3, 2);
    M.col(c3) = a0 * G(0, 3) + a1 * G(1, 3) + a2 * G(2, 3) + a3 * G(3, 3);
  }
}

// rho -> conjugation by a 2-qubit gate: G rho G†  (density-matrix direction)
inline void conjugate_gate(Mat& rho, int nq, int q1, int q2, const Mat& G) {
  left_mul_gate(rho, nq, q1, q2, G);
  const Mat Gd = G.adjoint();
  right_mul_gate(rho, nq, q1, q2, Gd);
}

// O -> G† O G  (operator/ascension direction)
inline void sandwich_gate(Mat& O, int nq, int q1, int q2, const Mat& G) {
  const Mat Gd = G.adjoint();
  left_mul_gate(O, nq, q1, q2, Gd);
  right_mul_gate(O, nq, q1, q2, G);
}

// Replace qubit `pos` by two qubits (pos, pos+1) through a 4x2 isometry:
// rho' = E rho E† with E = I_hi ⊗ iso ⊗ I_lo.  Result has nq+1 qubits.
inline Mat expand_site(const Mat& rho, int nq, int pos, const Mat& iso) {
  const std::uint64_t dimo = 1ull << (nq + 1);
  const std::uint64_t dimi = 1ull << nq;
  const std::uint64_t lo = (1ull << pos) - 1;
  // Row expansion.
  Mat tmp(static_cast<Eigen::Index>(dimo), static_cast<Eigen::Index>(dimi));
  tmp.setZero();
  for (std::uint64_t r = 0; r < dimi; ++r) {
    const std::uint64_t rl = r & lo;
    const std::uint64_t rh = (r & ~lo) >> pos;  // includes old bit at pos
    const std::uint64_t a = rh & 1;             // old site value
    const std::uint64_t hh = rh >> 1;
    for (std::uint64_t o = 0; o < 4; ++o) {
      const cplx w = iso(static_cast<Eigen::Index>(o),
                         static_cast<Eigen::Index>(a));
      if (w == cplx(0.0, 0.0)) continue;
      const std::uint64_t ro = rl | (o << pos) | (hh << (pos + 2));
      tmp.row(static_cast<Eigen::Index>(ro)) +=
          w * rho.row(static_cast<Eigen::Index>(r));
    }
  }
  // Column expansion (conjugate).
  Mat out(static_cast<Eigen::Index>(dimo), static_cast<Eigen::Index>(dimo));
  out.setZero();
  for (std::uint64_t c = 0; c < dimi; ++c) {
    const std::uint64_t cl = c & lo;
    const std::uint64_t ch = (c & ~lo) >> pos;
    const std::uint64_t a = ch & 1;
    const std::uint64_t hh = ch >> 1;
    for (std::uint64_t o = 0; o < 4; ++o) {
      const cplx w = std::conj(iso(static_cast<Eigen::Index>(o),
                                   static_cast<Eigen::Index>(a)));
      if (w == cplx(0.0, 0.0)) continue;
      const std::uint64_t co = cl | (o << pos) | (hh << (pos + 2));
      out.col(static_cast<Eigen::Index>(co)) +=
          w * tmp.col(static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

// Inverse direction: contract qubit pair (pos, pos+1) through the isometry:
// O' = E† O E.  Result has nq-1 qubits.
inline Mat contract_site(const Mat& O, int nq, int pos, const Mat& iso) {
  const std::uint64_t dimi = 1ull << nq;
  const std::uint64_t dimo = 1ull << (nq - 1);
  const std::uint64_t lo = (1ull << pos) - 1;
  Mat tmp(static_cast<Eigen::Index>(dimo), static_cast<Eigen::Index>(dimi));
  tmp.setZero();
  // Rows: E† acting on the left index.
  for (std::uint64_t r = 0; r < dimi; ++r) {
    const std::uint64_t rl = r & lo;
    const std::uint64_t rh = (r & ~lo) >> pos;
    const std::uint64_t o = rh & 3;
    const std::uint64_t hh = rh >> 2;
    for (std::uint64_t a = 0; a < 2; ++a) {
      const cplx w = std::conj(iso(static_cast<Eigen::Index>(o),
                                   static_cast<Eigen::Index>(a)));
      if (w == cplx(0.0, 0.0)) continue;
      const std::uint64_t ro = rl | (a << pos) | (hh << (pos + 1));
      tmp.row(static_cast<Eigen::Index>(ro)) +=
          w * O.row(static_cast<Eigen::Index>(r));
    }
  }
  Mat out(static_cast<Eigen::Index>(dimo), static_cast<Eigen::Index>(dimo));
  out.setZero();
  for (std::uint64_t c = 0; c < dimi; ++c) {
    const std::uint64_t cl = c & lo;
    const std::uint64_t ch = (c & ~lo) >> pos;
    const std::uint64_t o = ch & 3;
    const std::uint64_t hh = ch >> 2;
    for (std::uint64_t a = 0; a < 2; ++a) {
      const cplx w = iso(static_cast<Eigen::Index>(o),
                         static_cast<Eigen::Index>(a));
      if (w == cplx(0.0, 0.0)) continue;
      const std::uint64_t co = cl | (a << pos) | (hh << (pos + 1));
      out.col(static_cast<Eigen::Index>(co)) +=
          w * tmp.col(static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

// Partial trace keeping the listed qubit positions (ascending); the kept
// qubits are re-packed preserving order.
inline Mat ptrace(const Mat& rho, int nq, const std::vector<int>& keep) {
  const int nk = static_cast<int>(keep.size());
  const std::uint64_t dimk = 1ull << nk;
  std::vector<int> drop;
  {
    std::vector<char> kept(static_cast<std::size_t>(nq), 0);
    for (int q : keep) kept[static_cast<std::size_t>(q)] = 1;
    for (int q = 0; q < nq; ++q)
      if (!kept[static_cast<std::size_t>(q)]) drop.push_back(q);
  }
  const int nd = static_cast<int>(drop.size());
  const std::uint64_t dimd = 1ull << nd;
  auto scatter = [](std::uint64_t bits, const std::vector<int>& pos) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      r |= ((bits >> i) & 1ull) << pos[i];
    return r;
  };
  Mat out(static_cast<Eigen::Index>(dimk), static_cast<Eigen::Index>(dimk));
  out.setZero();
  for (std::uint64_t kr = 0; kr < dimk; ++kr) {
    const std::uint64_t sr = scatter(kr, keep);
    for (std::uint64_t kc = 0; kc < dimk; ++kc) {
      const std::uint64_t sc = scatter(kc, keep);
      cplx acc(0.0, 0.0);
      for (std::uint64_t d = 0; d < dimd; ++d) {
        const std::uint64_t sd = scatter(d, drop);
        acc += rho(static_cast<Eigen::Index>(sr | sd),
                   static_cast<Eigen::Index>(sc | sd));
      }
      out(static_cast<Eigen::Index>(kr), static_cast<Eigen::Index>(kc)) = acc;
    }
  }
  return out;
}

// Pad a k-qubit operator with identities into ktot qubits at bit offset.
inline Mat embed_op(const Mat& O, int k, int offset, int ktot) {
  const std::uint64_t dim = 1ull << ktot;
  const std::uint64_t dk = 1ull << k;
  const std::uint64_t mask = (dk - 1) << offset;
  Mat out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setZero();
  for (std::uint64_t r = 0; r < dim; ++r) {
    const std::uint64_t rs = (r & mask) >> offset;
    const std::uint64_t rrest = r & ~mask;
    for (std::uint64_t cs = 0; cs < dk; ++cs) {
      const cplx w =
          O(static_cast<Eigen::Index>(rs), static_cast<Eigen::Index>(cs));
      if (w == cplx(0.0, 0.0)) continue;
      out(static_cast<Eigen::Index>(r),
          static_cast<Eigen::Index>(rrest | (cs << offset))) = w;
    }
  }
  return out;
}

inline cplx trace_prod(const Mat& A, const Mat& B) {
  return (A.transpose().cwiseProduct(B)).sum();
}

inline Mat tensor_to_mat(const Tensor& t) {
  // Interprets an even-rank tensor of shape {d, d} (or {2,2,...} split half
  // out / half in, row-major) as a matrix in the little-endian convention.
  std::int64_t d = 1;
  for (int i = 0; i < t.rank() / 2; ++i) d *= t.shape[static_cast<std::size_t>(i)];
  Mat m(d, d);
  for (std::int64_t r = 0; r < d; ++r)
    for (std::int64_t c = 0; c < d; ++c)
      m(r, c) = t.data[static_cast<std::size_t>(r * d + c)];
  return m;
}

inline Tensor mat_to_tensor(const Mat& m) {
  Tensor t({m.rows(), m.cols()});
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      t.data[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return t;
}

}  // namespace holomera
