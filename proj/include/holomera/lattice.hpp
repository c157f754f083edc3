#pragma once

#include <cmath>
#include <cstdint>

#include "holomera/qubits.hpp"

// Critical chain H = (N/4pi) * sum_s h_s with
//   h_s = X_{s-1} Z_s X_{s+1} - 1/2 (X_{s-1} X_s + X_s X_{s+1}),
// periodic indices, Z2 symmetry prod_s Z_s, and the momentum density
//   p_s = i [h_s, h_{s-1}] / v  with v = 1.

namespace holomera {

// 3-site term on qubits (0,1,2) = sites (s-1, s, s+1).
inline const Mat& local_term_op() {
  static const Mat h = [] {
    Mat m = pauli_string({1, 3, 1});
    m -= 0.5 * pauli_string({1, 1, 0});
    m -= 0.5 * pauli_string({0, 1, 1});
    return m;
  }();
  return h;
}

// Z2-even epsilon-proxy used for correlators: XZX + 1/2 (XX + XX).
inline const Mat& epsilon_proxy_op() {
  static const Mat e = [] {
    Mat m = pauli_string({1, 3, 1});
    m += 0.5 * pauli_string({1, 1, 0});
    m += 0.5 * pauli_string({0, 1, 1});
    return m;
  }();
  return e;
}

struct LocalTerm {
  std::int64_t s;  // center site (the Z)
  Tensor op;       // 8x8
};

// 5-site p_s on qubits (0..4) = sites (s-2 .. s+2); h_s sits at offset 1.
inline const Mat& momentum_density_op() {
  static const Mat p = [] {
    const Mat hs = embed_op(local_term_op(), 3, 1, 5);
    const Mat hm = embed_op(local_term_op(), 3, 0, 5);
    return Mat(cplx(0.0, 1.0) * (hs * hm - hm * hs));
  }();
  return p;
}

struct ChainHamiltonian {
  std::int64_t N;

  explicit ChainHamiltonian(std::int64_t n) : N(n) {
    if (N < 4 || (N & (N - 1)) != 0)
      throw ParameterError("chain length must be a power of 2, >= 4");
  }

  double prefactor() const { return static_cast<double>(N) / (4.0 * pi); }

  LocalTerm local_term(std::int64_t s) const {
    if (s < 0 || s >= N) throw IndexError("site index out of range");
    return LocalTerm{s, mat_to_tensor(local_term_op())};
  }
};

// Apply a k-site operator at sites (s0..s0+k-1 mod N) to a 2^N state.
inline void apply_local(const Mat& O, int k, std::int64_t s0, std::int64_t N,
                        const Vec& in, Vec& out) {
  const std::uint64_t dim = 1ull << N;
  const std::uint64_t dk = 1ull << k;
  std::vector<std::int64_t> sites(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) sites[static_cast<std::size_t>(i)] = (s0 + i) % N;
  auto gather = [&](std::uint64_t idx) {
    std::uint64_t b = 0;
    for (int i = 0; i < k; ++i)
      b |= ((idx >> sites[static_cast<std::size_t>(i)]) & 1ull) << i;
    return b;
  };
  auto scatter_clear = [&](std::uint64_t idx) {
    std::uint64_t r = idx;
    for (int i = 0; i < k; ++i)
      r &= ~(1ull << sites[static_cast<std::size_t>(i)]);
    return r;
  };
  auto place = [&](std::uint64_t base, std::uint64_t b) {
    std::uint64_t r = base;
    for (int i = 0; i < k; ++i)
      r |= ((b >> i) & 1ull) << sites[static_cast<std::size_t>(i)];
    return r;
  };
  for (std::uint64_t i = 0; i < dim; ++i) {
    const std::uint64_t b = gather(i);
    const std::uint64_t base = scatter_clear(i);
    cplx acc(0.0, 0.0);
    for (std::uint64_t c = 0; c < dk; ++c) {
      const cplx w =
          O(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c));
      if (w == cplx(0.0, 0.0)) continue;
      acc += w * in(static_cast<Eigen::Index>(place(base, c)));
    }
    out(static_cast<Eigen::Index>(i)) += acc;
  }
}

// y += H x, matrix free (prefactor included).
inline void apply_hamiltonian(const ChainHamiltonian& ham, const Vec& x,
                              Vec& y) {
  Vec acc = Vec::Zero(x.size());
  for (std::int64_t s = 0; s < ham.N; ++s)
    apply_local(local_term_op(), 3, (s - 1 + ham.N) % ham.N, ham.N, x, acc);
  y += ham.prefactor() * acc;
}

inline Mat build_dense(std::int64_t N) {
  if (N < 4 || (N & (N - 1)) != 0)
    throw ParameterError("chain length must be a power of 2, >= 4");
  if (N > 16) throw CapacityError("dense Hamiltonian capped at N = 16");
  const ChainHamiltonian ham(N);
  const std::uint64_t dim = 1ull << N;
  Mat H(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  H.setZero();
  Vec col = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::uint64_t c = 0; c < dim; ++c) {
    col.setZero();
    col(static_cast<Eigen::Index>(c)) = 1.0;
    Vec out = Vec::Zero(static_cast<Eigen::Index>(dim));
    apply_hamiltonian(ham, col, out);
    H.col(static_cast<Eigen::Index>(c)) = out;
  }
  return H;
}

// Lanczos with full reorthogonalization for the ground pair of H.
inline std::pair<double, Vec> ed_ground(std::int64_t N, int max_iter = 400,
                                        double tol = 1e-12) {
  if (N > 16) throw CapacityError("exact diagonalization capped at N = 16");
  const ChainHamiltonian ham(N);
  const Eigen::Index dim = static_cast<Eigen::Index>(1ull << N);
  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  Vec q = Vec::Zero(dim);
  // Deterministic pseudo-random start with weight in every Z2 sector.
  for (Eigen::Index i = 0; i < dim; ++i)
    q(i) = cplx(std::cos(0.7 * static_cast<double>(i) + 0.3),
                std::sin(1.3 * static_cast<double>(i) + 0.1));
  q.normalize();
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(q);
    Vec w = Vec::Zero(dim);
    apply_hamiltonian(ham, q, w);
    alpha.push_back(std::real(q.dot(w)));
    for (const Vec& b : basis) w -= (b.dot(w)) * b;
    for (const Vec& b : basis) w -= (b.dot(w)) * b;  // second pass
    const std::size_t m = basis.size();
    const double bnorm = w.norm();
    // Solve the projected tridiagonal problem.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
          alpha[i];
      if (i + 1 < m) {
        T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) =
            beta[i];
        T(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) =
            beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double e0 = es.eigenvalues()(0);
    if (it > 8 && std::abs(e0 - prev) < tol * std::max(1.0, std::abs(e0))) {
      Vec ground = Vec::Zero(dim);
      for (std::size_t i = 0; i < m; ++i)
        ground += es.eigenvectors()(static_cast<Eigen::Index>(i), 0) *
                  basis[i];
      ground.normalize();
      return {e0, ground};
    }
    prev = e0;
    if (bnorm < 1e-14) break;
    beta.push_back(bnorm);
    q = w / bnorm;
  }
  // Final answer from whatever subspace was built.
  const std::size_t m = basis.size();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
    if (i + 1 < m) {
      T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) =
          beta[i];
      T(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) =
          beta[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Vec ground = Vec::Zero(dim);
  for (std::size_t i = 0; i < m; ++i)
    ground += es.eigenvectors()(static_cast<Eigen::Index>(i), 0) * basis[i];
  const double gn = ground.norm();
  if (gn < 1e-12) throw SolverError("Lanczos failed to converge");
  ground /= gn;
  return {es.eigenvalues()(0), ground};
}

}  // namespace holomera
