#pragma once

#include "holomera/gates.hpp"
#include "holomera/lattice.hpp"

// Dense statevector construction of the MERA boundary state: the brute-force
// oracle the causal-cone engine is validated against.

namespace holomera {

inline Vec boundary_state(const MeraNetwork& net,
                          const std::vector<BulkCoordinate>& flips = {}) {
  if (net.D > 20) throw CapacityError("statevector oracle capped at D = 20");
  auto flipped = [&](int l, std::int64_t i) {
    for (const auto& f : flips)
      if (f.rho == l && f.s == i) return true;
    return false;
  };
  Vec state = net.core;
  for (int l = 2; l < net.D; ++l) {
    const std::int64_t Lc = 1ll << l;
    const std::int64_t Lf = 2 * Lc;
    Vec fine = Vec::Zero(1ll << Lf);
    const std::int64_t dimc = 1ll << Lc;
    // Interleave ancillas: coarse site i -> fine 2i, ancilla -> fine 2i+1.
    for (std::int64_t b = 0; b < dimc; ++b) {
      const cplx amp = state(static_cast<Eigen::Index>(b));
      if (amp == cplx(0.0, 0.0)) continue;
      std::int64_t idx = 0;
      for (std::int64_t i = 0; i < Lc; ++i) {
        idx |= ((b >> i) & 1ll) << (2 * i);
        if (flipped(l, i)) idx |= 1ll << (2 * i + 1);
      }
      fine(static_cast<Eigen::Index>(idx)) = amp;
    }
    for (std::int64_t i = 0; i < Lc; ++i)
      apply_gate_inplace(fine.data(), static_cast<int>(Lf),
                         static_cast<int>(2 * i), static_cast<int>(2 * i + 1),
                         net.w_at(l, i));
    for (std::int64_t j = 0; j < Lc; ++j)
      apply_gate_inplace(fine.data(), static_cast<int>(Lf),
                         static_cast<int>(2 * j + 1),
                         static_cast<int>((2 * j + 2) % Lf), net.u_at(l, j));
    state = std::move(fine);
  }
  return state;
}

inline double oracle_energy(const MeraNetwork& net,
                            const std::vector<BulkCoordinate>& flips = {}) {
  const Vec psi = boundary_state(net, flips);
  const ChainHamiltonian ham(net.n_sites());
  Vec hpsi = Vec::Zero(psi.size());
  apply_hamiltonian(ham, psi, hpsi);
  return std::real(psi.dot(hpsi));
}

// |<a|b>|^(expo/N): per-site overlap density, exponent convention pinned
// empirically (see tests).
inline double overlap_density(const Vec& a, const Vec& b, std::int64_t N,
                              double expo = 2.0) {
  const double ov = std::abs(a.dot(b));
  return std::pow(ov, expo / static_cast<double>(N));
}

}  // namespace holomera
