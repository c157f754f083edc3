#pragma once

#include <cmath>
#include <memory>

#include "holomera/qubits.hpp"

// Analytic wavelet gates of the binary MERA.  In the coarse-graining
// direction:
//   w† = (√3+√2)/4 + (√3−√2)/4 ZZ + i(1+√2)/4 XY + i(1−√2)/4 YX
//   u† = (√3+2)/4  + (√3−2)/4 ZZ  + (i/4) XY     + (i/4) YX
// The circuit applies their daggers; the isometries are v = w(·⊗|0⟩) and
// ṽ = w(·⊗|1⟩) with the ancilla (hologron) leg on the second gate input.

namespace holomera {

struct GateSet {
  Mat w;   // 4x4
  Mat u;   // 4x4
  Mat v;   // 4x2
  Mat vt;  // 4x2  (ṽ)

  static GateSet from_w_u(const Mat& w, const Mat& u) {
    GateSet g;
    g.w = w;
    g.u = u;
    g.v = Mat(4, 2);
    g.vt = Mat(4, 2);
    for (int k = 0; k < 2; ++k) {
      g.v.col(k) = w.col(k);        // |k⟩⊗|0⟩  (second leg = high bit)
      g.vt.col(k) = w.col(k + 2);   // |k⟩⊗|1⟩
    }
    return g;
  }
};

inline GateSet analytic_gates() {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const cplx i(0.0, 1.0);
  const Mat XY = op2(pauli_X(), pauli_Y());
  const Mat YX = op2(pauli_Y(), pauli_X());
  const Mat ZZ = op2(pauli_Z(), pauli_Z());
  const Mat I4 = Mat::Identity(4, 4);
  Mat wd = (s3 + s2) / 4.0 * I4 + (s3 - s2) / 4.0 * ZZ +
           i * (1.0 + s2) / 4.0 * XY + i * (1.0 - s2) / 4.0 * YX;
  Mat ud = (s3 + 2.0) / 4.0 * I4 + (s3 - 2.0) / 4.0 * ZZ + (i / 4.0) * XY +
           (i / 4.0) * YX;
  return GateSet::from_w_u(wd.adjoint(), ud.adjoint());
}

struct HologronGauge {
  double theta_x = 0.0;
  double theta_y = 0.0;
  double theta_z = 0.0;
  double phi = 0.0;  // energy-irrelevant, kept for completeness
};

// G(θ,φ) = v v† + e^{iφ} ṽ e^{iθ·σ} ṽ† ; satisfies G v = v.
inline Mat gauge_matrix(const GateSet& g, const HologronGauge& gg) {
  Mat H = gg.theta_x * pauli_X() + gg.theta_y * pauli_Y() +
          gg.theta_z * pauli_Z();
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Mat rot = Mat::Zero(2, 2);
  for (int k = 0; k < 2; ++k) {
    const cplx ph = std::exp(cplx(0.0, es.eigenvalues()(k)));
    rot += ph * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  const cplx eiphi = std::exp(cplx(0.0, gg.phi));
  return g.v * g.v.adjoint() + eiphi * g.vt * rot * g.vt.adjoint();
}

inline GateSet gauge_transform(const GateSet& g, const HologronGauge& gg) {
  return GateSet::from_w_u(gauge_matrix(g, gg) * g.w, g.u);
}

struct BulkCoordinate {
  int rho;         // radius, 2 <= rho <= D-1
  std::int64_t s;  // arclength index, 0 <= s < 2^rho
  bool operator==(const BulkCoordinate&) const = default;
};

// Per-layer gate tables for noisy networks; layer l holds 2^l w gates and
// 2^l u gates at the fine level 2^{l+1}.
struct NoisyLayer {
  std::vector<Mat> w;
  std::vector<Mat> u;
};

struct MeraNetwork {
  int D = 0;  // N = 2^D boundary sites
  GateSet gates;
  Vec core;  // 16 amplitudes, normalized
  std::shared_ptr<const std::vector<NoisyLayer>> noisy;  // index = layer l

  std::int64_t n_sites() const { return 1ll << D; }

  const Mat& w_at(int l, std::int64_t i) const {
    if (noisy) return (*noisy)[static_cast<std::size_t>(l)].w
        [static_cast<std::size_t>(i)];
    return gates.w;
  }
  const Mat& u_at(int l, std::int64_t j) const {
    if (noisy) return (*noisy)[static_cast<std::size_t>(l)].u
        [static_cast<std::size_t>(j)];
    return gates.u;
  }
  Mat iso_at(int l, std::int64_t i, bool flipped) const {
    if (!noisy) return flipped ? gates.vt : gates.v;
    const Mat& w = w_at(l, i);
    Mat iso(4, 2);
    const int a = flipped ? 2 : 0;
    for (int k = 0; k < 2; ++k) iso.col(k) = w.col(k + a);
    return iso;
  }

  void check_coordinate(const BulkCoordinate& x) const {
    if (x.rho < 2 || x.rho > D - 1)
      throw IndexError("bulk radius out of range");
    if (x.s < 0 || x.s >= (1ll << x.rho))
      throw IndexError("bulk arclength out of range");
  }
};

// Forward (toward-boundary) causal cone of a ṽ insertion at x, as one
// contiguous periodic interval per level from x.rho+1 to D.
struct LevelInterval {
  int level;          // number of sites = 2^level
  std::int64_t start; // mod 2^level
  std::int64_t len;   // <= 2^level
};

inline std::vector<LevelInterval> lightcone(const MeraNetwork& net,
                                            const BulkCoordinate& x) {
  net.check_coordinate(x);
  std::vector<LevelInterval> out;
  // At the flip's own fine level: w_s outputs (2s, 2s+1), the adjacent u
  // gates extend the cone to [2s-1, 2s+2].
  std::int64_t Lf = 1ll << (x.rho + 1);
  std::int64_t start = (2 * x.s - 1 + Lf) % Lf;
  std::int64_t len = std::min<std::int64_t>(4, Lf);
  out.push_back({x.rho + 1, start, len});
  for (int lv = x.rho + 1; lv < net.D; ++lv) {
    Lf = 1ll << (lv + 1);
    if (len >= (1ll << lv)) {
      start = 0;
      len = Lf;
    } else {
      start = (2 * start - 1 + Lf) % Lf;
      len = std::min<std::int64_t>(2 * len + 2, Lf);
    }
    out.push_back({lv + 1, start, len});
  }
  return out;
}

}  // namespace holomera
