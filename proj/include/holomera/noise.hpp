#pragma once

#include <array>
#include <cstdint>

#include "holomera/engine.hpp"
#include "holomera/hologron.hpp"

// Noisy MERA preparation (Supp-E style channels): control-error unitaries,
// dephasing Kraus branches, gate-fidelity estimators, and Monte-Carlo noisy
// hologron potentials over pure-state samples.

namespace holomera {

// ---------------------------------------------------------------------------
// Counter-based RNG (Philox4x32-10): every (sample, stream, position) tuple
// owns an independent reproducible stream, so parallel sampling is
// order-independent.

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         std::array<std::uint32_t, 2>& k) {
  constexpr std::uint64_t M0 = 0xD2511F53ull, M1 = 0xCD9E8D57ull;
  const std::uint64_t p0 = M0 * c[0];
  const std::uint64_t p1 = M1 * c[2];
  const std::array<std::uint32_t, 4> n = {
      static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
      static_cast<std::uint32_t>(p1),
      static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
      static_cast<std::uint32_t>(p0)};
  c = n;
  k[0] += 0x9E3779B9u;
  k[1] += 0xBB67AE85u;
}

inline std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) philox_round(ctr, key);
  return ctr;
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t sample, std::uint32_t stream,
             std::uint32_t position)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        base_{sample, stream, position, 0} {}

  std::uint32_t next_u32() {
    if (have_ == 0) {
      buf_ = detail::philox10(base_, key_);
      ++base_[3];
      have_ = 4;
    }
    return buf_[static_cast<std::size_t>(--have_)];
  }

  // 53-bit uniform in [0, 1).
  double uniform() {
    const std::uint64_t hi = next_u32(), lo = next_u32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

// ---------------------------------------------------------------------------
// Channels.

enum class NoiseKind { control_error, dephasing };

struct NoiseModel {
  NoiseKind kind = NoiseKind::control_error;
  double eps = 0.0;
  std::uint64_t seed = 0;
  // Control errors: the paper's angles are Uniform[0, 2 pi eps), a biased
  // distribution; the centered variant Uniform[-pi eps, pi eps) is exposed
  // for sensitivity studies only.
  bool centered = false;
};

inline const std::vector<Mat>& two_qubit_paulis() {
  static const std::vector<Mat> ps = [] {
    std::vector<Mat> v;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != 0 || b != 0) v.push_back(op2(pauli(a), pauli(b)));
    return v;
  }();
  return ps;
}

// g * exp(i sum_S theta_S S) over the 15 nontrivial 2-qubit Pauli strings.
inline Mat sample_control_gate(const Mat& g, double eps, CounterRng& rng,
                               bool centered = false) {
  if (eps < 0.0) throw ParameterError("noise strength must be nonnegative");
  Mat H = Mat::Zero(4, 4);
  for (const Mat& s : two_qubit_paulis()) {
    const double u = rng.uniform();
    const double theta = centered ? 2.0 * pi * eps * (u - 0.5)
                                  : 2.0 * pi * eps * u;
    H += theta * s;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Mat rot = Mat::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    rot += std::exp(cplx(0.0, es.eigenvalues()(k))) *
           es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return g * rot;
}

struct KrausSet {
  std::vector<Mat> ops;

  double completeness_residual() const {
    if (ops.empty()) return 1.0;
    Mat acc = Mat::Zero(ops[0].cols(), ops[0].cols());
    for (const Mat& k : ops) acc += k.adjoint() * k;
    return (acc - Mat::Identity(acc.rows(), acc.cols())).norm();
  }
};

// Two-qubit dephasing channel around the gate g, with the
// completeness-consistent weights {(1-eps), sqrt(eps(1-eps)) twice, eps}
// multiplying the Z-dressed gate.
inline KrausSet dephasing_kraus(const Mat& g, double eps) {
  if (eps < 0.0 || eps > 1.0)
    throw ParameterError("dephasing strength must lie in [0, 1]");
  const Mat ZI = op2(pauli_Z(), pauli_I());
  const Mat IZ = op2(pauli_I(), pauli_Z());
  const Mat ZZ = op2(pauli_Z(), pauli_Z());
  const double w1 = 1.0 - eps;
  const double wc = std::sqrt(eps * (1.0 - eps));
  KrausSet ks;
  ks.ops.push_back(w1 * g);
  ks.ops.push_back(wc * ZI * g);
  ks.ops.push_back(wc * IZ * g);
  ks.ops.push_back(eps * ZZ * g);
  return ks;
}

// Stochastic unwinding of the dephasing channel: every Kraus operator is a
// weight times a unitary, so branch probabilities are state-independent
// (the squared weights) and one draw yields a pure-state sample.
inline Mat sample_dephasing_gate(const Mat& g, double eps, CounterRng& rng) {
  if (eps < 0.0 || eps > 1.0)
    throw ParameterError("dephasing strength must lie in [0, 1]");
  const double p1 = (1.0 - eps) * (1.0 - eps);
  const double pc = eps * (1.0 - eps);
  const double r = rng.uniform();
  if (r < p1) return g;
  if (r < p1 + pc) return op2(pauli_Z(), pauli_I()) * g;
  if (r < p1 + 2.0 * pc) return op2(pauli_I(), pauli_Z()) * g;
  return op2(pauli_Z(), pauli_Z()) * g;
}

inline Mat sample_gate(const Mat& g, const NoiseModel& model,
                       CounterRng& rng) {
  if (model.eps == 0.0) return g;
  return model.kind == NoiseKind::control_error
             ? sample_control_gate(g, model.eps, rng, model.centered)
             : sample_dephasing_gate(g, model.eps, rng);
}

// ---------------------------------------------------------------------------
// Noisy network samples.

// Fresh gates at every network location for one Monte-Carlo trial; the core
// state is kept ideal (noise enters through the preparation circuit only).
inline MeraNetwork noisy_network(const MeraNetwork& clean,
                                 const NoiseModel& model,
                                 std::uint32_t sample) {
  auto layers = std::make_shared<std::vector<NoisyLayer>>(
      static_cast<std::size_t>(clean.D));
  for (int l = 2; l < clean.D; ++l) {
    NoisyLayer& lay = (*layers)[static_cast<std::size_t>(l)];
    const std::int64_t Lc = 1ll << l;
    lay.w.reserve(static_cast<std::size_t>(Lc));
    lay.u.reserve(static_cast<std::size_t>(Lc));
    for (std::int64_t i = 0; i < Lc; ++i) {
      CounterRng rw(model.seed, sample, static_cast<std::uint32_t>(2 * l),
                    static_cast<std::uint32_t>(i));
      lay.w.push_back(sample_gate(clean.gates.w, model, rw));
      CounterRng ru(model.seed, sample, static_cast<std::uint32_t>(2 * l + 1),
                    static_cast<std::uint32_t>(i));
      lay.u.push_back(sample_gate(clean.gates.u, model, ru));
    }
  }
  MeraNetwork net = clean;
  net.noisy = layers;
  return net;
}

// ---------------------------------------------------------------------------
// Fidelity.

inline double fidelity_closed_dephasing(double eps, int d = 4) {
  if (eps < 0.0 || eps > 1.0)
    throw ParameterError("dephasing strength must lie in [0, 1]");
  return (d * (1.0 - eps) * (1.0 - eps) + 1.0) / (d + 1.0);
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderror = 0.0;
  int n = 0;
};

// F = E[(|tr(g^dag g_sample)|^2 + d) / (d(d+1))], d = 4.
inline MonteCarloEstimate fidelity_mc(const Mat& g, const NoiseModel& model,
                                      int n_samples) {
  if (n_samples < 1) throw ParameterError("sample count must be >= 1");
  const double d = 4.0;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    CounterRng rng(model.seed, static_cast<std::uint32_t>(s), 0xF1DEu, 0);
    const Mat gs = sample_gate(g, model, rng);
    const double t = std::norm(trace_prod(Mat(g.adjoint()), gs));
    const double f = (t + d) / (d * (d + 1.0));
    sum += f;
    sum2 += f * f;
  }
  MonteCarloEstimate e;
  e.n = n_samples;
  e.mean = sum / n_samples;
  const double var =
      n_samples > 1 ? (sum2 - sum * sum / n_samples) / (n_samples - 1) : 0.0;
  e.stderror = std::sqrt(std::max(0.0, var) / n_samples);
  return e;
}

// ---------------------------------------------------------------------------
// Noisy potentials.

struct NoisyPotentialPoint {
  BulkCoordinate x1, x2;
  double e1a_mean = 0.0;  // mean single-hologron energy at x1
  double e1b_mean = 0.0;
  double v_mean = 0.0;
  double v_stderr = 0.0;
};

struct NoisyPotential {
  NoiseModel model;
  int n_samples = 0;
  std::vector<NoisyPotentialPoint> points;
};

// Mean over pure-state samples of <X1X2 H X1X2> - <X1 H X1> - <X2 H X2> +
// <H>, with fresh gates per trial at every location.
inline NoisyPotential noisy_potential(
    const MeraNetwork& clean, const NoiseModel& model,
    const std::vector<std::pair<BulkCoordinate, BulkCoordinate>>& pairs,
    int n_samples) {
  if (n_samples < 1) throw ParameterError("sample count must be >= 1");
  const std::size_t np = pairs.size();
  std::vector<double> vsum(np, 0.0), vsum2(np, 0.0), e1a(np, 0.0),
      e1b(np, 0.0);
  for (int s = 0; s < n_samples; ++s) {
    const MeraNetwork net =
        noisy_network(clean, model, static_cast<std::uint32_t>(s));
    HologronProbe probe(net);
    const double egs = probe.ground_energy();
    for (std::size_t i = 0; i < np; ++i) {
      const double ra = probe.raw_energy({pairs[i].first});
      const double rb = probe.raw_energy({pairs[i].second});
      const double rab = probe.raw_energy({pairs[i].first, pairs[i].second});
      const double v = rab - ra - rb + egs;
      vsum[i] += v;
      vsum2[i] += v * v;
      e1a[i] += ra - egs;
      e1b[i] += rb - egs;
    }
  }
  NoisyPotential out;
  out.model = model;
  out.n_samples = n_samples;
  for (std::size_t i = 0; i < np; ++i) {
    NoisyPotentialPoint p;
    p.x1 = pairs[i].first;
    p.x2 = pairs[i].second;
    p.e1a_mean = e1a[i] / n_samples;
    p.e1b_mean = e1b[i] / n_samples;
    p.v_mean = vsum[i] / n_samples;
    const double var = n_samples > 1 ? (vsum2[i] - vsum[i] * vsum[i] /
                                                       n_samples) /
                                           (n_samples - 1)
                                     : 0.0;
    p.v_stderr = std::sqrt(std::max(0.0, var) / n_samples);
    out.points.push_back(p);
  }
  return out;
}

}  // namespace holomera
