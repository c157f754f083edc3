#pragma once

#include <map>
#include <memory>
#include <string>

#include "holomera/ascension.hpp"
#include "holomera/engine.hpp"

// Single- and two-hologron energetics: excitation energies, radial and
// angular interaction potentials, the b_AdS scaling collapse, and the
// analytic potential assembled from the ascension coefficient table.

namespace holomera {

struct PotentialPoint {
  int rho1 = 0;
  int rho2_or_ds = 0;  // partner radius (radial) or arclength gap (angular)
  double e1a = 0.0;    // E_1h at the first coordinate
  double e1b = 0.0;    // E_1h at the second coordinate
  double e2h = 0.0;
  double v = 0.0;            // E_2h - E_1h - E_1h
  double v_collapsed = 0.0;  // v / min(e1a, e1b)
};

struct PotentialCurve {
  std::string mode;  // "radial" or "angular"
  std::int64_t N = 0;
  int gauge_id = 0;
  std::vector<PotentialPoint> points;
};

// Coordinate at radius rho on the radial lineage anchored at core arclength
// `arc`: the w-leg stack (rho, arc), (rho+1, 2*arc), ... of Fig-3(a) type
// radially separated pairs.
inline BulkCoordinate radial_site(int rho, std::int64_t arc = 0) {
  if (rho < 2) throw IndexError("bulk radius out of range");
  if (arc < 0 || arc >= 4) throw IndexError("core arclength must be in [0,4)");
  return {rho, arc << (rho - 2)};
}

// Shared-ground evaluator: one cached ground-state descent serves every flip
// configuration on the same network.
class HologronProbe {
 public:
  explicit HologronProbe(const MeraNetwork& net)
      : net_(&net),
        ground_(std::make_shared<Evaluator>(net)),
        prefactor_(ChainHamiltonian(net.n_sites()).prefactor()) {
    e_gs_ = prefactor_ * ground_->sum_h();
  }

  const MeraNetwork& net() const { return *net_; }
  double ground_energy() const { return e_gs_; }

  // Raw <Psi_flips| H |Psi_flips> (no ground subtraction).
  double raw_energy(const std::vector<BulkCoordinate>& flips) {
    Evaluator ev(*net_, flips, ground_);
    return prefactor_ * ev.sum_h();
  }

  double single_energy(const BulkCoordinate& x) {
    const auto key = std::make_pair(x.rho, x.s);
    auto it = e1_cache_.find(key);
    if (it != e1_cache_.end()) return it->second;
    const double e = raw_energy({x}) - e_gs_;
    e1_cache_.emplace(key, e);
    return e;
  }

  double pair_energy(const BulkCoordinate& x1, const BulkCoordinate& x2) {
    if (x1 == x2) throw ContractError("duplicate bulk-flip insertion");
    return raw_energy({x1, x2}) - e_gs_;
  }

 private:
  const MeraNetwork* net_;
  std::shared_ptr<Evaluator> ground_;
  double prefactor_;
  double e_gs_;
  std::map<std::pair<int, std::int64_t>, double> e1_cache_;
};

inline double single_energy(const MeraNetwork& net, const BulkCoordinate& x) {
  HologronProbe probe(net);
  return probe.single_energy(x);
}

inline double pair_energy(const MeraNetwork& net, const BulkCoordinate& x1,
                          const BulkCoordinate& x2) {
  HologronProbe probe(net);
  return probe.pair_energy(x1, x2);
}

inline PotentialPoint potential_point(HologronProbe& probe,
                                      const BulkCoordinate& x1,
                                      const BulkCoordinate& x2, int rho1,
                                      int rho2_or_ds) {
  PotentialPoint p;
  p.rho1 = rho1;
  p.rho2_or_ds = rho2_or_ds;
  p.e1a = probe.single_energy(x1);
  p.e1b = probe.single_energy(x2);
  p.e2h = probe.pair_energy(x1, x2);
  p.v = p.e2h - p.e1a - p.e1b;
  const double b = std::min(p.e1a, p.e1b);
  p.v_collapsed = b != 0.0 ? p.v / b : 0.0;
  return p;
}

// All radially separated pairs rho1 < rho2 on a common w-leg lineage.
inline PotentialCurve radial_potential(HologronProbe& probe, int rho_lo,
                                       int rho_hi, std::int64_t arc = 0,
                                       int gauge_id = 0) {
  const int D = probe.net().D;
  if (rho_lo < 2 || rho_hi > D - 1 || rho_lo > rho_hi)
    throw IndexError("radial range outside [2, D-1]");
  PotentialCurve c{"radial", probe.net().n_sites(), gauge_id, {}};
  for (int r1 = rho_lo; r1 <= rho_hi; ++r1)
    for (int r2 = r1 + 1; r2 <= rho_hi; ++r2)
      c.points.push_back(potential_point(probe, radial_site(r1, arc),
                                         radial_site(r2, arc), r1, r2));
  return c;
}

inline PotentialCurve radial_potential(const MeraNetwork& net, int rho_lo,
                                       int rho_hi, std::int64_t arc = 0,
                                       int gauge_id = 0) {
  HologronProbe probe(net);
  return radial_potential(probe, rho_lo, rho_hi, arc, gauge_id);
}

// Both hologrons at radius rho, arclengths 0 and ds; swept over rho.
inline PotentialCurve angular_potential(HologronProbe& probe, std::int64_t ds,
                                        int rho_lo, int rho_hi,
                                        int gauge_id = 0) {
  const int D = probe.net().D;
  if (rho_lo < 2 || rho_hi > D - 1 || rho_lo > rho_hi)
    throw IndexError("radial range outside [2, D-1]");
  if (ds < 1) throw ParameterError("arclength separation must be >= 1");
  PotentialCurve c{"angular", probe.net().n_sites(), gauge_id, {}};
  for (int rho = rho_lo; rho <= rho_hi; ++rho) {
    if (ds >= (1ll << rho)) continue;
    const BulkCoordinate x1{rho, 0};
    const BulkCoordinate x2{rho, ds};
    c.points.push_back(
        potential_point(probe, x1, x2, rho, static_cast<int>(ds)));
  }
  if (c.points.empty())
    throw ParameterError("arclength separation exceeds every requested ring");
  return c;
}

inline PotentialCurve angular_potential(const MeraNetwork& net,
                                        std::int64_t ds, int rho_lo,
                                        int rho_hi, int gauge_id = 0) {
  HologronProbe probe(net);
  return angular_potential(probe, ds, rho_lo, rho_hi, gauge_id);
}

// Analytic entanglement-renormalization potential: b_ads * sum over the
// dimension groups of C_Delta * 2^{-(Delta-1)|rho1-rho2|} (TN units, one
// layer per radial step so e^{-d/l} = 2^{-d}).  The identity group carries
// no distance dependence and is excluded by construction of C_delta.
inline double analytic_potential(const CoefficientTable& coeffs, double b_ads,
                                 double dist) {
  double sum = 0.0;
  for (const auto& [delta, c] : coeffs.C_delta)
    sum += c * std::pow(2.0, -(delta - 1.0) * std::abs(dist));
  return b_ads * sum;
}

}  // namespace holomera
