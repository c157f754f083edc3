#pragma once

#include <algorithm>
#include <cmath>

#include "holomera/common.hpp"

// Closed-form AdS3 / BTZ comparison theory: probe energies, the boost factor
// relating rest-frame and global-frame interaction energies, and the boxed
// radial and angular gravitational potentials.  All formulas carry explicit
// factors of the bulk speed of light c = (2 pi l / L) v.

namespace holomera {

struct AdSParams {
  double ell = 1.0;    // AdS radius
  double m = 1.0;      // probe mass
  double G = 0.0;      // Newton constant
  double L = 2.0 * pi; // boundary circumference
  double v = 1.0;      // boundary velocity

  void validate() const {
    if (!(ell > 0.0)) throw ParameterError("AdS radius must be positive");
    if (m < 0.0) throw ParameterError("probe mass must be nonnegative");
    if (!(L > 0.0)) throw ParameterError("boundary circumference must be positive");
  }
};

// Main-text unit choices: one MERA layer per e-folding, l = 1/log 2, v = 1.
inline AdSParams paper_units(double m = 1.0, double G = 0.0) {
  AdSParams p;
  p.ell = 1.0 / std::log(2.0);
  p.m = m;
  p.G = G;
  p.L = 2.0 * pi;
  p.v = 1.0;
  return p;
}

inline double unit_conversion(const AdSParams& p) {
  p.validate();
  return 2.0 * pi * p.ell * p.v / p.L;
}

// E = cosh(rho/l) sqrt(m^2 c^4 + P_rho^2 c^2 + P_theta^2 c^2 / (l^2 sinh^2)).
inline double one_particle_energy(const AdSParams& p, double rho,
                                  double p_rho = 0.0, double p_theta = 0.0) {
  p.validate();
  if (rho < 0.0) throw ParameterError("radial coordinate must be nonnegative");
  const double c = unit_conversion(p);
  double inside = p.m * p.m * std::pow(c, 4) + p_rho * p_rho * c * c;
  if (p_theta != 0.0) {
    const double sh = std::sinh(rho / p.ell);
    if (sh == 0.0)
      throw ParameterError("centrifugal term singular at rho = 0");
    inside += p_theta * p_theta * c * c / (p.ell * p.ell * sh * sh);
  }
  return std::cosh(rho / p.ell) * std::sqrt(inside);
}

// cosh(rho_out/l) / cosh((rho_out - rho_in)/l) with rho_out the larger
// radius, so the asymptote is min{e^{rho1/l}, e^{rho2/l}}.
inline double boost_factor(const AdSParams& p, double rho1, double rho2) {
  p.validate();
  const double hi = std::max(rho1, rho2), lo = std::min(rho1, rho2);
  return std::cosh(hi / p.ell) / std::cosh((hi - lo) / p.ell);
}

inline double boost_factor_asymptotic(const AdSParams& p, double rho1,
                                      double rho2) {
  p.validate();
  return std::exp(std::min(rho1, rho2) / p.ell);
}

// Rest-frame two-body potential, exact and super-AdS asymptote.
inline double radial_rest_potential(const AdSParams& p, double dist) {
  p.validate();
  return -4.0 * p.G * p.m * p.m / std::cosh(dist / p.ell);
}

inline double radial_rest_potential_asymptotic(const AdSParams& p,
                                               double dist) {
  p.validate();
  return -8.0 * p.G * p.m * p.m * std::exp(-std::abs(dist) / p.ell);
}

// Global-frame potential: boost factor times the rest-frame form.
inline double radial_gravity_potential(const AdSParams& p, double rho1,
                                       double rho2) {
  return boost_factor(p, rho1, rho2) * radial_rest_potential(p, rho1 - rho2);
}

inline double radial_gravity_potential_asymptotic(const AdSParams& p,
                                                  double rho1, double rho2) {
  return boost_factor_asymptotic(p, rho1, rho2) *
         radial_rest_potential_asymptotic(p, rho1 - rho2);
}

// Fixed-arclength angular potential at radius rho; s is the proper arclength
// separation l sinh(rho/l) dtheta.
inline double angular_gravity_potential(const AdSParams& p, double rho,
                                        double s) {
  p.validate();
  const double x2 = s * s / (p.ell * p.ell);
  const double bracket =
      0.5 * x2 * (1.0 + 1.0 / std::sqrt(1.0 + 0.25 * x2)) - 1.0;
  return std::cosh(rho / p.ell) * 4.0 * p.G * p.m * p.m * bracket;
}

// Zero of the angular bracket in units of s/l (bisection; the bracket is
// monotone increasing).
inline double angular_bracket_root(const AdSParams& p) {
  p.validate();
  auto bracket = [](double x) {
    return 0.5 * x * x * (1.0 + 1.0 / std::sqrt(1.0 + 0.25 * x * x)) - 1.0;
  };
  double lo = 0.0, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bracket(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Probe energy in the BTZ background sourced by a mass m_source particle:
// f(rho) = cosh^2(rho/l) - 8 G m_source / c^2,
// E = sqrt(f) sqrt(m^2 c^4 + (f/cosh^2) P_rho^2 c^2 + P_theta^2 c^2 /
//     (l^2 sinh^2)).
inline double btz_energy(const AdSParams& p, double m_source, double rho,
                         double p_rho = 0.0, double p_theta = 0.0) {
  p.validate();
  if (rho < 0.0) throw ParameterError("radial coordinate must be nonnegative");
  const double c = unit_conversion(p);
  const double ch = std::cosh(rho / p.ell);
  const double f = ch * ch - 8.0 * p.G * m_source / (c * c);
  if (f <= 0.0)
    throw ParameterError("probe inside the BTZ horizon: f(rho) <= 0");
  double inside = p.m * p.m * std::pow(c, 4) +
                  (f / (ch * ch)) * p_rho * p_rho * c * c;
  if (p_theta != 0.0) {
    const double sh = std::sinh(rho / p.ell);
    if (sh == 0.0)
      throw ParameterError("centrifugal term singular at rho = 0");
    inside += p_theta * p_theta * c * c / (p.ell * p.ell * sh * sh);
  }
  return std::sqrt(f) * std::sqrt(inside);
}

// Super-AdS expansion of the zero-momentum BTZ energy to first order in G:
// E ~ m c^2 cosh(rho/l) - 4 G m m_source / cosh(rho/l).
inline double btz_energy_super_ads(const AdSParams& p, double m_source,
                                   double rho) {
  p.validate();
  const double c = unit_conversion(p);
  const double ch = std::cosh(rho / p.ell);
  return p.m * c * c * ch - 4.0 * p.G * p.m * m_source / ch;
}

}  // namespace holomera
