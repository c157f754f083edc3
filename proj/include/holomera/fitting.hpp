#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holomera/common.hpp"

// Parameter extraction: the single-particle exponential fit (l_AdS, mc^2),
// the C1/C2 tail fit, the four-parameter W fit with fixed exponents and
// multiplicities, and the collapse-quality metric.  All fits are linear
// least squares with covariance-diagonal 1-sigma uncertainties.

namespace holomera {

struct FitResult {
  std::string model;
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> sigmas;
  double residual = 0.0;  // norm of y - X p
  double window_lo = 0.0;
  double window_hi = 0.0;

  double param(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return params[i];
    throw ParameterError("no fit parameter named " + name);
  }
  double sigma(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return sigmas[i];
    throw ParameterError("no fit parameter named " + name);
  }

  std::string to_json() const {
    auto num = [](double x) {
      char b[40];
      std::snprintf(b, sizeof(b), "%.17g", x);
      return std::string(b);
    };
    std::string s = "{\"model\":\"" + model + "\",\"params\":{";
    for (std::size_t i = 0; i < names.size(); ++i)
      s += (i ? "," : "") + ("\"" + names[i] + "\":" + num(params[i]));
    s += "},\"sigmas\":{";
    for (std::size_t i = 0; i < names.size(); ++i)
      s += (i ? "," : "") + ("\"" + names[i] + "\":" + num(sigmas[i]));
    s += "},\"window\":[" + num(window_lo) + "," + num(window_hi) + "]";
    s += ",\"residual\":" + num(residual) + "}";
    return s;
  }
};

namespace detail {

inline FitResult linear_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            std::vector<std::string> names,
                            std::string model) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n < p) throw FitError("fewer points than fit parameters");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(p - 1) <= 0.0 || sv(0) / sv(p - 1) > 1e12)
    throw FitError("ill-conditioned design matrix");
  const Eigen::VectorXd beta = svd.solve(y);
  const double resid = (y - X * beta).norm();
  const Eigen::Index dof = n - p;
  const double s2 = dof > 0 ? resid * resid / static_cast<double>(dof) : 0.0;
  // cov = s2 * V diag(1/sv^2) V^T
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k)
    cov += svd.matrixV().col(k) * svd.matrixV().col(k).transpose() /
           (sv(k) * sv(k));
  cov *= s2;
  FitResult r;
  r.model = std::move(model);
  r.names = std::move(names);
  for (Eigen::Index i = 0; i < p; ++i) {
    r.params.push_back(beta(i));
    r.sigmas.push_back(std::sqrt(std::max(0.0, cov(i, i))));
  }
  r.residual = resid;
  return r;
}

}  // namespace detail

// log E = a + rho/l regression on (rho, E_1h) points; reports the inverse
// AdS radius and mc^2 = 2 e^a with propagated uncertainties.
inline FitResult fit_single_particle(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4)
    throw FitError("single-particle fit needs at least 4 points");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(points.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].second <= 0.0)
      throw FitError("non-positive energy in the fit window");
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = points[i].first;
    y(static_cast<Eigen::Index>(i)) = std::log(points[i].second);
  }
  FitResult lin = detail::linear_fit(X, y, {"a", "slope"}, "1p");
  const double a = lin.params[0], b = lin.params[1];
  FitResult r;
  r.model = "1p";
  r.names = {"lAdS_inv", "mc2"};
  r.params = {b, 2.0 * std::exp(a)};
  r.sigmas = {lin.sigmas[1], 2.0 * std::exp(a) * lin.sigmas[0]};
  r.residual = lin.residual;
  r.window_lo = points.front().first;
  r.window_hi = points.back().first;
  return r;
}

// V(d) = C1 - C2 e^{-d/l} on collapsed (distance, V) points; l fixed from
// the single-particle fit, never co-fit.
inline FitResult fit_tail(const std::vector<std::pair<double, double>>& points,
                          double ell) {
  if (!(ell > 0.0)) throw FitError("tail fit needs a positive length scale");
  if (points.size() < 2) throw FitError("tail fit needs at least 2 points");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(points.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = -std::exp(-points[i].first / ell);
    y(static_cast<Eigen::Index>(i)) = points[i].second;
  }
  FitResult r = detail::linear_fit(X, y, {"C1", "C2"}, "tail");
  r.window_lo = points.front().first;
  r.window_hi = points.back().first;
  return r;
}

// W(d) = A + 4B e^{-d/l} + 2C e^{-1.5 d/l} + 6D e^{-2 d/l}: the dimension
// groups Delta = {1, 2, 2.5, 3} with their multiplicities {1, 4, 2, 6}.
inline FitResult fit_W(const std::vector<std::pair<double, double>>& points,
                       double ell) {
  if (!(ell > 0.0)) throw FitError("W fit needs a positive length scale");
  if (points.size() < 4) throw FitError("W fit needs at least 4 points");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(points.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = points[i].first;
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = 4.0 * std::exp(-d / ell);
    X(static_cast<Eigen::Index>(i), 2) = 2.0 * std::exp(-1.5 * d / ell);
    X(static_cast<Eigen::Index>(i), 3) = 6.0 * std::exp(-2.0 * d / ell);
    y(static_cast<Eigen::Index>(i)) = points[i].second;
  }
  FitResult r = detail::linear_fit(X, y, {"A", "B", "C", "D"}, "W");
  r.window_lo = points.front().first;
  r.window_hi = points.back().first;
  return r;
}

// Ratio of relative RMS inter-curve spreads after vs before per-curve
// normalization; 0 for a perfect collapse, 1 when normalization does
// nothing, clamped above by 1.
inline double collapse_quality(const std::vector<std::vector<double>>& curves,
                               const std::vector<double>& normalizers) {
  if (curves.size() < 2)
    throw FitError("collapse quality needs at least 2 curves");
  if (normalizers.size() != curves.size())
    throw FitError("one normalizer per curve required");
  const std::size_t grid = curves.front().size();
  if (grid == 0) throw FitError("empty curves");
  for (const auto& c : curves)
    if (c.size() != grid) throw FitError("curves are on mismatched grids");
  for (double b : normalizers)
    if (b == 0.0) throw FitError("zero normalizer");

  auto rel_spread = [&](bool normalized) {
    double var_sum = 0.0, mag_sum = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
      double mean = 0.0, mean2 = 0.0;
      for (std::size_t c = 0; c < curves.size(); ++c) {
        const double v =
            normalized ? curves[c][i] / normalizers[c] : curves[c][i];
        mean += v;
        mean2 += v * v;
      }
      mean /= static_cast<double>(curves.size());
      mean2 /= static_cast<double>(curves.size());
      var_sum += std::max(0.0, mean2 - mean * mean);
      mag_sum += mean2;
    }
    if (mag_sum <= 0.0) return 0.0;
    return std::sqrt(var_sum / mag_sum);
  };

  const double raw = rel_spread(false);
  if (raw < 1e-14) return 0.0;  // already identical
  return std::min(1.0, rel_spread(true) / raw);
}

}  // namespace holomera
