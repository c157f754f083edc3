#include <catch2/catch_amalgamated.hpp>

#include "holomera/fitting.hpp"

using namespace holomera;

TEST_CASE("single-particle fit recovers exact synthetic parameters") {
  const double ell = 1.0 / std::log(2.0), mc2 = 2.5;
  std::vector<std::pair<double, double>> pts;
  for (int rho = 2; rho <= 9; ++rho)
    pts.emplace_back(rho, 0.5 * mc2 * std::exp(rho / ell));
  const FitResult r = fit_single_particle(pts);
  REQUIRE(r.param("lAdS_inv") == Catch::Approx(1.0 / ell).margin(1e-10));
  REQUIRE(r.param("mc2") == Catch::Approx(mc2).margin(1e-9));
  REQUIRE(r.sigma("lAdS_inv") < 1e-9);
  REQUIRE(r.residual < 1e-9);
  REQUIRE(r.window_lo == 2.0);
  REQUIRE(r.window_hi == 9.0);
  REQUIRE_THROWS_AS(r.param("nope"), ParameterError);
}

TEST_CASE("single-particle fit input validation") {
  std::vector<std::pair<double, double>> few = {{2, 1.0}, {3, 2.0}, {4, 4.0}};
  REQUIRE_THROWS_AS(fit_single_particle(few), FitError);
  std::vector<std::pair<double, double>> neg = {
      {2, 1.0}, {3, -2.0}, {4, 4.0}, {5, 8.0}};
  REQUIRE_THROWS_AS(fit_single_particle(neg), FitError);
}

TEST_CASE("tail fit recovers exact synthetic parameters") {
  const double ell = 1.4, C1 = 0.08, C2 = 13.6;
  std::vector<std::pair<double, double>> pts;
  for (int d = 3; d <= 9; ++d)
    pts.emplace_back(d, C1 - C2 * std::exp(-d / ell));
  const FitResult r = fit_tail(pts, ell);
  REQUIRE(r.param("C1") == Catch::Approx(C1).margin(1e-10));
  REQUIRE(r.param("C2") == Catch::Approx(C2).margin(1e-9));
  REQUIRE_THROWS_AS(fit_tail(pts, 0.0), FitError);
  REQUIRE_THROWS_AS(fit_tail({{1.0, 2.0}}, ell), FitError);
}

TEST_CASE("W fit recovers exact synthetic parameters") {
  const double ell = 1.0 / std::log(2.0);
  const double A = 0.08, B = -3.4, C = 25.0, D = -7.9;
  std::vector<std::pair<double, double>> pts;
  for (int d = 1; d <= 10; ++d) {
    const double x = static_cast<double>(d);
    pts.emplace_back(x, A + 4.0 * B * std::exp(-x / ell) +
                            2.0 * C * std::exp(-1.5 * x / ell) +
                            6.0 * D * std::exp(-2.0 * x / ell));
  }
  const FitResult r = fit_W(pts, ell);
  REQUIRE(r.param("A") == Catch::Approx(A).margin(1e-8));
  REQUIRE(r.param("B") == Catch::Approx(B).margin(1e-8));
  REQUIRE(r.param("C") == Catch::Approx(C).margin(1e-7));
  REQUIRE(r.param("D") == Catch::Approx(D).margin(1e-7));
}

TEST_CASE("noisy synthetic data yields honest uncertainties") {
  const double ell = 1.0;
  std::vector<std::pair<double, double>> pts;
  // Deterministic zig-zag perturbation of magnitude 0.01.
  for (int d = 1; d <= 12; ++d)
    pts.emplace_back(d, 1.0 - 2.0 * std::exp(-d / ell) +
                            (d % 2 == 0 ? 0.01 : -0.01));
  const FitResult r = fit_tail(pts, ell);
  REQUIRE(r.sigma("C1") > 1e-4);
  REQUIRE(r.param("C1") == Catch::Approx(1.0).margin(0.05));
  REQUIRE(r.residual > 0.01);
}

TEST_CASE("degenerate design matrices are rejected") {
  // All abscissae equal: the two tail columns are linearly dependent.
  std::vector<std::pair<double, double>> pts = {
      {3.0, 1.0}, {3.0, 1.1}, {3.0, 0.9}};
  REQUIRE_THROWS_AS(fit_tail(pts, 1.0), FitError);
}

TEST_CASE("fit JSON carries model, params, sigmas, and window") {
  std::vector<std::pair<double, double>> pts;
  for (int d = 1; d <= 6; ++d) pts.emplace_back(d, 2.0 - std::exp(-d / 1.0));
  const std::string js = fit_tail(pts, 1.0).to_json();
  REQUIRE(js.find("\"model\":\"tail\"") != std::string::npos);
  REQUIRE(js.find("\"C1\":") != std::string::npos);
  REQUIRE(js.find("\"C2\":") != std::string::npos);
  REQUIRE(js.find("\"sigmas\"") != std::string::npos);
  REQUIRE(js.find("\"window\":[1,6]") != std::string::npos);
}

TEST_CASE("collapse quality separates collapsing and rigid families") {
  const std::vector<double> base = {-8.0, -4.0, -2.0, -1.0};
  std::vector<std::vector<double>> fam;
  std::vector<double> norms;
  for (double s : {1.0, 2.0, 4.0}) {
    std::vector<double> c;
    for (double v : base) c.push_back(s * v);
    fam.push_back(c);
    norms.push_back(s);
  }
  // Perfect collapse: scaled curves with matching normalizers.
  REQUIRE(collapse_quality(fam, norms) < 1e-12);
  // Unit normalizers change nothing, so the ratio is one.
  REQUIRE(collapse_quality(fam, {1.0, 1.0, 1.0}) ==
          Catch::Approx(1.0).margin(1e-12));
  // Identical curves have zero raw spread: defined as zero.
  REQUIRE(collapse_quality({base, base}, {1.0, 2.0}) == 0.0);
}

TEST_CASE("collapse quality input validation") {
  const std::vector<double> a = {1.0, 2.0}, b = {1.0, 2.0, 3.0};
  REQUIRE_THROWS_AS(collapse_quality({a}, {1.0}), FitError);
  REQUIRE_THROWS_AS(collapse_quality({a, b}, {1.0, 1.0}), FitError);
  REQUIRE_THROWS_AS(collapse_quality({a, a}, {1.0}), FitError);
  REQUIRE_THROWS_AS(collapse_quality({a, a}, {1.0, 0.0}), FitError);
}
