#include <catch2/catch_amalgamated.hpp>

#include "holomera/engine.hpp"
#include "holomera/gates.hpp"

using namespace holomera;

TEST_CASE("analytic gates are unitary with isometric slices") {
  const GateSet g = analytic_gates();
  const Mat I4 = Mat::Identity(4, 4);
  const Mat I2 = Mat::Identity(2, 2);
  REQUIRE((g.w.adjoint() * g.w - I4).norm() < 1e-12);
  REQUIRE((g.u * g.u.adjoint() - I4).norm() < 1e-12);
  REQUIRE((g.v.adjoint() * g.v - I2).norm() < 1e-12);
  REQUIRE((g.vt.adjoint() * g.vt - I2).norm() < 1e-12);
  REQUIRE((g.v.adjoint() * g.vt).norm() < 1e-12);
}

TEST_CASE("u entry check") {
  const GateSet g = analytic_gates();
  const Mat ud = g.u.adjoint();
  REQUIRE(std::abs(ud(0, 0) - cplx(std::sqrt(3.0) / 2.0, 0.0)) < 1e-14);
}

TEST_CASE("symmetric-gauge identities") {
  const GateSet g = analytic_gates();
  const Mat ZZ = op2(pauli_Z(), pauli_Z());
  REQUIRE((ZZ * g.w * ZZ - g.w).norm() < 1e-12);
  const Mat YX = op2(pauli_Y(), pauli_X());
  REQUIRE((YX * g.v * pauli_Y() - g.vt).norm() < 1e-12);
}

TEST_CASE("hologron gauge fixes v and rotates vt") {
  const GateSet g = analytic_gates();
  HologronGauge gg{0.3, -0.7, 0.4, 0.0};
  const Mat G = gauge_matrix(g, gg);
  REQUIRE((G * G.adjoint() - Mat::Identity(4, 4)).norm() < 1e-12);
  REQUIRE((G * g.v - g.v).norm() < 1e-12);
  const GateSet g2 = gauge_transform(g, gg);
  REQUIRE((g2.v - g.v).norm() < 1e-12);
  REQUIRE((g2.v.adjoint() * g2.vt).norm() < 1e-12);
  HologronGauge zero;
  const GateSet g3 = gauge_transform(g, zero);
  REQUIRE((g3.w - g.w).norm() < 1e-12);
}
