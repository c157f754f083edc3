#include <catch2/catch_amalgamated.hpp>

#include "holomera/engine.hpp"
#include "holomera/statevector.hpp"

using namespace holomera;

TEST_CASE("causal-cone energies match the statevector oracle at N = 8") {
  const MeraNetwork net = build_network(3, analytic_gates());
  const std::vector<std::vector<BulkCoordinate>> cases = {
      {},
      {{2, 0}},
      {{2, 3}},
      {{2, 1}, {2, 2}},
      {{2, 0}, {2, 2}},
  };
  const double pref = ChainHamiltonian(8).prefactor();
  for (const auto& flips : cases) {
    Evaluator ev(net, flips);
    REQUIRE(pref * ev.sum_h() ==
            Catch::Approx(oracle_energy(net, flips)).margin(1e-10));
  }
}

TEST_CASE("causal-cone energies match the oracle at N = 16 with mixed radii") {
  const MeraNetwork net = build_network(4, analytic_gates());
  const std::vector<std::vector<BulkCoordinate>> cases = {
      {{3, 5}},
      {{2, 0}, {3, 0}},
      {{2, 1}, {3, 6}},
  };
  const double pref = ChainHamiltonian(16).prefactor();
  for (const auto& flips : cases) {
    Evaluator ev(net, flips);
    REQUIRE(pref * ev.sum_h() ==
            Catch::Approx(oracle_energy(net, flips)).margin(1e-10));
  }
}

TEST_CASE("identity expectation is one and RDMs have unit trace") {
  const MeraNetwork net = build_network(4, analytic_gates());
  REQUIRE(expectation(net, {{3, 2}}, Mat::Identity(4, 4), 2, 5) ==
          Catch::Approx(1.0).margin(1e-12));
  Evaluator ev(net, {{2, 1}});
  const Mat& r = ev.rdm(net.D, {3, 3});
  REQUIRE(std::abs(r.trace() - cplx(1.0, 0.0)) < 1e-12);
  REQUIRE((r - Mat(r.adjoint())).norm() < 1e-12);
}

TEST_CASE("local expectations match the dense state") {
  const MeraNetwork net = build_network(3, analytic_gates());
  const Vec psi = boundary_state(net, {{2, 2}});
  Evaluator ev(net, {{2, 2}});
  for (std::int64_t s = 0; s < 8; ++s) {
    Vec out = Vec::Zero(psi.size());
    apply_local(pauli_Z(), 1, s, 8, psi, out);
    REQUIRE(ev.expect_local(pauli_Z(), 1, s) ==
            Catch::Approx(std::real(psi.dot(out))).margin(1e-11));
  }
}

TEST_CASE("two-point correlator matches the dense state") {
  const MeraNetwork net = build_network(3, analytic_gates());
  const Vec psi = boundary_state(net);
  auto dense_corr = [&](const Mat& A, int ka, const Mat& B, int kb,
                        std::int64_t r) {
    Vec oa = Vec::Zero(psi.size()), ob = Vec::Zero(psi.size()),
        oab = Vec::Zero(psi.size());
    apply_local(A, ka, 0, 8, psi, oa);
    apply_local(B, kb, r, 8, psi, ob);
    apply_local(B, kb, r, 8, psi, oab);
    Vec tmp = Vec::Zero(psi.size());
    apply_local(A, ka, 0, 8, oab, tmp);
    return std::real(psi.dot(tmp)) -
           std::real(psi.dot(oa)) * std::real(psi.dot(ob));
  };
  for (std::int64_t r : {1, 2, 3, 4}) {
    REQUIRE(two_point(net, pauli_X(), 1, pauli_X(), 1, r) ==
            Catch::Approx(dense_corr(pauli_X(), 1, pauli_X(), 1, r))
                .margin(1e-10));
  }
  REQUIRE(two_point(net, epsilon_proxy_op(), 3, epsilon_proxy_op(), 3, 4) ==
          Catch::Approx(dense_corr(epsilon_proxy_op(), 3, epsilon_proxy_op(),
                                   3, 4))
              .margin(1e-10));
}

TEST_CASE("shared-ground delegation changes nothing") {
  const MeraNetwork net = build_network(4, analytic_gates());
  auto ground = std::make_shared<Evaluator>(net);
  Evaluator with(net, {{3, 4}}, ground);
  Evaluator solo(net, {{3, 4}});
  REQUIRE(with.sum_h() == Catch::Approx(solo.sum_h()).margin(1e-12));
}

TEST_CASE("engine contract violations throw") {
  const MeraNetwork net = build_network(3, analytic_gates());
  REQUIRE_THROWS_AS(Evaluator(net, {{2, 1}, {2, 1}}), ContractError);
  REQUIRE_THROWS_AS(Evaluator(net, {{5, 0}}), IndexError);
  Mat nonherm = Mat::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  REQUIRE_THROWS_AS(expectation(net, {}, nonherm, 1, 0), ContractError);
  REQUIRE_THROWS_AS(
      expectation(net, {}, Mat::Identity(128, 128), 7, 0), CapacityError);
}
