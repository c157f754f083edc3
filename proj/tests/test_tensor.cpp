#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "holomera/gates.hpp"
#include "holomera/tensor.hpp"

using namespace holomera;

namespace {

Tensor random_tensor(std::vector<std::int64_t> shape, unsigned seed) {
  Tensor t(std::move(shape));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& x : t.data) x = cplx(dist(rng), dist(rng));
  return t;
}

// Brute-force contraction over explicit multi-indices.
Tensor naive_contract(const Tensor& a, const Tensor& b,
                      const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> ca(static_cast<std::size_t>(a.rank()), 0),
      cb(static_cast<std::size_t>(b.rank()), 0);
  for (const auto& [la, lb] : pairs) {
    ca[static_cast<std::size_t>(la)] = 1;
    cb[static_cast<std::size_t>(lb)] = 1;
  }
  std::vector<int> fa, fb;
  for (int i = 0; i < a.rank(); ++i)
    if (!ca[static_cast<std::size_t>(i)]) fa.push_back(i);
  for (int i = 0; i < b.rank(); ++i)
    if (!cb[static_cast<std::size_t>(i)]) fb.push_back(i);
  std::vector<std::int64_t> rshape;
  for (int i : fa) rshape.push_back(a.shape[static_cast<std::size_t>(i)]);
  for (int i : fb) rshape.push_back(b.shape[static_cast<std::size_t>(i)]);
  Tensor r(rshape);
  const auto sa = a.strides(), sb = b.strides(), sr = r.strides();
  auto unflatten = [](std::int64_t flat, const std::vector<std::int64_t>& sh) {
    std::vector<std::int64_t> idx(sh.size());
    for (std::size_t i = sh.size(); i-- > 0;) {
      idx[i] = flat % sh[i];
      flat /= sh[i];
    }
    return idx;
  };
  std::int64_t nc = 1;
  for (const auto& [la, lb] : pairs)
    nc *= a.shape[static_cast<std::size_t>(la)];
  std::vector<std::int64_t> cshape;
  for (const auto& [la, lb] : pairs)
    cshape.push_back(a.shape[static_cast<std::size_t>(la)]);
  for (std::int64_t rf = 0; rf < r.size(); ++rf) {
    const auto ridx = unflatten(rf, r.shape);
    cplx acc(0.0, 0.0);
    for (std::int64_t cf = 0; cf < nc; ++cf) {
      const auto cidx = unflatten(cf, cshape);
      std::int64_t offa = 0, offb = 0;
      for (std::size_t i = 0; i < fa.size(); ++i)
        offa += ridx[i] * sa[static_cast<std::size_t>(fa[i])];
      for (std::size_t i = 0; i < fb.size(); ++i)
        offb += ridx[fa.size() + i] * sb[static_cast<std::size_t>(fb[i])];
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        offa += cidx[i] * sa[static_cast<std::size_t>(pairs[i].first)];
        offb += cidx[i] * sb[static_cast<std::size_t>(pairs[i].second)];
      }
      acc += a.data[static_cast<std::size_t>(offa)] *
             b.data[static_cast<std::size_t>(offb)];
    }
    r.data[static_cast<std::size_t>(rf)] = acc;
  }
  return r;
}

double diff(const Tensor& a, const Tensor& b) {
  REQUIRE(a.shape == b.shape);
  double d = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    d = std::max(d, std::abs(a.data[i] - b.data[i]));
  return d;
}

}  // namespace

TEST_CASE("contract matches the naive multi-index oracle") {
  const Tensor a = random_tensor({2, 3, 4}, 11);
  const Tensor b = random_tensor({4, 2, 5}, 22);
  const std::vector<std::pair<int, int>> pairs{{2, 0}, {0, 1}};
  REQUIRE(diff(contract(a, b, pairs), naive_contract(a, b, pairs)) < 1e-13);

  const Tensor c = random_tensor({3, 3, 2}, 33);
  const Tensor d = random_tensor({2, 3}, 44);
  const std::vector<std::pair<int, int>> pairs2{{1, 1}, {2, 0}};
  REQUIRE(diff(contract(c, d, pairs2), naive_contract(c, d, pairs2)) < 1e-13);
}

TEST_CASE("contract with no common legs is an outer product") {
  const Tensor a = random_tensor({2, 3}, 5);
  const Tensor b = random_tensor({4}, 6);
  const Tensor r = contract(a, b, {});
  REQUIRE(r.shape == std::vector<std::int64_t>{2, 3, 4});
  REQUIRE(diff(r, naive_contract(a, b, {})) < 1e-13);
}

TEST_CASE("contract is bilinear") {
  const Tensor a = random_tensor({3, 4}, 1);
  Tensor a2 = random_tensor({3, 4}, 2);
  const Tensor b = random_tensor({4, 3}, 3);
  Tensor sum = a;
  for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += a2.data[i];
  const std::vector<std::pair<int, int>> pairs{{1, 0}};
  Tensor lhs = contract(sum, b, pairs);
  const Tensor r1 = contract(a, b, pairs);
  const Tensor r2 = contract(a2, b, pairs);
  for (std::size_t i = 0; i < lhs.data.size(); ++i)
    lhs.data[i] -= r1.data[i] + r2.data[i];
  double d = 0.0;
  for (const auto& x : lhs.data) d = std::max(d, std::abs(x));
  REQUIRE(d < 1e-13);
}

TEST_CASE("dagger of a matrix tensor is the conjugate transpose") {
  const GateSet g = analytic_gates();
  const Tensor t = mat_to_tensor(g.w);
  const Tensor td = dagger(t, {0}, {1});
  REQUIRE((tensor_to_mat(td) - Mat(g.w.adjoint())).norm() < 1e-14);
  // Involution.
  const Tensor tdd = dagger(td, {0}, {1});
  REQUIRE((tensor_to_mat(tdd) - g.w).norm() < 1e-14);
}

TEST_CASE("contract rejects malformed leg lists") {
  const Tensor a = random_tensor({2, 3}, 7);
  const Tensor b = random_tensor({3, 2}, 8);
  REQUIRE_THROWS_AS(contract(a, b, {{0, 0}}), ContractError);   // 2 vs 3
  REQUIRE_THROWS_AS(contract(a, b, {{5, 0}}), ContractError);   // out of range
  REQUIRE_THROWS_AS(contract(a, b, {{1, 0}, {1, 1}}), ContractError);
  REQUIRE_THROWS_AS(dagger(a, {0}, {0}), ContractError);
}

TEST_CASE("finite flags NaN payloads") {
  Tensor t({2, 2});
  REQUIRE(t.finite());
  t.data[1] = cplx(std::nan(""), 0.0);
  REQUIRE_FALSE(t.finite());
}
