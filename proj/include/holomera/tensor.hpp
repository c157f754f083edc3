#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "holomera/common.hpp"

namespace holomera {

// Dense multi-index complex tensor with row-major storage.  All physical legs
// in this artifact have dimension 2; matricized k-site operators reuse the
// same type with legs of dimension 2^k.
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<cplx> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> sh) : shape(std::move(sh)) {
    data.assign(static_cast<std::size_t>(size()), cplx(0.0, 0.0));
  }
  Tensor(std::vector<std::int64_t> sh, std::vector<cplx> d)
      : shape(std::move(sh)), data(std::move(d)) {
    if (static_cast<std::int64_t>(data.size()) != size())
      throw ContractError("tensor data length does not match shape");
  }

  std::int64_t size() const {
    std::int64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
  int rank() const { return static_cast<int>(shape.size()); }

  // Row-major strides: last leg varies fastest.
  std::vector<std::int64_t> strides() const {
    std::vector<std::int64_t> st(shape.size());
    std::int64_t acc = 1;
    for (int i = rank() - 1; i >= 0; --i) {
      st[static_cast<std::size_t>(i)] = acc;
      acc *= shape[static_cast<std::size_t>(i)];
    }
    return st;
  }

  bool finite() const {
    for (const auto& z : data)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }
};

// Pairwise contraction: sums over the paired legs; the result carries the
// uncontracted legs of a (in declaration order) followed by those of b.
inline Tensor contract(const Tensor& a, const Tensor& b,
                       const std::vector<std::pair<int, int>>& pairs) {
  const int ra = a.rank(), rb = b.rank();
  std::vector<char> ca(static_cast<std::size_t>(ra), 0),
      cb(static_cast<std::size_t>(rb), 0);
  for (const auto& [la, lb] : pairs) {
    if (la < 0 || la >= ra || lb < 0 || lb >= rb)
      throw ContractError("contraction leg out of range");
    if (ca[static_cast<std::size_t>(la)] || cb[static_cast<std::size_t>(lb)])
      throw ContractError("duplicate leg in contraction pairs");
    if (a.shape[static_cast<std::size_t>(la)] !=
        b.shape[static_cast<std::size_t>(lb)])
      throw ContractError("contraction dimension mismatch");
    ca[static_cast<std::size_t>(la)] = 1;
    cb[static_cast<std::size_t>(lb)] = 1;
  }

  std::vector<int> freea, freeb;
  for (int i = 0; i < ra; ++i)
    if (!ca[static_cast<std::size_t>(i)]) freea.push_back(i);
  for (int i = 0; i < rb; ++i)
    if (!cb[static_cast<std::size_t>(i)]) freeb.push_back(i);

  std::vector<std::int64_t> rshape;
  for (int i : freea) rshape.push_back(a.shape[static_cast<std::size_t>(i)]);
  for (int i : freeb) rshape.push_back(b.shape[static_cast<std::size_t>(i)]);
  Tensor r(rshape);

  const auto sa = a.strides(), sb = b.strides();
  std::int64_t nfa = 1, nfb = 1, nc = 1;
  for (int i : freea) nfa *= a.shape[static_cast<std::size_t>(i)];
  for (int i : freeb) nfb *= b.shape[static_cast<std::size_t>(i)];
  for (const auto& [la, lb] : pairs) {
    (void)lb;
    nc *= a.shape[static_cast<std::size_t>(la)];
  }

  // Offset tables enumerate all free/contracted multi-indices.
  auto offsets = [](std::int64_t count, const std::vector<int>& legs,
                    const std::vector<std::int64_t>& shape,
                    const std::vector<std::int64_t>& strides) {
    std::vector<std::int64_t> off(static_cast<std::size_t>(count), 0);
    std::int64_t rep = 1;
    for (int k = static_cast<int>(legs.size()) - 1; k >= 0; --k) {
      const int leg = legs[static_cast<std::size_t>(k)];
      const std::int64_t d = shape[static_cast<std::size_t>(leg)];
      const std::int64_t st = strides[static_cast<std::size_t>(leg)];
      for (std::int64_t i = 0; i < count; ++i)
        off[static_cast<std::size_t>(i)] += ((i / rep) % d) * st;
      rep *= d;
    }
    return off;
  };

  std::vector<int> cla, clb;
  for (const auto& [la, lb] : pairs) {
    cla.push_back(la);
    clb.push_back(lb);
  }
  // Contracted offsets must enumerate a and b indices in lockstep.
  std::vector<std::int64_t> coa(static_cast<std::size_t>(nc), 0),
      cob(static_cast<std::size_t>(nc), 0);
  {
    std::int64_t rep = 1;
    for (int k = static_cast<int>(cla.size()) - 1; k >= 0; --k) {
      const int la = cla[static_cast<std::size_t>(k)];
      const int lb = clb[static_cast<std::size_t>(k)];
      const std::int64_t d = a.shape[static_cast<std::size_t>(la)];
      for (std::int64_t i = 0; i < nc; ++i) {
        const std::int64_t idx = (i / rep) % d;
        coa[static_cast<std::size_t>(i)] +=
            idx * sa[static_cast<std::size_t>(la)];
        cob[static_cast<std::size_t>(i)] +=
            idx * sb[static_cast<std::size_t>(lb)];
      }
      rep *= d;
    }
  }
  const auto foa = offsets(nfa, freea, a.shape, sa);
  const auto fob = offsets(nfb, freeb, b.shape, sb);

  for (std::int64_t ia = 0; ia < nfa; ++ia) {
    for (std::int64_t ib = 0; ib < nfb; ++ib) {
      cplx acc(0.0, 0.0);
      for (std::int64_t ic = 0; ic < nc; ++ic)
        acc += a.data[static_cast<std::size_t>(
                   foa[static_cast<std::size_t>(ia)] +
                   coa[static_cast<std::size_t>(ic)])] *
               b.data[static_cast<std::size_t>(
                   fob[static_cast<std::size_t>(ib)] +
                   cob[static_cast<std::size_t>(ic)])];
      r.data[static_cast<std::size_t>(ia * nfb + ib)] = acc;
    }
  }
  return r;
}

// Conjugate transpose of a tensor viewed as a map out-legs <- in-legs.  The
// result carries the old in-legs first (as its out-legs) then the old
// out-legs; dagger(dagger(t)) is elementwise t for the same partition sizes.
inline Tensor dagger(const Tensor& a, const std::vector<int>& out_legs,
                     const std::vector<int>& in_legs) {
  const int r = a.rank();
  std::vector<char> seen(static_cast<std::size_t>(r), 0);
  for (int l : out_legs) {
    if (l < 0 || l >= r || seen[static_cast<std::size_t>(l)])
      throw ContractError("bad leg partition in dagger");
    seen[static_cast<std::size_t>(l)] = 1;
  }
  for (int l : in_legs) {
    if (l < 0 || l >= r || seen[static_cast<std::size_t>(l)])
      throw ContractError("bad leg partition in dagger");
    seen[static_cast<std::size_t>(l)] = 1;
  }
  if (static_cast<int>(out_legs.size() + in_legs.size()) != r)
    throw ContractError("dagger partition must cover all legs");

  std::vector<std::int64_t> rshape;
  for (int l : in_legs) rshape.push_back(a.shape[static_cast<std::size_t>(l)]);
  for (int l : out_legs) rshape.push_back(a.shape[static_cast<std::size_t>(l)]);
  Tensor out(rshape);

  const auto sa = a.strides();
  const auto so = out.strides();
  std::vector<std::int64_t> perm_src;  // source stride per result leg
  for (int l : in_legs) perm_src.push_back(sa[static_cast<std::size_t>(l)]);
  for (int l : out_legs) perm_src.push_back(sa[static_cast<std::size_t>(l)]);

  const std::int64_t n = out.size();
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t src = 0, rem = i;
    for (int k = 0; k < out.rank(); ++k) {
      const std::int64_t idx = rem / so[static_cast<std::size_t>(k)];
      rem %= so[static_cast<std::size_t>(k)];
      src += idx * perm_src[static_cast<std::size_t>(k)];
    }
    out.data[static_cast<std::size_t>(i)] =
        std::conj(a.data[static_cast<std::size_t>(src)]);
  }
  return out;
}

}  // namespace holomera
