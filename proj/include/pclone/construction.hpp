#pragma once

#include <set>
#include <string>
#include <vector>

#include "pclone/circulant.hpp"
#include "pclone/partial_fn.hpp"

namespace pclone {

/// n(k) = k(k+1) + 1, defined for even k >= 4.
inline std::size_t n_of(std::size_t k) {
  if (k < 4 || k % 2 != 0)
    throw invalid_input("k = " + std::to_string(k) + " rejected: the construction needs an even k >= 4");
  return k * (k + 1) + 1;
}

/// c_1 = 0 1 1 0 1 0 1 ... 0 1 of length n(k).
inline ValueTuple build_c1(std::size_t k) {
  const std::size_t n = n_of(k);
  std::vector<value_t> e{0, 1, 1};
  while (e.size() < n) {
    e.push_back(0);
    e.push_back(1);
  }
  return ValueTuple(std::move(e));
}

/// c'_1 = 0 1^(k+1) (0 1^k)^(k-1), of length n(k) with exactly k zeros.
inline ValueTuple build_c1_down(std::size_t k) {
  const std::size_t n = n_of(k);
  std::vector<value_t> e{0};
  e.insert(e.end(), k + 1, 1);
  for (std::size_t r = 0; r + 1 < k; ++r) {
    e.push_back(0);
    e.insert(e.end(), k, 1);
  }
  if (e.size() != n) throw invariant_violation("c'_1 has length " + std::to_string(e.size()));
  return ValueTuple(std::move(e));
}

/// Circulant matrix whose column j is the first column rotated down j-1
/// times: entry (i, j) = first[(i - j) mod n], 0-based.
inline RowMatrix build_matrix(const ValueTuple& first_col) {
  const std::size_t n = first_col.arity();
  RowMatrix rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<value_t> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = first_col[(i + n - j) % n];
    rows.emplace_back(std::move(r), first_col.kappa());
  }
  return rows;
}

inline bool share_zero(const ValueTuple& a, const ValueTuple& b) {
  for (std::size_t p = 0; p < a.arity(); ++p)
    if (a[p] == 0 && b[p] == 0) return true;
  return false;
}

struct Remark1Report {
  bool holds = false;            // rows at circular distance >= 2 share a zero
  bool converse_holds = false;   // rows at circular distance 1 share no zero
  bool self_pair_shares_zero = false;
};

inline Remark1Report validate_remark1(std::size_t k) {
  const auto up = build_matrix(build_c1(k));
  const std::size_t n = up.size();
  Remark1Report rep{true, true, true};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = std::min((i + n - j) % n, (j + n - i) % n);
      const bool shared = share_zero(up[i], up[j]);
      if (d == 0 && !shared) rep.self_pair_shares_zero = false;
      if (d == 1 && shared) rep.converse_holds = false;
      if (d >= 2 && !shared) rep.holds = false;
    }
  return rep;
}

/// Every row of M_up shares a zero position with every row of M_down.
inline bool validate_remark2(std::size_t k) {
  const auto up = build_matrix(build_c1(k));
  const auto down = build_matrix(build_c1_down(k));
  for (const auto& r : up)
    for (const auto& s : down)
      if (!share_zero(r, s)) return false;
  return true;
}

/// The objects built for one even k >= 4.
struct ConstructionBundle {
  std::size_t k = 0;
  std::size_t n = 0;
  RowMatrix m_up;    // n x n, columns in S(n,1)
  RowMatrix m_down;  // n x n, columns in S(n,k)
  RowMatrix m;       // 2n x n: m_up over m_down
  RowMatrix l;       // 4n x n: m over its row-wise dual
  PartialFn f;       // 0 on m_up rows, 1 on m_down rows
  PartialFn g;       // f on m rows, 1 + f(u) on the dual of u
};

namespace detail {

// The cyclic-shift direction is pinned by the k = 4 columns c_2 and c_21.
inline void assert_shift_convention() {
  const auto m = build_matrix(build_c1(4));
  if (column(m, 1).to_string() != "101101010101010101010" || column(m, 20).to_string() != "110101010101010101010")
    throw invariant_violation("cyclic shift convention does not reproduce c_2 / c_n(k) for k = 4");
}

}  // namespace detail

inline ConstructionBundle build_bundle(std::size_t k) {
  detail::assert_shift_convention();
  ConstructionBundle b{k, n_of(k), {}, {}, {}, {}, PartialFn(n_of(k), 2), PartialFn(n_of(k), 2)};
  b.m_up = build_matrix(build_c1(k));
  b.m_down = build_matrix(build_c1_down(k));

  const auto s1 = CirculantSpec::S(b.n, 1);
  const auto sk = CirculantSpec::S(b.n, k);
  const auto rk = CirculantSpec::R(b.n, k);
  for (std::size_t j = 0; j < b.n; ++j) {
    if (!member(s1, column(b.m_up, j)))
      throw invariant_violation("column " + std::to_string(j + 1) + " of M_up is not in " + s1.to_string());
    if (!member(sk, column(b.m_down, j)))
      throw invariant_violation("column " + std::to_string(j + 1) + " of M_down is not in " + sk.to_string());
  }

  b.m = b.m_up;
  b.m.insert(b.m.end(), b.m_down.begin(), b.m_down.end());
  for (std::size_t j = 0; j < b.n; ++j)
    if (!member(rk, column(b.m, j)))
      throw invariant_violation("column " + std::to_string(j + 1) + " of M_k is not in " + rk.to_string());

  b.l = b.m;
  for (const auto& r : b.m) b.l.push_back(dual_tuple(r));
  std::set<ValueTuple> seen;
  for (std::size_t i = 0; i < b.l.size(); ++i)
    if (!seen.insert(b.l[i]).second)
      throw invariant_violation("row " + std::to_string(i + 1) + " of L_k repeats an earlier row");

  PartialFn::Graph fg, gg;
  for (std::size_t i = 0; i < b.m.size(); ++i) {
    const value_t v = i < b.n ? 0 : 1;
    fg.emplace(b.m[i], v);
    gg.emplace(b.m[i], v);
    gg.emplace(dual_tuple(b.m[i]), static_cast<value_t>(1 - v));
  }
  b.f = PartialFn(b.n, 2, std::move(fg));
  b.g = PartialFn(b.n, 2, std::move(gg));
  if (b.f.domain_size() != 2 * b.n || b.g.domain_size() != 4 * b.n)
    throw invariant_violation("f_k / g_k domain sizes differ from 2n / 4n");
  return b;
}

}  // namespace pclone
