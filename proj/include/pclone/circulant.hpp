#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pclone/fn_io.hpp"
#include "pclone/value_tuple.hpp"

namespace pclone {

using big_count = boost::multiprecision::cpp_int;

/// Circulant families over {0,1}:
///   S(n,k)     n-ary: every 0 at position i is followed (circularly) by k ones.
///   Sigma(n,k) 2n-ary: x in S(n,k) followed by its complement y.
///   R(n,k)     2n-ary: S(n,1) x S(n,k).
///   Rho(n,k)   4n-ary: x in R(n,k) followed by its complement.
enum class Family { S, Sigma, R, Rho };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::S: return "S";
    case Family::Sigma: return "sigma";
    case Family::R: return "R";
    case Family::Rho: return "rho";
  }
  return "?";
}

struct CirculantSpec {
  Family family = Family::S;
  std::size_t n = 0;
  std::size_t k = 0;

  CirculantSpec() = default;
  CirculantSpec(Family f, std::size_t n_, std::size_t k_) : family(f), n(n_), k(k_) {
    if (n < 3) throw invalid_input("circulant block length n must be at least 3");
    if (k < 1 || k >= n) throw invalid_input("circulant gap k must satisfy 1 <= k < n");
  }

  static CirculantSpec S(std::size_t n, std::size_t k) { return {Family::S, n, k}; }
  static CirculantSpec Sigma(std::size_t n, std::size_t k) { return {Family::Sigma, n, k}; }
  static CirculantSpec R(std::size_t n, std::size_t k) { return {Family::R, n, k}; }
  static CirculantSpec Rho(std::size_t n, std::size_t k) { return {Family::Rho, n, k}; }

  std::size_t arity() const noexcept {
    switch (family) {
      case Family::S: return n;
      case Family::Sigma:
      case Family::R: return 2 * n;
      case Family::Rho: return 4 * n;
    }
    return 0;
  }

  /// True for the families whose second half is the forced complement.
  bool paired() const noexcept { return family == Family::Sigma || family == Family::Rho; }

  std::string to_string() const {
    return std::string(pclone::to_string(family)) + ":n=" + std::to_string(n) + ",k=" + std::to_string(k);
  }

  friend bool operator==(const CirculantSpec&, const CirculantSpec&) = default;
};

/// Parses `S:n=21,k=1`, `sigma:n=5,k=2`, `R:n=5,k=2`, `rho:n=21,k=4` (family
/// names are case-insensitive).
inline CirculantSpec parse_spec(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw parse_error(1, "spec", "expected <family>:n=<n>,k=<k>");
  std::string fam(text.substr(0, colon));
  for (auto& c : fam) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  Family f;
  if (fam == "s") f = Family::S;
  else if (fam == "sigma") f = Family::Sigma;
  else if (fam == "r") f = Family::R;
  else if (fam == "rho") f = Family::Rho;
  else throw parse_error(1, "family", "unknown family '" + fam + "' (expected S, sigma, R, rho)");
  auto rest = text.substr(colon + 1);
  auto comma = rest.find(',');
  if (comma == std::string_view::npos) throw parse_error(1, "spec", "expected n=<n>,k=<k>");
  auto np = rest.substr(0, comma), kp = rest.substr(comma + 1);
  if (np.substr(0, 2) != "n=") throw parse_error(1, "n", "expected n=<n>");
  if (kp.substr(0, 2) != "k=") throw parse_error(1, "k", "expected k=<k>");
  auto n = detail::parse_uint(np.substr(2), 1, "n");
  auto k = detail::parse_uint(kp.substr(2), 1, "k");
  try {
    return CirculantSpec(f, n, k);
  } catch (const invalid_input& e) {
    throw parse_error(1, "spec", e.what());
  }
}

namespace detail {

/// x[first, first+n) in S(n,k); indices are taken modulo n within the block.
inline bool block_in_S(std::span<const value_t> x, std::size_t first, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[first + i] != 0) continue;
    for (std::size_t j = 1; j <= k; ++j)
      if (x[first + (i + j) % n] != 1) return false;
  }
  return true;
}

inline bool is_complement(std::span<const value_t> x, std::size_t first, std::size_t second, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (x[first + i] == x[second + i]) return false;
  return true;
}

}  // namespace detail

inline bool member(const CirculantSpec& spec, const ValueTuple& t) {
  if (t.arity() != spec.arity() || t.kappa() != 2)
    throw invalid_input("member: tuple arity " + std::to_string(t.arity()) + " does not match " + spec.to_string());
  const auto x = t.entries();
  const std::size_t n = spec.n, k = spec.k;
  switch (spec.family) {
    case Family::S: return detail::block_in_S(x, 0, n, k);
    case Family::Sigma: return detail::is_complement(x, 0, n, n) && detail::block_in_S(x, 0, n, k);
    case Family::R: return detail::block_in_S(x, 0, n, 1) && detail::block_in_S(x, n, n, k);
    case Family::Rho:
      return detail::is_complement(x, 0, 2 * n, 2 * n) && detail::block_in_S(x, 0, n, 1) &&
             detail::block_in_S(x, n, n, k);
  }
  return false;
}

/// Drops the forced complement half: Sigma -> S, Rho -> R.
inline std::pair<CirculantSpec, ValueTuple> halve(const CirculantSpec& spec, const ValueTuple& t) {
  if (!spec.paired()) throw invalid_input("halve: " + spec.to_string() + " has no complement half");
  if (!member(spec, t)) throw invalid_input("halve: " + t.to_string() + " is not in " + spec.to_string());
  const auto family = spec.family == Family::Sigma ? Family::S : Family::R;
  return {CirculantSpec(family, spec.n, spec.k), t.slice(0, t.arity() / 2)};
}

/// Appends the complement half: S -> Sigma, R -> Rho.
inline std::pair<CirculantSpec, ValueTuple> lift(const CirculantSpec& spec, const ValueTuple& t) {
  if (spec.paired()) throw invalid_input("lift: " + spec.to_string() + " is already paired");
  if (!member(spec, t)) throw invalid_input("lift: " + t.to_string() + " is not in " + spec.to_string());
  const auto family = spec.family == Family::S ? Family::Sigma : Family::Rho;
  return {CirculantSpec(family, spec.n, spec.k), t.concat(dual_tuple(t))};
}

namespace detail {

inline std::vector<value_t> bits_of(std::uint64_t mask, std::size_t len) {
  std::vector<value_t> e(len);
  for (std::size_t i = 0; i < len; ++i) e[i] = static_cast<value_t>((mask >> i) & 1U);
  return e;
}

inline std::vector<ValueTuple> enumerate_S(std::size_t n, std::size_t k) {
  std::vector<ValueTuple> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    auto e = bits_of(mask, n);
    if (block_in_S(e, 0, n, k)) out.emplace_back(std::move(e), 2);
  }
  return out;
}

}  // namespace detail

inline constexpr std::size_t default_enumeration_cap = 24;

/// The member set in lexicographic order. S is filtered from all 2^n
/// strings; the other families are assembled from S by product and lifting.
inline std::vector<ValueTuple> enumerate(const CirculantSpec& spec,
                                         std::size_t cap = default_enumeration_cap) {
  if (spec.arity() > cap)
    throw budget_exceeded(spec.to_string() + " has arity " + std::to_string(spec.arity()) +
                          " above the enumeration cap " + std::to_string(cap) + "; intensional only");
  std::vector<ValueTuple> out;
  switch (spec.family) {
    case Family::S: out = detail::enumerate_S(spec.n, spec.k); break;
    case Family::Sigma:
      for (auto& t : detail::enumerate_S(spec.n, spec.k)) out.push_back(t.concat(dual_tuple(t)));
      break;
    case Family::R:
    case Family::Rho: {
      auto first = detail::enumerate_S(spec.n, 1);
      auto second = detail::enumerate_S(spec.n, spec.k);
      for (const auto& a : first)
        for (const auto& b : second) {
          auto t = a.concat(b);
          out.push_back(spec.family == Family::R ? t : t.concat(dual_tuple(t)));
        }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// |S(n,k)| as the trace of T^n, where T is the (k+1)-state transfer matrix
/// on "ones seen since the last zero, capped at k". A zero may only follow
/// state k. Every cyclic string is one closed walk.
inline big_count count_S(std::size_t n, std::size_t k) {
  const std::size_t states = k + 1;
  using Mat = std::vector<std::vector<big_count>>;
  auto mul = [&](const Mat& a, const Mat& b) {
    Mat c(states, std::vector<big_count>(states, 0));
    for (std::size_t i = 0; i < states; ++i)
      for (std::size_t l = 0; l < states; ++l) {
        if (a[i][l] == 0) continue;
        for (std::size_t j = 0; j < states; ++j) c[i][j] += a[i][l] * b[l][j];
      }
    return c;
  };
  Mat t(states, std::vector<big_count>(states, 0));
  for (std::size_t d = 0; d < states; ++d) t[d][std::min(d + 1, k)] += 1;  // append 1
  t[k][0] += 1;                                                            // append 0
  Mat r(states, std::vector<big_count>(states, 0));
  for (std::size_t i = 0; i < states; ++i) r[i][i] = 1;
  for (std::size_t e = n; e > 0; e >>= 1) {
    if (e & 1U) r = mul(r, t);
    t = mul(t, t);
  }
  big_count trace = 0;
  for (std::size_t i = 0; i < states; ++i) trace += r[i][i];
  return trace;
}

inline big_count count(const CirculantSpec& spec) {
  switch (spec.family) {
    case Family::S:
    case Family::Sigma: return count_S(spec.n, spec.k);
    case Family::R:
    case Family::Rho: return count_S(spec.n, 1) * count_S(spec.n, spec.k);
  }
  return 0;
}

namespace detail {

// Bit i of x (resp. y) is coordinate x_{i+1} (resp. y_{i+1}).

/// x_i != y_i and y_{i+j} <= x_i for j = 1..k.
inline bool sigma_inequality_form(std::uint64_t x, std::uint64_t y, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = (x >> i) & 1U;
    if (xi == ((y >> i) & 1U)) return false;
    for (std::size_t j = 1; j <= k; ++j)
      if (((y >> ((i + j) % n)) & 1U) > xi) return false;
  }
  return true;
}

/// x_i != y_i and x_i = 0 implies x_{i+1} = ... = x_{i+k} = 1.
inline bool sigma_implication_form(std::uint64_t x, std::uint64_t y, std::size_t n, std::size_t k) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  if ((x ^ y) != full) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if ((x >> i) & 1U) continue;
    for (std::size_t j = 1; j <= k; ++j)
      if (!((x >> ((i + j) % n)) & 1U)) return false;
  }
  return true;
}

}  // namespace detail

/// Compares the two definitions of Sigma(n,k) over all 2^(2n) tuples.
inline bool defs_equivalent(std::size_t n, std::size_t k, std::size_t cap = default_enumeration_cap) {
  const CirculantSpec spec(Family::Sigma, n, k);
  if (spec.arity() > cap)
    throw budget_exceeded("defs_equivalent: arity " + std::to_string(spec.arity()) + " above cap");
  const std::uint64_t side = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < side; ++x)
    for (std::uint64_t y = 0; y < side; ++y)
      if (detail::sigma_inequality_form(x, y, n, k) != detail::sigma_implication_form(x, y, n, k)) return false;
  return true;
}

}  // namespace pclone
