#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pclone/value_tuple.hpp"

namespace pclone {

/// e^n_i: the n-ary projection onto coordinate i (1-based).
class ProjectionId {
 public:
  ProjectionId(std::size_t n, std::size_t i) : n_(n), i_(i) {
    if (n_ < 1 || i_ < 1 || i_ > n_)
      throw invalid_input("projection index must satisfy 1 <= i <= n");
  }
  std::size_t n() const noexcept { return n_; }
  std::size_t i() const noexcept { return i_; }

 private:
  std::size_t n_;
  std::size_t i_;
};

/// An n-ary partial function on {0, ..., kappa-1}, stored as its graph.
/// The key set of the graph is dom(f); the empty domain is allowed.
class PartialFn {
 public:
  using Graph = std::map<ValueTuple, value_t>;

  PartialFn(std::size_t arity, unsigned kappa) : arity_(arity), kappa_(kappa) { validate(); }

  PartialFn(std::size_t arity, unsigned kappa, Graph graph)
      : arity_(arity), kappa_(kappa), graph_(std::move(graph)) {
    validate();
  }

  /// Builds from a list of (input, output) pairs; any repeated input is rejected.
  static PartialFn from_entries(std::size_t arity, unsigned kappa,
                                std::span<const std::pair<ValueTuple, value_t>> entries) {
    Graph g;
    for (const auto& [x, v] : entries)
      if (!g.emplace(x, v).second)
        throw invalid_input("duplicate domain tuple " + x.to_string());
    return PartialFn(arity, kappa, std::move(g));
  }

  std::size_t arity() const noexcept { return arity_; }
  unsigned kappa() const noexcept { return kappa_; }
  const Graph& graph() const noexcept { return graph_; }
  std::size_t domain_size() const noexcept { return graph_.size(); }
  bool contains(const ValueTuple& x) const { return graph_.contains(x); }

  std::optional<value_t> at(const ValueTuple& x) const {
    auto it = graph_.find(x);
    if (it == graph_.end()) return std::nullopt;
    return it->second;
  }

  value_t operator()(const ValueTuple& x) const {
    auto it = graph_.find(x);
    if (it == graph_.end()) throw invalid_input("tuple " + x.to_string() + " is not in dom(f)");
    return it->second;
  }

  /// dom(f) in canonical (lexicographic) order.
  std::vector<ValueTuple> domain() const {
    std::vector<ValueTuple> d;
    d.reserve(graph_.size());
    for (const auto& kv : graph_) d.push_back(kv.first);
    return d;
  }

  bool is_total() const {
    std::size_t full = 1;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (full > graph_.size()) return false;
      full *= kappa_;
    }
    return graph_.size() == full;
  }

  friend bool operator==(const PartialFn&, const PartialFn&) = default;
  friend auto operator<=>(const PartialFn&, const PartialFn&) = default;

 private:
  void validate() const {
    if (arity_ < 1) throw invalid_input("partial function arity must be positive");
    if (kappa_ < 2) throw invalid_input("kappa must be at least 2");
    for (const auto& [x, v] : graph_) {
      if (x.arity() != arity_ || x.kappa() != kappa_)
        throw invalid_input("domain tuple " + x.to_string() + " does not match arity/kappa");
      if (v >= kappa_) throw invalid_input("function value out of range");
    }
  }

  std::size_t arity_;
  unsigned kappa_;
  Graph graph_;
};

inline PartialFn projection(const ProjectionId& p, unsigned kappa = 2) {
  PartialFn::Graph g;
  for_each_tuple(p.n(), kappa, [&](const ValueTuple& x) { g.emplace(x, x[p.i() - 1]); });
  return PartialFn(p.n(), kappa, std::move(g));
}

/// f[g_1, ..., g_n]: defined on a where every g_i(a) is defined and
/// (g_1(a), ..., g_n(a)) lies in dom(f).
inline PartialFn compose(const PartialFn& f, std::span<const PartialFn> gs) {
  if (gs.size() != f.arity())
    throw invalid_input("compose: expected " + std::to_string(f.arity()) + " inner functions, got " +
                        std::to_string(gs.size()));
  const std::size_t m = gs.front().arity();
  for (const auto& g : gs) {
    if (g.arity() != m) throw invalid_input("compose: inner functions differ in arity");
    if (g.kappa() != f.kappa()) throw invalid_input("compose: kappa mismatch");
  }
  PartialFn::Graph out;
  std::vector<value_t> inner(f.arity());
  for (const auto& [a, v0] : gs.front().graph()) {
    bool defined = true;
    inner[0] = v0;
    for (std::size_t i = 1; i < gs.size() && defined; ++i) {
      auto v = gs[i].at(a);
      if (!v) defined = false;
      else inner[i] = *v;
    }
    if (!defined) continue;
    if (auto r = f.at(ValueTuple(inner, f.kappa()))) out.emplace(a, *r);
  }
  return PartialFn(m, f.kappa(), std::move(out));
}

inline PartialFn compose(const PartialFn& f, std::initializer_list<PartialFn> gs) {
  std::vector<PartialFn> v(gs);
  return compose(f, std::span<const PartialFn>(v));
}

/// Membership in Omega_kappa: the domain is empty or everything.
inline bool is_omega(const PartialFn& f) { return f.domain_size() == 0 || f.is_total(); }

}  // namespace pclone
