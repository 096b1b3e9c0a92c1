#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pclone/partial_fn.hpp"
#include "pclone/relation.hpp"

namespace pclone {

/// An h x n matrix of rows drawn from dom(f), together with the tuple of
/// values f takes on its rows. As a certificate of non-preservation every
/// column lies in the relation and the output does not.
struct WitnessMatrix {
  RowMatrix rows;
  ValueTuple output;

  std::size_t h() const noexcept { return rows.size(); }
  std::size_t n() const noexcept { return rows.empty() ? 0 : rows.front().arity(); }

  friend bool operator==(const WitnessMatrix&, const WitnessMatrix&) = default;
};

struct PreserveVerdict {
  bool holds = true;
  std::optional<WitnessMatrix> witness;  // present iff !holds
};

enum class WitnessFault {
  none,
  shape,                  // empty matrix, ragged rows, or output arity != h
  row_not_in_domain,
  column_not_in_relation,
  output_mismatch,        // output_i != f(row_i)
  output_in_relation,
};

inline std::string_view to_string(WitnessFault f) {
  switch (f) {
    case WitnessFault::none: return "none";
    case WitnessFault::shape: return "shape";
    case WitnessFault::row_not_in_domain: return "row_not_in_domain";
    case WitnessFault::column_not_in_relation: return "column_not_in_relation";
    case WitnessFault::output_mismatch: return "output_mismatch";
    case WitnessFault::output_in_relation: return "output_in_relation";
  }
  return "unknown";
}

struct WitnessCheck {
  WitnessFault fault = WitnessFault::none;
  std::size_t index = 0;  // offending row or column (0-based) where relevant

  bool ok() const noexcept { return fault == WitnessFault::none; }
  explicit operator bool() const noexcept { return ok(); }
};

/// Replays a non-preservation certificate. `member` is any predicate on
/// ValueTuple deciding membership in the relation.
template <typename Member>
WitnessCheck check_witness(const PartialFn& f, Member&& member, const WitnessMatrix& w) {
  if (w.rows.empty() || w.output.arity() != w.h()) return {WitnessFault::shape, 0};
  for (std::size_t i = 0; i < w.h(); ++i)
    if (w.rows[i].arity() != f.arity() || w.rows[i].kappa() != f.kappa()) return {WitnessFault::shape, i};
  for (std::size_t i = 0; i < w.h(); ++i)
    if (!f.contains(w.rows[i])) return {WitnessFault::row_not_in_domain, i};
  for (std::size_t j = 0; j < w.n(); ++j)
    if (!member(column(w.rows, j))) return {WitnessFault::column_not_in_relation, j};
  for (std::size_t i = 0; i < w.h(); ++i)
    if (f(w.rows[i]) != w.output[i]) return {WitnessFault::output_mismatch, i};
  if (member(w.output)) return {WitnessFault::output_in_relation, 0};
  return {};
}

struct BruteforceOptions {
  /// Upper bound on |dom(f)|^h, the number of row-slot assignments.
  std::uint64_t budget = 100'000'000;
};

namespace detail {

/// Prefix trie over the tuples of a relation; node 0 is the root.
class PrefixTrie {
 public:
  explicit PrefixTrie(const ExtRelation& r) : kappa_(r.kappa()) {
    children_.assign(kappa_, npos);
    for (const auto& t : r.tuples()) {
      std::size_t node = 0;
      for (std::size_t i = 0; i < t.arity(); ++i) {
        const std::size_t at = node * kappa_ + t[i];
        if (children_[at] == npos) {
          children_[at] = children_.size() / kappa_;
          children_.resize(children_.size() + kappa_, npos);
        }
        node = children_[at];
      }
    }
  }

  std::size_t child(std::size_t node, value_t v) const { return children_[node * kappa_ + v]; }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  unsigned kappa_;
  std::vector<std::size_t> children_;
};

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

/// Steps idx to the next tuple in base^|idx|; false after the last one.
inline bool advance_odometer(std::vector<std::size_t>& idx, std::size_t base) {
  for (std::size_t i = idx.size(); i > 0; --i) {
    if (++idx[i - 1] < base) return true;
    idx[i - 1] = 0;
  }
  return false;
}

}  // namespace detail

/// Exhaustive check of "f preserves rho". Rows are assigned to slots
/// 1..h in canonical domain order with column-prefix pruning, so the
/// returned witness is the lexicographically first violating matrix.
inline PreserveVerdict preserves_bruteforce(const PartialFn& f, const ExtRelation& rho,
                                            const BruteforceOptions& opts = {}) {
  if (f.kappa() != rho.kappa()) throw invalid_input("preserves: kappa mismatch");
  const auto dom = f.domain();
  const std::size_t h = rho.arity();
  const std::size_t n = f.arity();
  if (dom.empty() || rho.empty()) return {};
  if (detail::saturating_pow(dom.size(), h) > opts.budget)
    throw budget_exceeded("preserves_bruteforce: |dom(f)|^h = " + std::to_string(dom.size()) + "^" +
                          std::to_string(h) + " exceeds the budget; infeasible, use the solver");

  const detail::PrefixTrie trie(rho);
  std::vector<value_t> outs;
  outs.reserve(dom.size());
  for (const auto& x : dom) outs.push_back(f(x));

  // state[s][j]: trie node reached by column j after s rows
  std::vector<std::vector<std::size_t>> state(h + 1, std::vector<std::size_t>(n, 0));
  std::vector<std::size_t> choice(h, 0);
  std::vector<value_t> out(h);

  std::size_t s = 0;
  while (true) {
    if (choice[s] == dom.size()) {
      if (s == 0) return {};
      choice[s] = 0;
      --s;
      ++choice[s];
      continue;
    }
    const auto& row = dom[choice[s]];
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      auto next = trie.child(state[s][j], row[j]);
      if (next == detail::PrefixTrie::npos) ok = false;
      else state[s + 1][j] = next;
    }
    if (!ok) {
      ++choice[s];
      continue;
    }
    out[s] = outs[choice[s]];
    if (s + 1 < h) {
      ++s;
      continue;
    }
    ValueTuple image(out, f.kappa());
    if (!rho.contains(image)) {
      WitnessMatrix w;
      for (std::size_t i = 0; i < h; ++i) w.rows.push_back(dom[choice[i]]);
      w.output = std::move(image);
      return {false, std::move(w)};
    }
    ++choice[s];
  }
}

struct ClosureOptions {
  std::size_t max_arity = 2;      // arity bound on inner functions and projections
  std::size_t size_cap = 20'000;  // largest closure tolerated
};

/// Everything obtainable from fs and the projections of arity <= max_arity
/// by at most `depth` rounds of composition.
inline std::set<PartialFn> closure_sample(const std::set<PartialFn>& fs, std::size_t depth, unsigned kappa = 2,
                                          const ClosureOptions& opts = {}) {
  std::set<PartialFn> cur = fs;
  for (const auto& f : fs)
    if (f.kappa() != kappa) throw invalid_input("closure_sample: kappa mismatch");
  for (std::size_t n = 1; n <= opts.max_arity; ++n)
    for (std::size_t i = 1; i <= n; ++i) cur.insert(projection(ProjectionId(n, i), kappa));

  auto check_cap = [&](std::size_t sz) {
    if (sz > opts.size_cap)
      throw budget_exceeded("closure_sample: closure exceeds size cap " + std::to_string(opts.size_cap));
  };

  for (std::size_t round = 0; round < depth; ++round) {
    std::vector<std::vector<PartialFn>> by_arity(opts.max_arity + 1);
    for (const auto& g : cur)
      if (g.arity() <= opts.max_arity) by_arity[g.arity()].push_back(g);

    std::set<PartialFn> next = cur;
    for (const auto& f : cur) {
      for (std::size_t m = 1; m <= opts.max_arity; ++m) {
        const auto& pool = by_arity[m];
        if (pool.empty()) continue;
        if (detail::saturating_pow(pool.size(), f.arity()) > opts.size_cap * 64)
          throw budget_exceeded("closure_sample: too many inner-function tuples");
        std::vector<std::size_t> idx(f.arity(), 0);
        std::vector<PartialFn> gs(f.arity(), pool.front());
        do {
          for (std::size_t i = 0; i < idx.size(); ++i) gs[i] = pool[idx[i]];
          next.insert(compose(f, gs));
          check_cap(next.size());
        } while (detail::advance_odometer(idx, pool.size()));
      }
    }
    if (next.size() == cur.size()) break;
    cur = std::move(next);
  }
  return cur;
}

inline nlohmann::json witness_to_json(const WitnessMatrix& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : w.rows) rows.push_back(r.to_string());
  return {{"h", w.h()}, {"n", w.n()}, {"rows", std::move(rows)}, {"output", w.output.to_string()}};
}

inline WitnessMatrix witness_from_json(const nlohmann::json& j, unsigned kappa = 2) {
  try {
    WitnessMatrix w;
    const auto h = j.at("h").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    std::size_t idx = 0;
    for (const auto& r : j.at("rows")) {
      ++idx;
      w.rows.push_back(detail::parse_digits(r.get<std::string>(), n, kappa, idx, "rows"));
    }
    if (w.rows.size() != h) throw parse_error(0, "h", "row count does not match h");
    w.output = detail::parse_digits(j.at("output").get<std::string>(), h, kappa, 0, "output");
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(0, "json", e.what());
  }
}

}  // namespace pclone
