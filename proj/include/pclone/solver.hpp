#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <thread>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pclone/circulant.hpp"
#include "pclone/partial_fn.hpp"
#include "pclone/preservation.hpp"

namespace pclone {

struct SolverOptions {
  std::uint64_t node_budget = 200'000'000;
  unsigned workers = 1;
};

struct MatrixSolution {
  RowMatrix rows;                    // full height, complement halves included
  std::optional<ValueTuple> output;  // f(row_i), when a function was given
};

struct MatrixSearch {
  std::optional<MatrixSolution> solution;
  std::uint64_t nodes = 0;

  bool sat() const noexcept { return solution.has_value(); }
};

struct SolverVerdict {
  PreserveVerdict verdict;
  std::uint64_t nodes = 0;
  double millis = 0;
};

namespace detail {

using Bits = boost::dynamic_bitset<std::uint64_t>;

class NodeCounter {
 public:
  explicit NodeCounter(std::uint64_t budget) : budget_(budget) {}

  void tick() {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_)
      throw budget_exceeded("solver node budget of " + std::to_string(budget_) + " exhausted");
  }
  std::uint64_t nodes() const { return nodes_.load(); }

 private:
  std::uint64_t budget_;
  std::atomic<std::uint64_t> nodes_{0};
};

/// Runs fn(0..count-1) on up to `workers` threads; results keep index order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            out[i] = fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Candidate rows in canonical order with their pairwise "no shared zero"
/// compatibility.
class RowPool {
 public:
  explicit RowPool(std::vector<ValueTuple> rows) : rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    const std::size_t p = rows_.size();
    std::vector<Bits> zeros;
    zeros.reserve(p);
    for (const auto& r : rows_) {
      Bits z(r.arity());
      for (std::size_t i = 0; i < r.arity(); ++i) z[i] = r[i] == 0;
      zeros.push_back(std::move(z));
    }
    compat_.assign(p, Bits(p));
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b)
        if (!zeros[a].intersects(zeros[b])) compat_[a][b] = compat_[b][a] = true;
  }

  std::size_t size() const noexcept { return rows_.size(); }
  const ValueTuple& row(std::size_t i) const { return rows_[i]; }
  const std::vector<ValueTuple>& rows() const noexcept { return rows_; }
  const Bits& compat(std::size_t i) const { return compat_[i]; }
  Bits full() const { return Bits(size()).set(); }

  template <typename Pred>
  Bits select(Pred&& pred) const {
    Bits b(size());
    for (std::size_t i = 0; i < size(); ++i) b[i] = pred(i);
    return b;
  }

 private:
  std::vector<ValueTuple> rows_;
  std::vector<Bits> compat_;
};

enum class VarOrder { index, fail_first };

/// One circulant block: `slots` positions on a cycle; slots i and i +- d
/// (d = 1..gap) must hold rows without a common zero. This is column
/// membership in S(slots, gap), imposed on every column at once.
class BlockCsp {
 public:
  BlockCsp(const RowPool& pool, std::size_t slots, std::size_t gap) : pool_(&pool), slots_(slots), gap_(gap) {
    neighbors_.resize(slots);
    for (std::size_t i = 0; i < slots; ++i) {
      std::set<std::size_t> nb;
      for (std::size_t d = 1; d <= gap; ++d) {
        nb.insert((i + d) % slots);
        nb.insert((i + slots - d) % slots);
      }
      nb.erase(i);
      neighbors_[i].assign(nb.begin(), nb.end());
    }
  }

  std::size_t slots() const noexcept { return slots_; }
  std::size_t gap() const noexcept { return gap_; }
  const RowPool& pool() const noexcept { return *pool_; }

  /// First solution in DFS order. With VarOrder::index and ascending value
  /// order this is the lexicographically least assignment.
  std::optional<std::vector<std::size_t>> solve(std::vector<Bits> domains, VarOrder order,
                                                NodeCounter& counter) const {
    counter.tick();
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t x = 0; x < slots_; ++x)
      for (auto y : neighbors_[x]) arcs.emplace_back(x, y);
    if (!propagate(domains, std::move(arcs))) return std::nullopt;
    std::vector<bool> assigned(slots_, false);
    if (!dfs(domains, assigned, order, counter)) return std::nullopt;
    std::vector<std::size_t> sol(slots_);
    for (std::size_t i = 0; i < slots_; ++i) sol[i] = domains[i].find_first();
    return sol;
  }

 private:
  bool propagate(std::vector<Bits>& dom, std::vector<std::pair<std::size_t, std::size_t>> work) const {
    while (!work.empty()) {
      auto [x, y] = work.back();
      work.pop_back();
      if (!revise(dom[x], dom[y])) continue;
      if (dom[x].none()) return false;
      for (auto z : neighbors_[x])
        if (z != y) work.emplace_back(z, x);
    }
    return true;
  }

  bool revise(Bits& dx, const Bits& dy) const {
    bool changed = false;
    for (auto a = dx.find_first(); a != Bits::npos; a = dx.find_next(a))
      if (!pool_->compat(a).intersects(dy)) {
        dx.reset(a);
        changed = true;
      }
    return changed;
  }

  bool dfs(std::vector<Bits>& dom, std::vector<bool>& assigned, VarOrder order, NodeCounter& counter) const {
    std::size_t var = slots_;
    if (order == VarOrder::index) {
      for (std::size_t i = 0; i < slots_; ++i)
        if (!assigned[i]) {
          var = i;
          break;
        }
    } else {
      std::size_t best = 0;
      for (std::size_t i = 0; i < slots_; ++i)
        if (!assigned[i] && (var == slots_ || dom[i].count() < best)) {
          var = i;
          best = dom[i].count();
        }
    }
    if (var == slots_) return true;
    assigned[var] = true;
    const Bits candidates = dom[var];
    for (auto a = candidates.find_first(); a != Bits::npos; a = candidates.find_next(a)) {
      counter.tick();
      std::vector<Bits> next = dom;
      next[var].reset();
      next[var].set(a);
      std::vector<std::pair<std::size_t, std::size_t>> work;
      for (auto z : neighbors_[var]) work.emplace_back(z, var);
      if (propagate(next, std::move(work)) && dfs(next, assigned, order, counter)) {
        dom = std::move(next);
        return true;
      }
    }
    assigned[var] = false;
    return false;
  }

  const RowPool* pool_;
  std::size_t slots_;
  std::size_t gap_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

using Assignment = std::vector<std::size_t>;

/// A block together with what counts as a violation of its output.
struct BlockObjective {
  const BlockCsp* csp = nullptr;
  Bits zero_out;  // rows on which f is 0
  Bits bad_dual;  // paired families: rows u with f(dual u) != 1 + f(u)

  bool violating(const Assignment& a) const {
    const std::size_t m = csp->slots();
    for (std::size_t i = 0; i < m; ++i) {
      if (bad_dual.test(a[i])) return true;
      if (!zero_out.test(a[i])) continue;
      for (std::size_t d = 1; d <= csp->gap(); ++d)
        if (zero_out.test(a[(i + d) % m])) return true;
    }
    return false;
  }

  /// Unary restrictions describing "the violation sits at slot i": either a
  /// zero-zero pair (i, i+d) or a row whose dual value is wrong.
  std::vector<std::vector<Bits>> restrictions_at(std::size_t i) const {
    const std::size_t m = csp->slots();
    std::vector<std::vector<Bits>> out;
    std::set<std::size_t> partners;
    for (std::size_t d = 1; d <= csp->gap(); ++d) partners.insert((i + d) % m);
    const Bits full = csp->pool().full();
    for (auto j : partners) {
      std::vector<Bits> dom(m, full);
      dom[i] = zero_out;
      dom[j] = zero_out;
      out.push_back(std::move(dom));
    }
    if (bad_dual.any()) {
      std::vector<Bits> dom(m, full);
      dom[i] = bad_dual;
      out.push_back(std::move(dom));
    }
    return out;
  }
};

/// Whether the unrestricted block has any solution. Rotating a solution
/// gives a solution, so slot 0 may be taken to hold the least row index used.
inline bool any_exists(const BlockCsp& csp, NodeCounter& counter) {
  const std::size_t p = csp.pool().size();
  for (std::size_t a = 0; a < p; ++a) {
    Bits rest = csp.pool().full();
    for (std::size_t b = 0; b < a; ++b) rest.reset(b);
    std::vector<Bits> dom(csp.slots(), rest);
    dom[0].reset();
    dom[0].set(a);
    if (csp.solve(std::move(dom), VarOrder::fail_first, counter)) return true;
  }
  return false;
}

inline std::optional<Assignment> lexmin_any(const BlockCsp& csp, NodeCounter& counter) {
  if (!any_exists(csp, counter)) return std::nullopt;
  return csp.solve(std::vector<Bits>(csp.slots(), csp.pool().full()), VarOrder::index, counter);
}

/// Existence of a violating solution. The block is invariant under rotation
/// of its slots, so it suffices to place the violation at slot 0.
inline bool violation_exists(const BlockObjective& obj, NodeCounter& counter, unsigned workers) {
  auto probs = obj.restrictions_at(0);
  auto found = parallel_map<char>(probs.size(), workers, [&](std::size_t i) -> char {
    return obj.csp->solve(probs[i], VarOrder::fail_first, counter).has_value();
  });
  return std::any_of(found.begin(), found.end(), [](char c) { return c != 0; });
}

/// Lexicographically least violating solution: the least among the
/// index-order solutions of every placement of the violation.
inline std::optional<Assignment> lexmin_violating(const BlockObjective& obj, NodeCounter& counter,
                                                  unsigned workers) {
  std::vector<std::vector<Bits>> probs;
  for (std::size_t i = 0; i < obj.csp->slots(); ++i)
    for (auto& p : obj.restrictions_at(i)) probs.push_back(std::move(p));
  auto sols = parallel_map<std::optional<Assignment>>(
      probs.size(), workers, [&](std::size_t i) { return obj.csp->solve(probs[i], VarOrder::index, counter); });
  std::optional<Assignment> best;
  for (auto& s : sols)
    if (s && (!best || *s < *best)) best = std::move(s);
  return best;
}

inline std::vector<std::pair<std::size_t, std::size_t>> blocks_of(const CirculantSpec& spec) {
  switch (spec.family) {
    case Family::S:
    case Family::Sigma: return {{spec.n, spec.k}};
    case Family::R:
    case Family::Rho: return {{spec.n, 1}, {spec.n, spec.k}};
  }
  return {};
}

}  // namespace detail

/// Searches for a matrix with rows from `pool` (repetition allowed) and every
/// column in `spec`. With `want_violation` = f the rows are further limited to
/// dom(f) and f's output tuple must fall outside `spec`. For Sigma/Rho only
/// the first half of the slots is searched; the rest are the dual rows.
/// Deterministic: the result is the lexicographically least such matrix.
inline MatrixSearch find_matrix(const CirculantSpec& spec, std::span<const ValueTuple> pool,
                                const PartialFn* want_violation = nullptr, const SolverOptions& opts = {}) {
  for (const auto& r : pool)
    if (r.arity() != pool.front().arity() || r.kappa() != 2)
      throw invalid_input("find_matrix: pool rows must share one arity over {0,1}");
  if (want_violation && want_violation->kappa() != 2) throw invalid_input("find_matrix: f must be Boolean");
  if (want_violation && !pool.empty() && want_violation->arity() != pool.front().arity())
    throw invalid_input("find_matrix: f arity does not match pool rows");

  std::set<ValueTuple> available;
  for (const auto& r : pool)
    if (!want_violation || want_violation->contains(r)) available.insert(r);
  std::vector<ValueTuple> usable;
  for (const auto& r : available)
    if (!spec.paired() || available.contains(dual_tuple(r))) usable.push_back(r);

  detail::NodeCounter counter(opts.node_budget);
  counter.tick();
  MatrixSearch result;
  const detail::RowPool rows(std::move(usable));
  if (rows.size() == 0) {
    result.nodes = counter.nodes();
    return result;
  }

  std::vector<detail::BlockCsp> csps;
  for (auto [slots, gap] : detail::blocks_of(spec)) csps.emplace_back(rows, slots, gap);

  std::vector<detail::BlockObjective> objs;
  if (want_violation) {
    const auto& f = *want_violation;
    for (const auto& c : csps) {
      detail::BlockObjective o{&c, rows.select([&](std::size_t i) { return f(rows.row(i)) == 0; }),
                               rows.select([&](std::size_t i) {
                                 return spec.paired() && f(dual_tuple(rows.row(i))) == f(rows.row(i));
                               })};
      objs.push_back(std::move(o));
    }
  }

  std::vector<detail::Assignment> any;
  for (const auto& c : csps) {
    auto a = detail::lexmin_any(c, counter);
    if (!a) {
      result.nodes = counter.nodes();
      return result;
    }
    any.push_back(std::move(*a));
  }

  std::optional<std::vector<detail::Assignment>> chosen;
  if (!want_violation) {
    chosen = any;
  } else if (csps.size() == 1) {
    if (objs[0].violating(any[0])) chosen = any;
    else if (detail::violation_exists(objs[0], counter, opts.workers))
      chosen = std::vector<detail::Assignment>{*detail::lexmin_violating(objs[0], counter, opts.workers)};
  } else {
    // The two blocks constrain disjoint slots, so a violating matrix is a
    // violating solution of one block next to any solution of the other.
    if (detail::violation_exists(objs[1], counter, opts.workers)) {
      if (objs[0].violating(any[0])) chosen = any;
      else chosen = std::vector<detail::Assignment>{any[0], *detail::lexmin_violating(objs[1], counter, opts.workers)};
    } else if (detail::violation_exists(objs[0], counter, opts.workers)) {
      chosen = std::vector<detail::Assignment>{*detail::lexmin_violating(objs[0], counter, opts.workers), any[1]};
    }
  }

  if (chosen) {
    MatrixSolution sol;
    for (const auto& block : *chosen)
      for (auto idx : block) sol.rows.push_back(rows.row(idx));
    if (spec.paired()) {
      const std::size_t half = sol.rows.size();
      for (std::size_t i = 0; i < half; ++i) sol.rows.push_back(dual_tuple(sol.rows[i]));
    }
    if (want_violation) {
      std::vector<value_t> out;
      for (const auto& r : sol.rows) out.push_back((*want_violation)(r));
      sol.output = ValueTuple(std::move(out));
    }
    result.solution = std::move(sol);
  }
  result.nodes = counter.nodes();
  return result;
}

/// Decides f in pPol(spec) by exhaustive search; a negative verdict carries
/// the lexicographically least violating matrix.
inline SolverVerdict check_preserves(const PartialFn& f, const CirculantSpec& spec, const SolverOptions& opts = {}) {
  if (f.kappa() != 2) throw invalid_input("check_preserves: f must be Boolean");
  const auto start = std::chrono::steady_clock::now();
  const auto dom = f.domain();
  auto search = find_matrix(spec, dom, &f, opts);
  SolverVerdict v;
  v.nodes = search.nodes;
  if (search.sat()) {
    v.verdict.holds = false;
    v.verdict.witness = WitnessMatrix{std::move(search.solution->rows), std::move(*search.solution->output)};
  }
  v.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return v;
}

/// Every column of `rows` is a member of `spec`.
inline bool columns_in(const CirculantSpec& spec, const RowMatrix& rows) {
  if (rows.size() != spec.arity()) return false;
  for (std::size_t j = 0; j < rows.front().arity(); ++j)
    if (!member(spec, column(rows, j))) return false;
  return true;
}

}  // namespace pclone
