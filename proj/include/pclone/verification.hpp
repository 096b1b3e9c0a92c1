#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pclone/construction.hpp"
#include "pclone/relation.hpp"
#include "pclone/solver.hpp"

namespace pclone {

enum class LemmaOutcome { unsat, sat, dichotomy_holds, dichotomy_fails };

inline std::string_view to_string(LemmaOutcome o) {
  switch (o) {
    case LemmaOutcome::unsat: return "UNSAT";
    case LemmaOutcome::sat: return "SAT";
    case LemmaOutcome::dichotomy_holds: return "DICHOTOMY_HOLDS";
    case LemmaOutcome::dichotomy_fails: return "DICHOTOMY_FAILS";
  }
  return "?";
}

struct LemmaReport {
  int id = 0;
  std::size_t k = 0;
  std::size_t kprime = 0;
  CirculantSpec spec;
  LemmaOutcome outcome = LemmaOutcome::unsat;
  std::optional<RowMatrix> certificate;  // a matrix contradicting the lemma
  std::uint64_t nodes = 0;
  double millis = 0;
  // dichotomy check only: which of the two permitted shapes occur at all.
  bool matrices_exist = false;
  bool all_down_form = false;
  bool up_then_down_form = false;

  bool expected() const noexcept {
    return outcome == LemmaOutcome::unsat || outcome == LemmaOutcome::dichotomy_holds;
  }
};

namespace detail {

/// Dichotomy: every matrix over rows of M_k with columns in R(n',k') is either
/// all M_down rows, or M_up rows in the S(n',1) half and M_down rows in the
/// S(n',k') half. The two halves are independent blocks; the claim fails iff
/// some solution of the first block mixes the two kinds (then two cyclically
/// adjacent slots differ) or some solution of the second uses an M_up row,
/// while the other block is solvable at all.
inline LemmaReport verify_dichotomy(LemmaReport rep, const ConstructionBundle& b, const SolverOptions& opts) {
  const std::size_t np = rep.spec.n;
  const RowPool pool(b.m);
  const std::set<ValueTuple> up_rows(b.m_up.begin(), b.m_up.end());
  const Bits up = pool.select([&](std::size_t i) { return up_rows.contains(pool.row(i)); });
  const Bits down = ~up;
  const Bits full = pool.full();
  NodeCounter counter(opts.node_budget);

  const BlockCsp first(pool, np, 1), second(pool, np, rep.spec.k);
  const auto a1 = lexmin_any(first, counter);
  const auto a2 = lexmin_any(second, counter);
  rep.matrices_exist = a1 && a2;

  auto restricted = [&](const BlockCsp& c, std::vector<std::pair<std::size_t, Bits>> fix) {
    std::vector<Bits> dom(c.slots(), full);
    for (auto& [slot, bits] : fix) dom[slot] = bits;
    return c.solve(std::move(dom), VarOrder::index, counter);
  };
  auto uniform = [&](const BlockCsp& c, const Bits& kind) {
    return c.solve(std::vector<Bits>(c.slots(), kind), VarOrder::fail_first, counter).has_value();
  };

  if (rep.matrices_exist) {
    const bool second_down = uniform(second, down);
    rep.all_down_form = second_down && uniform(first, down);
    rep.up_then_down_form = second_down && uniform(first, up);
  }

  std::optional<RowMatrix> bad;
  auto emit = [&](const Assignment& s1, const Assignment& s2) {
    RowMatrix m;
    for (auto i : s1) m.push_back(pool.row(i));
    for (auto i : s2) m.push_back(pool.row(i));
    bad = std::move(m);
  };
  if (a2) {
    for (const auto& [p, q] : {std::pair{up, down}, std::pair{down, up}}) {
      if (bad) break;
      if (auto s = restricted(first, {{0, p}, {1, q}})) emit(*s, *a2);
    }
  }
  if (!bad && a1)
    if (auto s = restricted(second, {{0, up}})) emit(*a1, *s);

  rep.nodes = counter.nodes();
  rep.outcome = bad ? LemmaOutcome::dichotomy_fails : LemmaOutcome::dichotomy_holds;
  rep.certificate = std::move(bad);
  return rep;
}

}  // namespace detail

/// Exhaustive check at fixed parameters. id 1 (k' < k): no S(n(k'),1) matrix
/// over rows of M_up. id 2 (k' > k): no S(n(k'),k) matrix over rows of M_down.
/// id 3 (any k, k'): the R(n(k'),k') dichotomy over rows of M_k.
inline LemmaReport verify_lemma(int id, std::size_t k, std::size_t kprime, const SolverOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t nkp = n_of(kprime);
  LemmaReport rep;
  rep.id = id;
  rep.k = k;
  rep.kprime = kprime;
  const auto b = build_bundle(k);

  auto run = [&](const CirculantSpec& spec, const RowMatrix& pool) {
    rep.spec = spec;
    auto s = find_matrix(spec, pool, nullptr, opts);
    rep.nodes = s.nodes;
    rep.outcome = s.sat() ? LemmaOutcome::sat : LemmaOutcome::unsat;
    if (s.sat()) {
      if (!columns_in(spec, s.solution->rows))
        throw invariant_violation("solver certificate does not replay against " + spec.to_string());
      rep.certificate = std::move(s.solution->rows);
    }
  };

  switch (id) {
    case 1:
      if (!(kprime < k)) throw invalid_input("lemma 1 needs k' < k");
      run(CirculantSpec::S(nkp, 1), b.m_up);
      break;
    case 2:
      if (!(kprime > k)) throw invalid_input("lemma 2 needs k' > k");
      run(CirculantSpec::S(nkp, k), b.m_down);
      break;
    case 3:
      rep.spec = CirculantSpec::R(nkp, kprime);
      rep = detail::verify_dichotomy(std::move(rep), b, opts);
      break;
    default: throw invalid_input("lemma id must be 1, 2 or 3");
  }
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

struct TheoremTable {
  std::vector<std::size_t> ks;
  // entry[i][j]: g_{ks[i]} against Rho(n(ks[j]), ks[j]) (resp. f against R)
  std::vector<std::vector<SolverVerdict>> g;
  std::vector<std::vector<SolverVerdict>> f;

  bool holds(std::size_t i, std::size_t j) const { return g[i][j].verdict.holds; }
};

/// Membership of g_k in pPol rho^{n(k')} (and f_k in pPol R^{n(k')}) for all
/// pairs from ks. Reports only; callers compare against [k != k'].
inline TheoremTable theorem_table(const std::vector<std::size_t>& ks, const SolverOptions& opts = {},
                                  bool with_f = true) {
  TheoremTable t;
  t.ks = ks;
  std::vector<ConstructionBundle> bundles;
  for (auto k : ks) bundles.push_back(build_bundle(k));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    t.g.emplace_back();
    t.f.emplace_back();
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const std::size_t np = n_of(ks[j]);
      t.g[i].push_back(check_preserves(bundles[i].g, CirculantSpec::Rho(np, ks[j]), opts));
      if (with_f) t.f[i].push_back(check_preserves(bundles[i].f, CirculantSpec::R(np, ks[j]), opts));
    }
  }
  return t;
}

struct ChiEntry {
  std::vector<bool> subset;       // X, indexed like ks
  std::vector<bool> fingerprint;  // g_t in the intersection over ks \ X
};

struct ChiReport {
  std::vector<std::size_t> ks;
  std::vector<ChiEntry> entries;
  bool injective = false;
};

/// For each X subset of ks, records which g_t lie in the intersection of
/// pPol rho^{n(s)} over s in ks \ X (the empty intersection is Par(2)).
/// Distinct fingerprints for distinct X witness injectivity of chi on ks.
inline ChiReport chi_demo(const TheoremTable& table) {
  ChiReport rep;
  rep.ks = table.ks;
  const std::size_t m = table.ks.size();
  if (m >= 20) throw invalid_input("chi_demo: too many parameters");
  std::set<std::vector<bool>> seen;
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    ChiEntry e;
    for (std::size_t i = 0; i < m; ++i) e.subset.push_back((mask >> i) & 1U);
    for (std::size_t t = 0; t < m; ++t) {
      bool in = true;
      for (std::size_t s = 0; s < m; ++s)
        if (!e.subset[s] && !table.holds(t, s)) in = false;
      e.fingerprint.push_back(in);
    }
    seen.insert(e.fingerprint);
    rep.entries.push_back(std::move(e));
  }
  rep.injective = seen.size() == rep.entries.size();
  return rep;
}

/// A random monotone self-dual partial function: the domain is
/// floor(domsize/2) random dual pairs (plus one unpaired tuple when domsize
/// is odd), values are self-dual by construction, and assignments are
/// redrawn until monotone.
inline PartialFn sample_monotone_selfdual(std::size_t arity, std::size_t domsize, std::uint64_t seed,
                                          std::size_t attempts = 100'000) {
  if (arity < 1 || arity > 4) throw invalid_input("sample_monotone_selfdual: arity must be in 1..4");
  const std::size_t total = std::size_t{1} << arity;
  if (domsize > total) throw invalid_input("sample_monotone_selfdual: domsize exceeds 2^arity");
  std::mt19937_64 rng(seed);

  std::vector<std::uint32_t> reps;  // one tuple per dual pair: top bit clear
  for (std::uint32_t x = 0; x < total / 2; ++x) reps.push_back(x);
  std::shuffle(reps.begin(), reps.end(), rng);
  const std::size_t pairs = domsize / 2;
  auto tuple_of = [&](std::uint32_t x) {
    std::vector<value_t> e(arity);
    for (std::size_t i = 0; i < arity; ++i) e[i] = static_cast<value_t>((x >> (arity - 1 - i)) & 1U);
    return ValueTuple(std::move(e));
  };
  std::optional<ValueTuple> extra;
  if (domsize % 2 == 1) {
    // pick the extra tuple from an unused pair, either side
    const std::uint32_t r = reps[pairs];
    extra = tuple_of(rng() % 2 ? r : static_cast<std::uint32_t>(total - 1 - r));
  }
  for (std::size_t a = 0; a < attempts; ++a) {
    PartialFn::Graph g;
    for (std::size_t p = 0; p < pairs; ++p) {
      const auto x = tuple_of(reps[p]);
      const auto v = static_cast<value_t>(rng() % 2);
      g.emplace(x, v);
      g.emplace(dual_tuple(x), static_cast<value_t>(1 - v));
    }
    if (extra) g.emplace(*extra, static_cast<value_t>(rng() % 2));
    PartialFn f(arity, 2, std::move(g));
    if (is_monotone(f) && is_self_dual(f)) return f;
  }
  throw budget_exceeded("sample_monotone_selfdual: no monotone self-dual assignment found");
}

}  // namespace pclone
