#pragma once

#include <set>
#include <string>
#include <string_view>

#include "pclone/fn_io.hpp"
#include "pclone/partial_fn.hpp"

namespace pclone {

/// An h-ary relation given by its (finite) set of tuples.
class ExtRelation {
 public:
  ExtRelation(std::size_t arity, unsigned kappa, std::set<ValueTuple> tuples = {})
      : arity_(arity), kappa_(kappa), tuples_(std::move(tuples)) {
    if (arity_ < 1) throw invalid_input("relation arity must be positive");
    if (kappa_ < 2) throw invalid_input("kappa must be at least 2");
    for (const auto& t : tuples_)
      if (t.arity() != arity_ || t.kappa() != kappa_)
        throw invalid_input("relation tuple " + t.to_string() + " does not match arity/kappa");
  }

  std::size_t arity() const noexcept { return arity_; }
  unsigned kappa() const noexcept { return kappa_; }
  std::size_t size() const noexcept { return tuples_.size(); }
  bool empty() const noexcept { return tuples_.empty(); }
  const std::set<ValueTuple>& tuples() const noexcept { return tuples_; }
  bool contains(const ValueTuple& t) const { return tuples_.contains(t); }
  bool operator()(const ValueTuple& t) const { return contains(t); }

  friend bool operator==(const ExtRelation&, const ExtRelation&) = default;

 private:
  std::size_t arity_;
  unsigned kappa_;
  std::set<ValueTuple> tuples_;
};

/// The named Boolean relations whose polymorphisms are the maximal partial clones on {0,1}.
/// (Omega_2 excepted, which is not of the form pPol rho).
enum class NamedRelation { Zero, One, Pair01, Order, Diseq, R1, R2 };

inline ExtRelation named(NamedRelation rel) {
  auto rel_of = [](std::size_t arity, std::initializer_list<std::string_view> ts) {
    std::set<ValueTuple> s;
    for (auto t : ts) s.insert(ValueTuple::from_string(t));
    return ExtRelation(arity, 2, std::move(s));
  };
  switch (rel) {
    case NamedRelation::Zero: return rel_of(1, {"0"});
    case NamedRelation::One: return rel_of(1, {"1"});
    case NamedRelation::Pair01: return rel_of(2, {"01"});
    case NamedRelation::Order: return rel_of(2, {"00", "01", "11"});
    case NamedRelation::Diseq: return rel_of(2, {"01", "10"});
    case NamedRelation::R1:
    case NamedRelation::R2: {
      std::set<ValueTuple> s;
      for (value_t x = 0; x < 2; ++x)
        for (value_t y = 0; y < 2; ++y) {
          s.insert(ValueTuple({x, x, y, y}));
          s.insert(ValueTuple({x, y, y, x}));
          if (rel == NamedRelation::R2) s.insert(ValueTuple({x, y, x, y}));
        }
      return ExtRelation(4, 2, std::move(s));
    }
  }
  throw invalid_input("unknown named relation");
}

inline NamedRelation named_from_keyword(std::string_view kw) {
  if (kw == "zero") return NamedRelation::Zero;
  if (kw == "one") return NamedRelation::One;
  if (kw == "pair01") return NamedRelation::Pair01;
  if (kw == "order") return NamedRelation::Order;
  if (kw == "diseq") return NamedRelation::Diseq;
  if (kw == "r1") return NamedRelation::R1;
  if (kw == "r2") return NamedRelation::R2;
  throw invalid_input("unknown relation keyword '" + std::string(kw) +
                      "' (expected zero, one, pair01, order, diseq, r1, r2)");
}

/// Cartesian product as concatenated tuples.
inline ExtRelation product(const ExtRelation& a, const ExtRelation& b) {
  if (a.kappa() != b.kappa()) throw invalid_input("product: kappa mismatch");
  std::set<ValueTuple> s;
  for (const auto& x : a.tuples())
    for (const auto& y : b.tuples()) s.insert(x.concat(y));
  return ExtRelation(a.arity() + b.arity(), a.kappa(), std::move(s));
}

/// f in pPol(<=), checked directly on comparable pairs of dom(f).
inline bool is_monotone(const PartialFn& f) {
  if (f.kappa() != 2) throw invalid_input("is_monotone requires kappa = 2");
  for (const auto& [a, fa] : f.graph())
    for (const auto& [b, fb] : f.graph())
      if (fa > fb && leq_pointwise(a, b)) return false;
  return true;
}

/// f in pPol(!=): whenever a and its dual are both in dom(f), f(dual a) = 1 + f(a).
inline bool is_self_dual(const PartialFn& f) {
  if (f.kappa() != 2) throw invalid_input("is_self_dual requires kappa = 2");
  for (const auto& [a, fa] : f.graph()) {
    auto fd = f.at(dual_tuple(a));
    if (fd && *fd == fa) return false;
  }
  return true;
}

inline std::string serialize_relation(const ExtRelation& r) {
  std::string out = "arity=" + std::to_string(r.arity()) + " kappa=" + std::to_string(r.kappa()) + "\n";
  for (const auto& t : r.tuples()) out += t.to_string() + "\n";
  return out;
}

inline ExtRelation parse_relation(std::string_view text) {
  std::size_t lineno = 0;
  std::optional<std::pair<std::size_t, unsigned>> header;
  std::set<ValueTuple> tuples;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = detail::parse_header(line, lineno);
      continue;
    }
    tuples.insert(detail::parse_digits(line, header->first, header->second, lineno, "tuple"));
  }
  if (!header) throw parse_error(lineno, "header", "missing arity/kappa header");
  return ExtRelation(header->first, header->second, std::move(tuples));
}

}  // namespace pclone
