#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pclone {

class pclone_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: arity or kappa mismatch, out-of-range parameters.
class invalid_input : public pclone_error {
 public:
  using pclone_error::pclone_error;
};

class parse_error : public pclone_error {
 public:
  parse_error(std::size_t line, std::string field, const std::string& what)
      : pclone_error("line " + std::to_string(line) + " [" + field + "]: " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// A search or enumeration ran past its configured limit. Never a verdict.
class budget_exceeded : public pclone_error {
 public:
  using pclone_error::pclone_error;
};

// A structural property that the construction relies on did not hold.
class invariant_violation : public pclone_error {
 public:
  using pclone_error::pclone_error;
};

using value_t = std::uint8_t;

/// Fixed-arity vector over {0, ..., kappa-1}. Ordered lexicographically by
/// entries, which is the canonical order used for domains and pools.
class ValueTuple {
 public:
  ValueTuple() = default;

  explicit ValueTuple(std::vector<value_t> entries, unsigned kappa = 2)
      : entries_(std::move(entries)), kappa_(kappa) {
    if (kappa_ < 2) throw invalid_input("kappa must be at least 2");
    if (entries_.empty()) throw invalid_input("tuple arity must be positive");
    for (value_t v : entries_)
      if (v >= kappa_)
        throw invalid_input("tuple entry " + std::to_string(v) + " out of range for kappa " +
                            std::to_string(kappa_));
  }

  static ValueTuple from_string(std::string_view digits, unsigned kappa = 2) {
    if (kappa > 10) throw invalid_input("digit-string tuples require kappa <= 10");
    std::vector<value_t> e;
    e.reserve(digits.size());
    for (char c : digits) {
      if (c < '0' || c > '9') throw invalid_input(std::string("non-digit '") + c + "' in tuple");
      e.push_back(static_cast<value_t>(c - '0'));
    }
    return ValueTuple(std::move(e), kappa);
  }

  static ValueTuple constant(std::size_t arity, value_t v, unsigned kappa = 2) {
    return ValueTuple(std::vector<value_t>(arity, v), kappa);
  }

  std::size_t arity() const noexcept { return entries_.size(); }
  unsigned kappa() const noexcept { return kappa_; }
  value_t operator[](std::size_t i) const { return entries_[i]; }
  std::span<const value_t> entries() const noexcept { return entries_; }

  std::size_t count(value_t v) const {
    return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), v));
  }

  ValueTuple concat(const ValueTuple& other) const {
    if (other.kappa_ != kappa_) throw invalid_input("kappa mismatch in concat");
    std::vector<value_t> e = entries_;
    e.insert(e.end(), other.entries_.begin(), other.entries_.end());
    return ValueTuple(std::move(e), kappa_);
  }

  ValueTuple slice(std::size_t first, std::size_t count) const {
    if (first + count > entries_.size()) throw invalid_input("slice out of range");
    return ValueTuple(std::vector<value_t>(entries_.begin() + static_cast<std::ptrdiff_t>(first),
                                           entries_.begin() + static_cast<std::ptrdiff_t>(first + count)),
                      kappa_);
  }

  std::string to_string() const {
    std::string s;
    s.reserve(entries_.size());
    for (value_t v : entries_) s.push_back(static_cast<char>('0' + v));
    return s;
  }

  friend bool operator==(const ValueTuple&, const ValueTuple&) = default;
  friend auto operator<=>(const ValueTuple&, const ValueTuple&) = default;

 private:
  std::vector<value_t> entries_;
  unsigned kappa_ = 2;
};

/// Pointwise a <= b.
inline bool leq_pointwise(const ValueTuple& a, const ValueTuple& b) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// Entrywise complement of a Boolean tuple.
inline ValueTuple dual_tuple(const ValueTuple& t) {
  if (t.kappa() != 2) throw invalid_input("dual_tuple is defined for kappa = 2 only");
  std::vector<value_t> e(t.entries().begin(), t.entries().end());
  for (auto& v : e) v = static_cast<value_t>(1 - v);
  return ValueTuple(std::move(e), 2);
}

/// Calls fn(tuple) for every tuple in kappa^arity, in lexicographic order.
template <typename Fn>
void for_each_tuple(std::size_t arity, unsigned kappa, Fn&& fn) {
  std::vector<value_t> cur(arity, 0);
  while (true) {
    fn(ValueTuple(cur, kappa));
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++cur[i] < kappa) break;
      cur[i] = 0;
      if (i == 0) return;
    }
    if (arity == 0) return;
  }
}

/// Matrix given by its rows; columns are read top to bottom.
using RowMatrix = std::vector<ValueTuple>;

inline ValueTuple column(const RowMatrix& m, std::size_t j) {
  if (m.empty()) throw invalid_input("column of an empty matrix");
  std::vector<value_t> e;
  e.reserve(m.size());
  for (const auto& r : m) e.push_back(r[j]);
  return ValueTuple(std::move(e), m.front().kappa());
}

}  // namespace pclone
