#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pclone/partial_fn.hpp"

namespace pclone {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline unsigned parse_uint(std::string_view s, std::size_t line, const std::string& field) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw parse_error(line, field, "expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

/// Parses `arity=<n> kappa=<k>`.
inline std::pair<std::size_t, unsigned> parse_header(std::string_view line, std::size_t lineno) {
  std::istringstream in{std::string(line)};
  std::string a, k, extra;
  in >> a >> k;
  if (in >> extra) throw parse_error(lineno, "header", "unexpected trailing text '" + extra + "'");
  if (a.rfind("arity=", 0) != 0) throw parse_error(lineno, "arity", "header must start with arity=<n>");
  if (k.rfind("kappa=", 0) != 0) throw parse_error(lineno, "kappa", "header must contain kappa=<k>");
  auto arity = parse_uint(std::string_view(a).substr(6), lineno, "arity");
  auto kappa = parse_uint(std::string_view(k).substr(6), lineno, "kappa");
  if (arity < 1) throw parse_error(lineno, "arity", "arity must be positive");
  if (kappa < 2 || kappa > 10) throw parse_error(lineno, "kappa", "kappa must be in 2..10");
  return {arity, kappa};
}

inline ValueTuple parse_digits(std::string_view s, std::size_t arity, unsigned kappa, std::size_t lineno,
                               const std::string& field) {
  if (s.size() != arity)
    throw parse_error(lineno, field,
                      "expected " + std::to_string(arity) + " digits, got " + std::to_string(s.size()));
  for (char c : s)
    if (c < '0' || c >= static_cast<char>('0' + kappa))
      throw parse_error(lineno, field, std::string("digit '") + c + "' out of range");
  return ValueTuple::from_string(s, kappa);
}

}  // namespace detail

/// Text form: header line, then one `"<digits>" -> <v>` line per graph entry.
inline std::string serialize_fn(const PartialFn& f) {
  std::string out = "arity=" + std::to_string(f.arity()) + " kappa=" + std::to_string(f.kappa()) + "\n";
  for (const auto& [x, v] : f.graph()) out += "\"" + x.to_string() + "\" -> " + std::to_string(v) + "\n";
  return out;
}

inline PartialFn parse_fn(std::string_view text) {
  std::size_t lineno = 0;
  std::optional<std::pair<std::size_t, unsigned>> header;
  PartialFn::Graph graph;
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
    auto [arity, kappa] = *header;
    if (line.front() != '"') throw parse_error(lineno, "input", "entry must start with a quoted tuple");
    auto close = line.find('"', 1);
    if (close == std::string_view::npos) throw parse_error(lineno, "input", "unterminated quoted tuple");
    auto x = detail::parse_digits(line.substr(1, close - 1), arity, kappa, lineno, "input");
    auto rest = detail::trim(line.substr(close + 1));
    if (rest.substr(0, 2) != "->") throw parse_error(lineno, "arrow", "expected '->'");
    auto v = detail::parse_uint(detail::trim(rest.substr(2)), lineno, "output");
    if (v >= kappa) throw parse_error(lineno, "output", "value out of range for kappa");
    auto [it, inserted] = graph.emplace(x, static_cast<value_t>(v));
    if (!inserted)
      throw parse_error(lineno, "input",
                        "duplicate domain tuple " + x.to_string() +
                            (it->second == v ? "" : " with conflicting value"));
  }
  if (!header) throw parse_error(lineno, "header", "missing arity/kappa header");
  return PartialFn(header->first, header->second, std::move(graph));
}

inline nlohmann::json fn_to_json(const PartialFn& f) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [x, v] : f.graph()) entries.push_back({{"in", x.to_string()}, {"out", v}});
  return {{"arity", f.arity()}, {"kappa", f.kappa()}, {"entries", std::move(entries)}};
}

inline PartialFn fn_from_json(const nlohmann::json& j) {
  try {
    const auto arity = j.at("arity").get<std::size_t>();
    const auto kappa = j.at("kappa").get<unsigned>();
    if (arity < 1) throw parse_error(0, "arity", "arity must be positive");
    if (kappa < 2 || kappa > 10) throw parse_error(0, "kappa", "kappa must be in 2..10");
    PartialFn::Graph graph;
    std::size_t idx = 0;
    for (const auto& e : j.at("entries")) {
      ++idx;
      auto x = detail::parse_digits(e.at("in").get<std::string>(), arity, kappa, idx, "entries.in");
      auto v = e.at("out").get<unsigned>();
      if (v >= kappa) throw parse_error(idx, "entries.out", "value out of range for kappa");
      if (!graph.emplace(x, static_cast<value_t>(v)).second)
        throw parse_error(idx, "entries.in", "duplicate domain tuple " + x.to_string());
    }
    return PartialFn(arity, kappa, std::move(graph));
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(0, "json", e.what());
  }
}

/// Accepts either the JSON object or the text form.
inline PartialFn parse_fn_any(std::string_view text) {
  auto t = detail::trim(text);
  while (!t.empty() && (t.front() == '\n')) t.remove_prefix(1);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(0, "json", e.what());
    }
    return fn_from_json(j);
  }
  return parse_fn(text);
}

}  // namespace pclone
