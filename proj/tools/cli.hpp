#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pclone/pclone.hpp"

namespace pclone::cli {

using nlohmann::json;

/// Everything that determines a report's content.
struct RunConfig {
  std::string command;
  json params = json::object();
  std::size_t enum_cap = default_enumeration_cap;
  std::uint64_t node_budget = SolverOptions{}.node_budget;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool timing = true;

  json to_json() const {
    return {{"command", command}, {"params", params},   {"enum_cap", enum_cap}, {"node_budget", node_budget},
            {"workers", workers}, {"seed", seed},       {"format", format},     {"version", version}};
  }
  SolverOptions solver() const { return {node_budget, workers}; }
};

enum ExitCode : int { ok = 0, usage = 1, unexpected = 2 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json rows_json(const RowMatrix& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(r.to_string());
  return a;
}

/// The relation a function is checked against: a circulant spec, a named
/// relation, or a relation file.
struct Target {
  std::optional<CirculantSpec> spec;
  std::optional<ExtRelation> rel;

  bool member(const ValueTuple& t) const { return spec ? pclone::member(*spec, t) : rel->contains(t); }
  std::size_t arity() const { return spec ? spec->arity() : rel->arity(); }
};

inline Target resolve_target(const std::string& spec, const std::string& rel, const std::string& relfile) {
  const int given = !spec.empty() + !rel.empty() + !relfile.empty();
  if (given != 1) throw invalid_input("give exactly one of --spec, --rel, --relfile");
  Target t;
  if (!spec.empty()) t.spec = parse_spec(spec);
  else if (!rel.empty()) t.rel = named(named_from_keyword(rel));
  else t.rel = parse_relation(read_file(relfile));
  return t;
}

inline std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = pclone::detail::parse_uint(pclone::detail::trim(item), 1, "ks");
    n_of(v);
    if (std::find(ks.begin(), ks.end(), v) != ks.end()) throw invalid_input("--ks values must be distinct");
    ks.push_back(v);
  }
  if (ks.empty()) throw invalid_input("--ks needs at least one value");
  return ks;
}

inline json verdict_json(const SolverVerdict& v, bool timing) {
  json j{{"verdict", v.verdict.holds}, {"nodes", v.nodes}};
  if (v.verdict.witness) j["witness"] = witness_to_json(*v.verdict.witness);
  if (timing) j["millis"] = v.millis;
  return j;
}

}  // namespace detail

/// Entry point shared by the pclone binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pclone: partial clones, circulant relations and preservation checks over {0,1}"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "Omit timing fields for byte-stable output");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--node-budget", cfg.node_budget, "Solver node budget")->check(CLI::PositiveNumber);
  app.add_option("--enum-cap", cfg.enum_cap, "Largest arity enumerated explicitly")->check(CLI::PositiveNumber);
  app.add_option("--workers", cfg.workers, "Solver worker threads")->check(CLI::PositiveNumber);

  std::string spec, rel, relfile, fnfile, witfile, tuple, emit, ks_text, emit_dir;
  std::size_t k = 0, kprime = 0, n = 0, arity = 0, domsize = 0;
  int lemma_id = 0;
  bool brute = false, sample = false;

  auto* gen = app.add_subcommand("gen", "Enumerate a relation or sample a monotone self-dual function");
  gen->add_option("--spec", spec, "Circulant relation, e.g. S:n=5,k=1");
  gen->add_option("--rel", rel, "Named relation: zero, one, pair01, order, diseq, r1, r2");
  gen->add_flag("--msd", sample, "Sample a monotone self-dual partial function (uses --seed)");
  gen->add_option("--arity", arity, "Arity for --msd");
  gen->add_option("--domsize", domsize, "Domain size for --msd");

  auto* cnt = app.add_subcommand("count", "Count the members of a circulant relation");
  cnt->add_option("--spec", spec)->required();

  auto* mem = app.add_subcommand("member", "Test a tuple for membership");
  mem->add_option("--spec", spec)->required();
  mem->add_option("--tuple", tuple)->required();

  auto* build = app.add_subcommand("build", "Emit a constructed object for even k >= 4");
  build->add_option("--k", k)->required();
  build->add_option("--emit", emit)->required()->check(
      CLI::IsMember({"c1", "c1down", "mup", "mdown", "m", "l", "f", "g"}));

  auto* check = app.add_subcommand("check", "Decide whether a partial function preserves a relation");
  check->add_option("--fn", fnfile, "Function file (JSON or text)")->required();
  check->add_option("--spec", spec);
  check->add_option("--rel", rel);
  check->add_option("--relfile", relfile);
  check->add_flag("--brute", brute, "Use explicit enumeration instead of the solver for --spec");
  check->add_option("--witness-out", witfile, "Write the witness, if any, to this file");

  auto* lemma = app.add_subcommand("lemma", "Verify lemma 1, 2 or 3 at fixed (k, k')");
  lemma->add_option("--id", lemma_id)->required()->check(CLI::Range(1, 3));
  lemma->add_option("--k", k)->required();
  lemma->add_option("--kprime", kprime)->required();

  auto* theorem = app.add_subcommand("theorem", "Membership table of g_k in pPol rho^{n(k')}");
  theorem->add_option("--ks", ks_text, "Comma-separated even k >= 4")->required();
  theorem->add_option("--emit-dir", emit_dir, "Write g_k, f_k and witness files here");

  auto* chi = app.add_subcommand("chi", "Injectivity of chi on the subsets of ks");
  chi->add_option("--ks", ks_text)->required();

  auto* replay = app.add_subcommand("replay", "Re-validate a witness file");
  replay->add_option("--fn", fnfile)->required();
  replay->add_option("--spec", spec);
  replay->add_option("--rel", rel);
  replay->add_option("--relfile", relfile);
  replay->add_option("--witness", witfile)->required();

  auto* equiv = app.add_subcommand("equivdefs", "Compare the two definitions of sigma(n,k)");
  equiv->add_option("--n", n)->required();
  equiv->add_option("--k", k)->required();

  std::vector<std::string> storage{"pclone"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage;
  }

  cfg.timing = !no_timing;
  if (const char* w = std::getenv("PCLONE_WORKERS")) {
    try {
      cfg.workers = static_cast<unsigned>(std::max(1, std::stoi(w)));
    } catch (const std::exception&) {
      err << "error: PCLONE_WORKERS must be a positive integer\n";
      return usage;
    }
  }

  auto report = [&](json body) {
    json j{{"config", cfg.to_json()}};
    j.update(body);
    out << detail::dump(j);
  };

  try {
    if (gen->parsed()) {
      cfg.command = "gen";
      if (sample) {
        auto f = sample_monotone_selfdual(arity, domsize, cfg.seed);
        out << detail::dump(fn_to_json(f));
      } else if (!spec.empty()) {
        for (const auto& t : enumerate(parse_spec(spec), cfg.enum_cap)) out << t.to_string() << "\n";
      } else if (!rel.empty()) {
        out << serialize_relation(named(named_from_keyword(rel)));
      } else {
        throw invalid_input("gen needs --spec, --rel or --msd");
      }
      return ok;
    }
    if (cnt->parsed()) {
      out << count(parse_spec(spec)).str() << "\n";
      return ok;
    }
    if (mem->parsed()) {
      const bool m = member(parse_spec(spec), ValueTuple::from_string(tuple));
      if (cfg.format == "json") {
        cfg.command = "member";
        cfg.params = {{"spec", spec}, {"tuple", tuple}};
        report({{"member", m}});
      } else {
        out << (m ? "true" : "false") << "\n";
      }
      return ok;
    }
    if (build->parsed()) {
      if (emit == "c1") out << build_c1(k).to_string() << "\n";
      else if (emit == "c1down") out << build_c1_down(k).to_string() << "\n";
      else {
        const auto b = build_bundle(k);
        const RowMatrix* m = emit == "mup" ? &b.m_up : emit == "mdown" ? &b.m_down : emit == "m" ? &b.m
                             : emit == "l" ? &b.l : nullptr;
        if (m) for (const auto& r : *m) out << r.to_string() << "\n";
        else out << detail::dump(fn_to_json(emit == "f" ? b.f : b.g));
      }
      return ok;
    }
    if (check->parsed()) {
      cfg.command = "check";
      cfg.params = {{"fn", fnfile}, {"spec", spec}, {"rel", rel}, {"relfile", relfile}, {"brute", brute}};
      const auto f = parse_fn_any(detail::read_file(fnfile));
      const auto target = detail::resolve_target(spec, rel, relfile);
      SolverVerdict v;
      if (target.spec && !brute) {
        v = check_preserves(f, *target.spec, cfg.solver());
      } else {
        const auto start = std::chrono::steady_clock::now();
        const ExtRelation r = target.rel ? *target.rel
                                         : [&] {
                                             auto ts = enumerate(*target.spec, cfg.enum_cap);
                                             return ExtRelation(target.spec->arity(), 2, {ts.begin(), ts.end()});
                                           }();
        v.verdict = preserves_bruteforce(f, r);
        v.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
      if (v.verdict.witness && !check_witness(f, [&](const ValueTuple& t) { return target.member(t); },
                                              *v.verdict.witness))
        throw invariant_violation("produced witness failed replay");
      if (!witfile.empty() && v.verdict.witness) detail::write_file(witfile, detail::dump(witness_to_json(*v.verdict.witness)));
      report(detail::verdict_json(v, cfg.timing));
      return ok;
    }
    if (lemma->parsed()) {
      cfg.command = "lemma";
      cfg.params = {{"id", lemma_id}, {"k", k}, {"kprime", kprime}};
      const auto rep = verify_lemma(lemma_id, k, kprime, cfg.solver());
      json body{{"lemma", rep.id},
                {"spec", rep.spec.to_string()},
                {"result", to_string(rep.outcome)},
                {"expected", rep.expected()},
                {"nodes", rep.nodes}};
      if (rep.id == 3)
        body["forms"] = {{"matrices_exist", rep.matrices_exist},
                         {"all_down", rep.all_down_form},
                         {"up_then_down", rep.up_then_down_form}};
      if (rep.certificate) body["certificate"] = detail::rows_json(*rep.certificate);
      if (cfg.timing) body["millis"] = rep.millis;
      report(body);
      return rep.expected() ? ok : unexpected;
    }
    if (theorem->parsed() || chi->parsed()) {
      const auto ks = detail::parse_ks(ks_text);
      cfg.command = theorem->parsed() ? "theorem" : "chi";
      cfg.params = {{"ks", ks}};
      const auto table = theorem_table(ks, cfg.solver(), theorem->parsed());
      bool expected = true;
      for (std::size_t i = 0; i < ks.size(); ++i)
        for (std::size_t j = 0; j < ks.size(); ++j)
          if (table.holds(i, j) != (i != j) || (table.f[i].size() && table.f[i][j].verdict.holds != (i != j)))
            expected = false;

      if (chi->parsed()) {
        const auto rep = chi_demo(table);
        json entries = json::array();
        for (const auto& e : rep.entries) {
          json x = json::array(), fp = json::array();
          for (std::size_t i = 0; i < ks.size(); ++i) {
            if (e.subset[i]) x.push_back(ks[i]);
            fp.push_back(e.fingerprint[i] ? 1 : 0);
          }
          entries.push_back({{"X", x}, {"fingerprint", fp}});
        }
        report({{"subsets", entries}, {"injective", rep.injective}});
        return rep.injective ? ok : unexpected;
      }

      if (!emit_dir.empty()) {
        std::filesystem::create_directories(emit_dir);
        for (std::size_t i = 0; i < ks.size(); ++i) {
          const auto b = build_bundle(ks[i]);
          const auto kk = std::to_string(ks[i]);
          detail::write_file(std::filesystem::path(emit_dir) / ("g_" + kk + ".json"), detail::dump(fn_to_json(b.g)));
          detail::write_file(std::filesystem::path(emit_dir) / ("f_" + kk + ".json"), detail::dump(fn_to_json(b.f)));
          for (std::size_t j = 0; j < ks.size(); ++j) {
            const auto kp = std::to_string(ks[j]);
            if (const auto& w = table.g[i][j].verdict.witness)
              detail::write_file(std::filesystem::path(emit_dir) / ("witness_g" + kk + "_rho" + kp + ".json"),
                                 detail::dump(witness_to_json(*w)));
            if (const auto& w = table.f[i][j].verdict.witness)
              detail::write_file(std::filesystem::path(emit_dir) / ("witness_f" + kk + "_R" + kp + ".json"),
                                 detail::dump(witness_to_json(*w)));
          }
        }
      }

      if (cfg.format == "csv") {
        out << "k,kprime,g_in_pPol_rho,f_in_pPol_R\n";
        for (std::size_t i = 0; i < ks.size(); ++i)
          for (std::size_t j = 0; j < ks.size(); ++j)
            out << ks[i] << "," << ks[j] << "," << table.holds(i, j) << "," << table.f[i][j].verdict.holds << "\n";
      } else {
        json g = json::array(), f = json::array(), entries = json::array();
        for (std::size_t i = 0; i < ks.size(); ++i) {
          json gr = json::array(), fr = json::array();
          for (std::size_t j = 0; j < ks.size(); ++j) {
            gr.push_back(table.holds(i, j));
            fr.push_back(table.f[i][j].verdict.holds);
            json e{{"k", ks[i]}, {"kprime", ks[j]}};
            e["g"] = detail::verdict_json(table.g[i][j], cfg.timing);
            e["f"] = detail::verdict_json(table.f[i][j], cfg.timing);
            entries.push_back(std::move(e));
          }
          g.push_back(gr);
          f.push_back(fr);
        }
        report({{"table_g", g}, {"table_f", f}, {"expected", expected}, {"entries", entries}});
      }
      return expected ? ok : unexpected;
    }
    if (replay->parsed()) {
      cfg.command = "replay";
      cfg.params = {{"fn", fnfile}, {"spec", spec}, {"rel", rel}, {"relfile", relfile}, {"witness", witfile}};
      const auto f = parse_fn_any(detail::read_file(fnfile));
      const auto target = detail::resolve_target(spec, rel, relfile);
      json wj;
      try {
        wj = json::parse(detail::read_file(witfile));
      } catch (const json::exception& e) {
        throw parse_error(0, "witness", e.what());
      }
      const auto w = witness_from_json(wj);
      const auto res = w.h() == target.arity()
                           ? check_witness(f, [&](const ValueTuple& t) { return target.member(t); }, w)
                           : WitnessCheck{WitnessFault::shape, 0};
      report({{"accepted", res.ok()}, {"fault", std::string(to_string(res.fault))}, {"index", res.index}});
      return res.ok() ? ok : unexpected;
    }
    if (equiv->parsed()) {
      const bool eq = defs_equivalent(n, k, cfg.enum_cap);
      if (cfg.format == "json") {
        cfg.command = "equivdefs";
        cfg.params = {{"n", n}, {"k", k}};
        report({{"equivalent", eq}});
      } else {
        out << (eq ? "true" : "false") << "\n";
      }
      return eq ? ok : unexpected;
    }
  } catch (const pclone_error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace pclone::cli
