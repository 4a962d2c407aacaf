#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dico/bunting.hpp"
#include "dico/codensity.hpp"
#include "dico/homobj.hpp"
#include "dico/representation.hpp"

#ifndef DICO_VERSION
#define DICO_VERSION "0.0.0"
#endif

namespace dico {

inline constexpr const char* kReportSchema = "dico-report/1";
inline constexpr const char* kConfigSchema = "dico-config/1";

namespace detail {

inline const json& require_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + "." + key + " is required");
  return j.at(key);
}

inline std::size_t size_field(const json& j, const std::string& key, const std::string& where, std::size_t lo,
                              std::size_t hi, std::optional<std::size_t> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + "." + key + " is required");
  }
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  const auto n = v.get<std::uint64_t>();
  if (n < lo || n > hi)
    throw ConfigError(where + "." + key + " = " + std::to_string(n) + " is outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return static_cast<std::size_t>(n);
}

inline std::string string_field(const json& j, const std::string& key, const std::string& where,
                                std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + "." + key + " is required");
  }
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

inline bool bool_field(const json& j, const std::string& key, const std::string& where, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

inline CategoryPtr category_from(const json& cfg, const Budget& budget) {
  const auto& c = require_field(cfg, "category", "config");
  const auto theory = parse_theory(string_field(c, "theory", "category", "set"));
  const auto n = size_field(c, "n_max", "category", 1, 8);
  const bool empty = bool_field(c, "include_empty", "category", false);
  return build_algebra_category(theory, n, empty, budget);
}

inline FunctorPtr functor_from(const json& f, CategoryPtr d, const std::string& where) {
  const auto kind = string_field(f, "kind", where);
  if (kind == "carrier") return carrier_functor(d);
  if (kind == "constant") return constant_functor(d, size_field(f, "size", where, 0, 16));
  throw ConfigError(where + ".kind '" + kind + "' is not a functor kind (carrier|constant)");
}

inline BifunctorPtr bifunctor_from(const json& b, CategoryPtr d, const Budget& budget, const std::string& where) {
  const auto kind = string_field(b, "kind", where);
  if (kind == "constant") return make_constant(d, FinSet(size_field(b, "size", where, 0, 16)));
  if (kind == "hom") return make_hom(d);
  if (kind == "dummy") return make_dummy(functor_from(require_field(b, "functor", where), d, where + ".functor"));
  if (kind == "homobj") return make_homobj(monad_by_name(string_field(b, "monad", where)), d, budget);
  if (kind == "polynomial") {
    const auto& ar = require_field(b, "arities", where);
    if (!ar.is_array() || ar.empty()) throw ConfigError(where + ".arities must be a non-empty array");
    std::vector<std::size_t> arities;
    for (const auto& v : ar) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw ConfigError(where + ".arities entries must be non-negative integers");
      arities.push_back(v.get<std::size_t>());
    }
    return make_polynomial(d, std::move(arities), budget);
  }
  throw ConfigError(where + ".kind '" + kind + "' is not a bifunctor kind (constant|dummy|hom|homobj|polynomial)");
}

inline std::vector<BifunctorPtr> bifunctors_from(const json& cfg, CategoryPtr d, const Budget& budget) {
  std::vector<BifunctorPtr> out;
  if (cfg.contains("bifunctors")) {
    const auto& arr = cfg.at("bifunctors");
    if (!arr.is_array() || arr.empty()) throw ConfigError("config.bifunctors must be a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(bifunctor_from(arr[i], d, budget, "bifunctors[" + std::to_string(i) + "]"));
  } else {
    out.push_back(bifunctor_from(require_field(cfg, "bifunctor", "config"), d, budget, "bifunctor"));
  }
  return out;
}

inline std::uint32_t seed_from(const json& cfg) {
  if (!cfg.contains("seed")) throw ConfigError("config.seed is required when sampling is used");
  const auto& s = cfg.at("seed");
  if (!s.is_number_integer() || s.get<std::int64_t>() < 0 || s.get<std::int64_t>() > INT64_C(0xFFFFFFFF))
    throw ConfigError("config.seed must be a 32-bit unsigned integer");
  return s.get<std::uint32_t>();
}

inline Theory theory_of_monad(const std::string& name) {
  if (name == "powerset") return Theory::Semilattice;
  if (name == "maybe") return Theory::Pointed;
  if (name == "identity") return Theory::Set;
  throw ConfigError("no algebra presentation for monad '" + name + "'");
}

/// Collects checks and regression constants for one report.
struct ReportBuilder {
  CheckList checks;
  json constants = json::object();

  void add(CheckResult r) { checks.add(std::move(r)); }
  void add_all(const CheckList& l) {
    for (const auto& c : l.items) checks.add(c);
  }
};

// ------------------------------------------------------------------ experiment kinds

inline void run_enumerate_sdin(const json& cfg, const Budget& budget, ReportBuilder& out) {
  auto d = category_from(cfg, budget);
  const auto a_max = size_field(cfg, "a_max", "config", 0, 4);
  const bool hexagon = bool_field(cfg, "hexagon", "config", true);
  const bool composition = bool_field(cfg, "composition", "config", true);
  for (const auto& r : bifunctors_from(cfg, d, budget)) {
    SdinStats st;
    const auto endos = enumerate_strong_dinaturals(r, r, budget, &st);
    json counts = {{"endo", endos.size()}};
    for (std::size_t a = 0; a <= a_max; ++a) {
      const auto src = make_power(r, a, budget);
      const auto fams = enumerate_strong_dinaturals(src, r, budget, &st);
      counts["A=" + std::to_string(a)] = fams.size();
      const std::string tag = r->name() + ",A=" + std::to_string(a);
      if (hexagon) {
        auto res = CheckResult::pass("strong-implies-dinatural(" + tag + ")");
        for (const auto& t : fams)
          if (auto h = is_dinatural(t); !h.passed) {
            res = CheckResult::fail(res.name, {{"family", t.to_json()}, {"hexagon", h.witness}});
            break;
          }
        if (res.passed) res.stats = {{"families", fams.size()}};
        out.add(std::move(res));
      }
      if (composition) {
        auto res = CheckResult::pass("composition-closure(" + tag + ")");
        std::uint64_t pairs = 0;
        for (const auto& phi : endos) {
          for (const auto& t : fams) {
            ++pairs;
            auto c = compose_families(phi, t);
            if (!std::binary_search(fams.begin(), fams.end(), c) || !is_strong_dinatural(c).passed) {
              res = CheckResult::fail(res.name, {{"phi", phi.to_json()}, {"theta", t.to_json()}, {"composite", c.to_json()}});
              break;
            }
          }
          if (!res.passed) break;
        }
        if (res.passed) res.stats = {{"pairs", pairs}};
        out.add(std::move(res));
      }
    }
    out.constants["sdin(" + r->name() + ")"] = counts;
  }
}

inline void run_dicodensity(const json& cfg, const Budget& budget, ReportBuilder& out) {
  auto d = category_from(cfg, budget);
  const auto a_max = size_field(cfg, "a_max", "config", 0, 4);
  const json laws = cfg.value("laws", json::object());
  const auto mode = string_field(laws, "mode", "laws", "exhaustive");
  if (mode != "exhaustive" && mode != "sampled") throw ConfigError("laws.mode must be exhaustive or sampled");
  const auto law_bound = size_field(laws, "bound", "laws", 0, a_max, a_max);
  for (const auto& r : bifunctors_from(cfg, d, budget)) {
    auto m = build_dico_monad(r, a_max, budget);
    json sizes = json::object();
    for (std::size_t a = 0; a < m.carriers.size(); ++a) sizes["A=" + std::to_string(a)] = m.carriers[a].size();
    out.constants["carrier(" + r->name() + ")"] = sizes;
    if (mode == "exhaustive") {
      out.add(check_monad_laws(m, law_bound, budget));
    } else {
      const auto exact = size_field(laws, "exhaustive_bound", "laws", 0, law_bound, 0);
      out.add(check_monad_laws(m, exact, budget));
      out.add(check_monad_laws_sampled(m, law_bound, size_field(laws, "samples", "laws", 1, 1000000), seed_from(cfg)));
    }
    auto all_strong = CheckResult::pass("carrier-strong-dinatural(" + r->name() + ")");
    for (std::size_t a = 0; a <= a_max && all_strong.passed; ++a)
      for (const auto& e : m.carriers[a].elements)
        if (auto s = is_strong_dinatural(e); !s.passed) {
          all_strong = CheckResult::fail(all_strong.name, {{"A", a}, {"family", e.to_json()}, {"witness", s.witness}});
          break;
        }
    out.add(std::move(all_strong));
  }
}

inline void run_bunting_compare(const json& cfg, const Budget& budget, ReportBuilder& out) {
  auto d = category_from(cfg, budget);
  const auto a_max = size_field(cfg, "a_max", "config", 0, 4);
  for (const auto& r : bifunctors_from(cfg, d, budget))
    for (std::size_t a = 0; a <= a_max; ++a) {
      auto res = bunting_compare(r, a, budget);
      out.constants["limit(" + r->name() + ",A=" + std::to_string(a) + ")"] = res.stats.value("limit", json(nullptr));
      out.add(std::move(res));
    }
}

inline void run_codensity_compare(const json& cfg, const Budget& budget, ReportBuilder& out) {
  auto d = category_from(cfg, budget);
  const auto a_max = size_field(cfg, "a_max", "config", 0, 4);
  const auto b_max = size_field(cfg, "b_max", "config", 0, 4, a_max);
  const auto& fs = require_field(cfg, "functors", "config");
  if (!fs.is_array() || fs.empty()) throw ConfigError("config.functors must be a non-empty array");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto g = functor_from(fs[i], d, "functors[" + std::to_string(i) + "]");
    json sizes = json::array();
    for (std::size_t a = 0; a <= a_max; ++a) {
      auto res = codensity_cross_check(g, a, b_max, budget);
      sizes.push_back(end_codensity(g, a, budget).size());
      out.add(std::move(res));
    }
    out.constants["end(" + g->name() + ")"] = sizes;
  }
}

inline void run_verify_representation(const json& cfg, const Budget& budget, ReportBuilder& out) {
  const auto instance = string_field(cfg, "instance", "config");
  const auto a_max = size_field(cfg, "a_max", "config", 0, 3);
  const auto b_max = size_field(cfg, "b_max", "config", 0, 3, a_max);
  if (instance == "monoid-cayley") {
    const auto d_max = size_field(cfg, "d_max", "config", 1, 3);
    const auto m_max = size_field(cfg, "m_max", "config", 1, 3);
    const auto bound = size_field(cfg, "bound", "config", 0, 4);
    if (m_max > d_max) throw ConfigError("config.m_max must not exceed config.d_max (U-bar M must be a D-object)");
    auto b = cayley_bundle(d_max, m_max, budget);
    out.add_all(check_representation(b, a_max, bound, budget));
    json words = json::object();
    for (std::size_t a = 1; a <= a_max; ++a) {
      auto res = check_word_round_trip(b.r, a, bound, budget);
      words["A=" + std::to_string(a)] = res.stats.value("words", json(nullptr));
      out.add(std::move(res));
    }
    out.add(check_monad_agreement(b, a_max, b_max, bound, nullptr, budget));
    out.constants["truncated_words"] = words;
    out.constants["rbb_sizes"] = [&] {
      json j = json::array();
      for (const auto& o : b.rbb) j.push_back(o.size());
      return j;
    }();
  } else if (instance == "adjoint") {
    const auto theory = parse_theory(string_field(cfg, "theory", "config", "semilattice"));
    const auto n_max = size_field(cfg, "n_max", "config", 1, 3);
    auto b = adjoint_bundle(theory, n_max, budget);
    out.add_all(check_representation(b, a_max, a_max, budget));
    json sizes = json::object();
    for (std::size_t a = 0; a <= a_max; ++a) {
      auto res = check_iso_round_trip(b, a, a, budget);
      sizes["A=" + std::to_string(a)] = res.stats.value("carrier", json(nullptr));
      out.add(std::move(res));
    }
    out.add(check_monad_agreement(b, a_max, b_max, a_max, nullptr, budget));
    out.constants["carrier"] = sizes;
  } else {
    throw ConfigError("config.instance '" + instance + "' is not monoid-cayley or adjoint");
  }
}

inline CheckResult pointed_action_table(const TildeAlgebra& ta, const AlgebraObj& pointed, std::size_t len_max) {
  // Lists of maybe-entries: all present gives the composite, any absent gives the constant map.
  const std::string name =
      "cayley-action-table(n=" + std::to_string(pointed.size()) + ",point=" + std::to_string(*pointed.point) + ")";
  const auto n = pointed.size();
  const auto h = ta.alg.n;
  const auto konst = FinMap::constant(n, n, *pointed.point);
  std::uint64_t lists = 0;
  for (std::size_t len = 0; len <= len_max; ++len) {
    Table entries(len, 0);
    do {
      std::vector<Value> list;
      bool absent = false;
      FinMap expect = FinMap::identity(n);
      for (auto e : entries) {
        if (e == h) {
          absent = true;
          list.push_back(Value::coll({}));
        } else {
          list.push_back(Value::coll({Value::at(e)}));
          expect = compose(expect, ta.labels[e]);
        }
      }
      if (absent) expect = konst;
      ++lists;
      const auto& got = ta.labels[tilde_action(ta, list)];
      if (got != expect)
        return CheckResult::fail(name, {{"entries", entries}, {"got", got.table()}, {"expected", expect.table()}});
    } while (next_table(entries, h + 1));
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"lists", lists}};
  return res;
}

inline void run_em_suite(const json& cfg, const Budget& budget, ReportBuilder& out) {
  const auto mname = string_field(cfg, "monad", "config");
  auto t = monad_by_name(mname);
  const auto n_max = size_field(cfg, "n_max", "config", 1, 3);
  const auto theory = theory_of_monad(mname);
  // (a)
  out.add(check_monad(*t, n_max, budget));
  out.add(check_commutative(*t, n_max, budget));
  std::vector<AlgebraObj> objs;
  for (std::size_t n = 1; n <= n_max; ++n)
    for (auto& o : enumerate_structures(theory, n, budget)) objs.push_back(std::move(o));
  std::vector<TAlgebra> algs;
  for (const auto& o : objs) algs.push_back(talgebra_from(t, o, budget));
  out.constants["algebras"] = algs.size();
  // (b)
  {
    auto res = CheckResult::pass("hom-object-direct-equals-equalizer(" + mname + ")");
    json sizes = json::array();
    for (std::size_t i = 0; i < algs.size() && res.passed; ++i)
      for (std::size_t j = 0; j < algs.size(); ++j) {
        auto hd = hom_object_direct(algs[i], algs[j], budget);
        auto he = hom_object_equalizer(algs[i], algs[j], nullptr, budget);
        if (hd.maps != he.maps) {
          res = CheckResult::fail(res.name, {{"src", algs[i].to_json()}, {"dst", algs[j].to_json()}, {"direct", hd.to_json()},
                                             {"equalizer", he.to_json()}});
          break;
        }
        sizes.push_back(hd.size());
      }
    if (res.passed) res.stats = {{"pairs", sizes.size()}};
    out.constants["hom_object_sizes"] = sizes;
    out.add(std::move(res));
  }
  // (c), (d), (e)
  auto internal = CheckResult::pass("internal-structure(" + mname + ")");
  auto tilde = CheckResult::pass("cayley-coherence(" + mname + ")");
  auto semiring = CheckResult::pass("cayley-semiring-equations(" + mname + ")");
  auto retract = CheckResult::pass("cayley-sigma-rho(" + mname + ")");
  json cayley_sizes = json::array();
  for (std::size_t i = 0; i < algs.size(); ++i) {
    if (internal.passed)
      if (auto r = check_internal_laws(internal_structure(algs[i], budget)); !r.passed)
        internal = CheckResult::fail(internal.name, {{"algebra", algs[i].to_json()}, {"witness", r.witness}});
    auto ta = cayley_algebra(algs[i], budget);
    cayley_sizes.push_back(ta.alg.n);
    if (tilde.passed)
      if (auto r = check_tilde(ta, budget); !r.passed)
        tilde = CheckResult::fail(tilde.name, {{"algebra", algs[i].to_json()}, {"witness", r.witness}});
    if (mname == "powerset" && semiring.passed)
      if (auto v = algebra_violation(semiring_view(ta)))
        semiring = CheckResult::fail(semiring.name, {{"algebra", algs[i].to_json()}, {"violation", *v}});
    if (retract.passed)
      if (auto sr = sigma_rho_tilde(ta, budget); !sr.verdict.passed)
        retract = CheckResult::fail(retract.name, {{"algebra", algs[i].to_json()}, {"witness", sr.verdict.witness}});
    if (mname == "maybe") out.add(pointed_action_table(ta, objs[i], size_field(cfg, "len_max", "config", 0, 4, 3)));
  }
  out.constants["cayley_sizes"] = cayley_sizes;
  out.add(std::move(internal));
  out.add(std::move(tilde));
  if (mname == "powerset") {
    out.add(std::move(semiring));
    auto sr_all = CheckResult::pass("semiring-sigma-rho");
    std::size_t count = 0;
    for (std::size_t n = 1; n <= n_max && sr_all.passed; ++n)
      for (const auto& s : enumerate_structures(Theory::IdempotentSemiring, n, budget)) {
        ++count;
        auto ta = tilde_from_semiring(s, budget);
        auto coh = check_tilde(ta, budget);
        auto sr = sigma_rho_tilde(ta, budget);
        if (!coh.passed || !sr.verdict.passed) {
          sr_all = CheckResult::fail(sr_all.name, {{"semiring", ta.to_json()}, {"coherence", coh.to_json()},
                                                   {"sigma_rho", sr.verdict.to_json()}});
          break;
        }
      }
    if (sr_all.passed) sr_all.stats = {{"semirings", count}};
    out.constants["idempotent_semirings"] = count;
    out.add(std::move(sr_all));
  }
  out.add(std::move(retract));
}

inline void run_monad_laws(const json& cfg, const Budget& budget, ReportBuilder& out) {
  const auto& ms = require_field(cfg, "monads", "config");
  if (!ms.is_array() || ms.empty()) throw ConfigError("config.monads must be a non-empty array of names");
  const auto bound = size_field(cfg, "bound", "config", 0, 3);
  for (const auto& m : ms) {
    if (!m.is_string()) throw ConfigError("config.monads entries must be strings");
    auto t = monad_by_name(m.get<std::string>());
    out.add(check_monad(*t, bound, budget));
    out.add(check_commutative(*t, bound, budget));
  }
}

inline CheckResult maybe_formula_check(std::size_t x_max, std::size_t len_max) {
  auto res = CheckResult::pass("dist-law-maybe-formula");
  std::uint64_t inputs = 0;
  for (std::size_t n = 1; n <= x_max; ++n)
    for (std::size_t len = 0; len <= len_max; ++len) {
      Table entries(len, 0);
      do {
        std::vector<std::optional<Elem>> in;
        bool absent = false;
        std::vector<Elem> present;
        for (auto e : entries) {
          if (e == n) {
            in.push_back(std::nullopt);
            absent = true;
          } else {
            in.push_back(e);
            present.push_back(e);
          }
        }
        const MaybeList expect = absent ? MaybeList{} : MaybeList{present};
        ++inputs;
        if (dist_law_maybe(in) != expect)
          return CheckResult::fail(res.name, {{"X", n}, {"entries", entries}});
      } while (next_table(entries, n + 1));
    }
  res.stats = {{"inputs", inputs}};
  return res;
}

inline CheckResult powerset_formula_check(std::size_t x_max, std::size_t len_max) {
  auto res = CheckResult::pass("dist-law-powerset-formula");
  std::uint64_t inputs = 0;
  for (std::size_t n = 1; n <= x_max; ++n)
    for (std::size_t len = 0; len <= len_max; ++len) {
      Table masks(len, 0);
      do {
        std::vector<std::set<Elem>> in;
        for (auto m : masks) {
          std::set<Elem> s;
          for (Elem x = 0; x < n; ++x)
            if (m >> x & 1) s.insert(x);
          in.push_back(std::move(s));
        }
        // All choice sequences, one member from each set.
        std::set<std::vector<Elem>> expect;
        std::uint64_t total = 1;
        for (const auto& s : in) total *= s.size();
        for (std::uint64_t r = 0; r < total; ++r) {
          std::vector<Elem> pick;
          auto rest = r;
          for (const auto& s : in) {
            auto it = s.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(rest % s.size()));
            rest /= s.size();
            pick.push_back(*it);
          }
          expect.insert(std::move(pick));
        }
        ++inputs;
        if (dist_law_powerset(in) != expect)
          return CheckResult::fail(res.name, {{"X", n}, {"masks", masks}});
      } while (next_table(masks, std::size_t{1} << n));
    }
  res.stats = {{"inputs", inputs}};
  return res;
}

inline void run_dist_laws(const json& cfg, const Budget& budget, ReportBuilder& out) {
  const auto x_max = size_field(cfg, "x_max", "config", 1, 3);
  const auto len_max = size_field(cfg, "len_max", "config", 0, 3);
  out.add(maybe_formula_check(x_max, len_max));
  out.add(powerset_formula_check(x_max, len_max));
  const auto& comps = require_field(cfg, "composite", "config");
  if (!comps.is_array()) throw ConfigError("config.composite must be an array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string where = "composite[" + std::to_string(i) + "]";
    const auto& c = comps[i];
    CompositeCaps caps;
    caps.base = size_field(c, "base", where, 0, 3, caps.base);
    caps.max_len = size_field(c, "max_len", where, 0, 3, caps.max_len);
    caps.max_card = size_field(c, "max_card", where, 0, 3, caps.max_card);
    caps.max_weight = size_field(c, "max_weight", where, 0, 8, caps.max_weight);
    auto res = composite_monad_check(monad_by_name(string_field(c, "monad", where)), caps, nullptr, budget);
    out.constants["composite_skipped(" + string_field(c, "monad", where) + ")"] = res.stats.value("skipped", json(nullptr));
    out.add(std::move(res));
  }
}

inline void run_church_iterates(const json& cfg, const Budget& budget, ReportBuilder& out) {
  const auto d_max = size_field(cfg, "d_max", "config", 1, 3);
  const auto n_max = size_field(cfg, "n_max", "config", 0, 16);
  const auto probe = size_field(cfg, "probe", "config", 1, 64);
  auto d = build_finset_category(d_max, false, budget);
  auto r = make_hom(d);
  const auto c = carrier_shell(r, 1, budget);
  Table succ(probe);
  for (Elem i = 0; i < probe; ++i) succ[i] = std::min<Elem>(i + 1, static_cast<Elem>(probe - 1));
  const std::vector<FinMap> k{FinMap(probe, probe, succ)};
  auto strong = CheckResult::pass("church-strong-dinatural");
  json values = json::array();
  std::vector<Table> seen;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto theta = church_iterate(n);
    if (strong.passed)
      if (auto s = is_strong_dinatural(tabulate(theta, c)); !s.passed)
        strong = CheckResult::fail(strong.name, {{"n", n}, {"witness", s.witness}});
    seen.push_back(theta(probe, k).table());
    values.push_back(seen.back()[0]);
  }
  auto distinct = CheckResult::pass("church-distinct-at-probe");
  for (std::size_t i = 0; i < seen.size() && distinct.passed; ++i)
    for (std::size_t j = i + 1; j < seen.size(); ++j)
      if (seen[i] == seen[j]) {
        distinct = CheckResult::fail(distinct.name, {{"n1", i}, {"n2", j}, {"probe", probe}, {"image", seen[i]}});
        break;
      }
  out.constants["church_at_zero"] = values;
  out.constants["sdin_hom_endo"] = enumerate_strong_dinaturals(r, r, budget).size();
  out.add(std::move(strong));
  out.add(std::move(distinct));
}

}  // namespace detail

/// Known experiment kinds, in report order of the docs.
inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {"enumerate-sdin",   "dicodensity",           "bunting-compare",
                                                 "codensity-compare", "verify-representation", "em-suite",
                                                 "monad-laws",       "dist-laws",             "church-iterates"};
  return kinds;
}

/// Runs one configured experiment. Throws ConfigError / BudgetError on invalid input;
/// check failures are reported, not thrown. The report contains no timings.
inline json run_experiment(const json& cfg, std::optional<std::uint64_t> budget_override = std::nullopt) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  if (cfg.contains("schema") && cfg.at("schema") != kConfigSchema)
    throw ConfigError(std::string("config.schema must be '") + kConfigSchema + "'");
  const auto kind = detail::string_field(cfg, "kind", "config");
  Budget budget;
  if (cfg.contains("budget")) budget.limit = detail::size_field(cfg, "budget", "config", 1, SIZE_MAX);
  if (budget_override) budget.limit = *budget_override;

  detail::ReportBuilder out;
  if (kind == "enumerate-sdin") detail::run_enumerate_sdin(cfg, budget, out);
  else if (kind == "dicodensity") detail::run_dicodensity(cfg, budget, out);
  else if (kind == "bunting-compare") detail::run_bunting_compare(cfg, budget, out);
  else if (kind == "codensity-compare") detail::run_codensity_compare(cfg, budget, out);
  else if (kind == "verify-representation") detail::run_verify_representation(cfg, budget, out);
  else if (kind == "em-suite") detail::run_em_suite(cfg, budget, out);
  else if (kind == "monad-laws") detail::run_monad_laws(cfg, budget, out);
  else if (kind == "dist-laws") detail::run_dist_laws(cfg, budget, out);
  else if (kind == "church-iterates") detail::run_church_iterates(cfg, budget, out);
  else throw ConfigError("config.kind '" + kind + "' is unknown");

  std::size_t failed = 0;
  for (const auto& c : out.checks.items) failed += c.passed ? 0 : 1;
  return {{"schema", kReportSchema},
          {"engine", {{"name", "dico"}, {"version", DICO_VERSION}}},
          {"config", cfg},
          {"budget", budget.limit},
          {"checks", out.checks.to_json()},
          {"constants", out.constants},
          {"summary", {{"checks", out.checks.items.size()}, {"failed", failed}, {"passed", failed == 0}}}};
}

inline bool report_passed(const json& report) { return report.at("summary").at("passed").get<bool>(); }

/// One line per check: "PASS name" or "FAIL name".
inline std::string report_text(const json& report) {
  std::string s;
  for (const auto& c : report.at("checks"))
    s += (c.at("passed").get<bool>() ? "PASS " : "FAIL ") + c.at("check").get<std::string>() + "\n";
  const auto& sum = report.at("summary");
  s += std::to_string(sum.at("checks").get<std::size_t>() - sum.at("failed").get<std::size_t>()) + "/" +
       std::to_string(sum.at("checks").get<std::size_t>()) + " checks passed\n";
  return s;
}

}  // namespace dico
