#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dico/parallel.hpp"
#include "dico/sdin.hpp"

namespace dico {

/// The set of strong dinaturals (A => R - -) -> R - -, one Family per element.
/// A component at X is a table indexed by the rank of k : A -> R X X.
struct DicoCarrier {
  BifunctorPtr r;
  std::size_t a = 0;
  BifunctorPtr source;
  std::vector<Family> elements;

  std::size_t size() const noexcept { return elements.size(); }

  std::optional<std::size_t> index_of(const Family& t) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), t);
    if (it == elements.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - elements.begin());
  }
};

inline DicoCarrier build_dicodensity(BifunctorPtr r, std::size_t a, const Budget& budget = {},
                                     SdinStats* stats = nullptr) {
  DicoCarrier c;
  c.r = r;
  c.a = a;
  c.source = make_power(r, a, budget);
  c.elements = enumerate_strong_dinaturals(c.source, r, budget, stats);
  return c;
}

/// eta(a)_X(k) = k(a).
inline Family unit(const DicoCarrier& c, Elem a) {
  if (a >= c.a) throw IndexError("unit: element " + std::to_string(a) + " outside A");
  return family_from(c.source, c.r, [&](ObjIndex x, Elem k) {
    return table_digit(k, c.a, c.r->obj(x, x), a);
  });
}

/// (f* theta)_X(k) = theta_X(a |-> f(a)_X(k)).
inline Family kleisli_ext(const DicoCarrier& ca, const DicoCarrier& cb, std::span<const Family> f,
                          const Family& theta) {
  if (ca.r != cb.r) throw ShapeError("kleisli_ext: carriers over different bifunctors");
  if (f.size() != ca.a) throw ShapeError("kleisli_ext: f must have one value per element of A");
  for (const auto& fa : f)
    if (fa.source != cb.source) throw ShapeError("kleisli_ext: f does not land in the B-carrier");
  Table inner(ca.a);
  return family_from(cb.source, cb.r, [&](ObjIndex x, Elem k) {
    for (std::size_t i = 0; i < ca.a; ++i) inner[i] = f[i][x][k];
    return theta[x][rank_table(inner, ca.r->obj(x, x))];
  });
}

/// Extension on carrier indices; f lists one B-carrier index per element of A.
inline std::vector<std::size_t> kleisli_ext_indices(const DicoCarrier& ca, const DicoCarrier& cb,
                                                    std::span<const std::size_t> f) {
  std::vector<Family> fs;
  for (auto i : f) fs.push_back(cb.elements.at(i));
  std::vector<std::size_t> out(ca.size());
  for (std::size_t t = 0; t < ca.size(); ++t) {
    auto image = kleisli_ext(ca, cb, fs, ca.elements[t]);
    auto idx = cb.index_of(image);
    if (!idx) throw LawError("kleisli_ext: extension left the carrier at element " + std::to_string(t));
    out[t] = *idx;
  }
  return out;
}

/// The curried isomorphism of the carrier's defining property, on finite C:
/// ceil(f)_X(k)(c) = f(c)_X(k) for f : C -> carrier, floor(theta)(c)_X(k) = theta_X(k)(c).
inline Family ceil_transform(const DicoCarrier& ca, std::span<const std::size_t> f, const Budget& budget = {},
                             BifunctorPtr target = nullptr) {
  if (!target) target = make_power(ca.r, f.size(), budget);
  Table out(f.size());
  return family_from(ca.source, target, [&](ObjIndex x, Elem k) {
    for (std::size_t c = 0; c < f.size(); ++c) out[c] = ca.elements.at(f[c])[x][k];
    return rank_table(out, ca.r->obj(x, x));
  });
}

inline std::vector<std::size_t> floor_transform(const DicoCarrier& ca, const Family& theta, std::size_t c_size) {
  std::vector<std::size_t> out(c_size);
  for (std::size_t c = 0; c < c_size; ++c) {
    auto fam = family_from(ca.source, ca.r, [&](ObjIndex x, Elem k) {
      return table_digit(theta[x][k], c_size, ca.r->obj(x, x), c);
    });
    auto idx = ca.index_of(fam);
    if (!idx) throw LawError("floor_transform: component is not strongly dinatural");
    out[c] = *idx;
  }
  return out;
}

/// f* = floor(Phi . ceil(f)) with Phi = ceil(id), assembled from the transforms
/// rather than the direct formula.
inline std::vector<std::size_t> kleisli_ext_composite(const DicoCarrier& ca, const DicoCarrier& cb,
                                                      std::span<const std::size_t> f, const Budget& budget = {}) {
  std::vector<std::size_t> ids(ca.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const auto phi = ceil_transform(ca, ids, budget);  // (A => R) -> (C_A => R)
  const auto cf = ceil_transform(cb, f, budget, ca.source);  // (B => R) -> (A => R)
  if (!is_strong_dinatural(phi).passed || !is_strong_dinatural(cf).passed)
    throw LawError("kleisli_ext_composite: transform is not strongly dinatural");
  return floor_transform(cb, compose_families(phi, cf), ca.size());
}

/// Carriers and units for |A| = 0..bound.
struct DicoMonad {
  BifunctorPtr r;
  std::vector<DicoCarrier> carriers;
  std::vector<std::vector<std::size_t>> units;  // units[n][a] = carrier index of eta(a)
};

inline DicoMonad build_dico_monad(BifunctorPtr r, std::size_t bound, const Budget& budget = {}) {
  DicoMonad m;
  m.r = r;
  for (std::size_t n = 0; n <= bound; ++n) {
    m.carriers.push_back(build_dicodensity(r, n, budget));
    std::vector<std::size_t> u;
    for (Elem a = 0; a < n; ++a) {
      auto idx = m.carriers.back().index_of(unit(m.carriers.back(), a));
      if (!idx) throw LawError("unit " + std::to_string(a) + " is not a carrier element");
      u.push_back(*idx);
    }
    m.units.push_back(std::move(u));
  }
  return m;
}

namespace detail {

inline json index_map_json(const DicoMonad& m, std::size_t target, std::span<const std::size_t> f) {
  json arr = json::array();
  for (auto i : f) arr.push_back({{"index", i}, {"family", m.carriers[target].elements[i].to_json()}});
  return arr;
}

}  // namespace detail

/// eta* = id, f* . eta = f and (g* . f)* = g* . f* for all carrier sizes <= bound and all
/// maps f : A -> C B, g : B -> C C. Extension tables are computed once per map.
inline CheckResult check_monad_laws(const DicoMonad& m, std::size_t bound, const Budget& budget = {}) {
  const std::string name = "monad-laws(" + m.r->name() + ")";
  if (m.carriers.size() <= bound) throw ShapeError("check_monad_laws: carriers missing for bound");
  // ext[a][b][rank f] = extension table of f : a -> C b
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> ext(bound + 1,
                                                                      std::vector<std::vector<std::vector<std::size_t>>>(bound + 1));
  std::uint64_t instances = 0;
  for (std::size_t a = 0; a <= bound; ++a)
    for (std::size_t b = 0; b <= bound; ++b) {
      const auto nf = checked_pow(m.carriers[b].size(), a, budget, "monad-law maps");
      ext[a][b].resize(nf);
      for (std::size_t r = 0; r < nf; ++r) {
        auto f = unrank_table(r, a, m.carriers[b].size());
        std::vector<std::size_t> fi(f.begin(), f.end());
        ext[a][b][r] = kleisli_ext_indices(m.carriers[a], m.carriers[b], fi);
      }
    }

  auto rank_of = [](std::span<const std::size_t> f, std::size_t base) {
    std::uint64_t r = 0;
    for (auto v : f) r = r * base + v;
    return static_cast<std::size_t>(r);
  };

  for (std::size_t a = 0; a <= bound; ++a) {
    const auto& e = ext[a][a][rank_of(m.units[a], m.carriers[a].size())];
    for (std::size_t t = 0; t < e.size(); ++t) {
      ++instances;
      if (e[t] != t)
        return CheckResult::fail(name, {{"law", "left unit: eta* = id"}, {"A", a}, {"element", t}, {"image", e[t]},
                                        {"family", m.carriers[a].elements[t].to_json()}});
    }
  }
  for (std::size_t a = 0; a <= bound; ++a)
    for (std::size_t b = 0; b <= bound; ++b)
      for (std::size_t r = 0; r < ext[a][b].size(); ++r) {
        auto f = unrank_table(r, a, m.carriers[b].size());
        for (std::size_t i = 0; i < a; ++i) {
          ++instances;
          if (ext[a][b][r][m.units[a][i]] != f[i]) {
            std::vector<std::size_t> fi(f.begin(), f.end());
            return CheckResult::fail(name, {{"law", "right unit: f* . eta = f"}, {"A", a}, {"B", b}, {"a", i},
                                            {"f", detail::index_map_json(m, b, fi)}});
          }
        }
      }
  for (std::size_t a = 0; a <= bound; ++a)
    for (std::size_t b = 0; b <= bound; ++b)
      for (std::size_t c = 0; c <= bound; ++c) {
        const auto nf = ext[a][b].size();
        const auto ng = ext[b][c].size();
        budget.require(static_cast<std::uint64_t>(nf) * ng, "associativity instances");
        instances += static_cast<std::uint64_t>(nf) * ng;
        auto bad = parallel_find_first(nf * ng, [&](std::size_t idx) {
          const auto fr = idx / ng, gr = idx % ng;
          auto f = unrank_table(fr, a, m.carriers[b].size());
          const auto& gstar = ext[b][c][gr];
          std::vector<std::size_t> gf(a);
          for (std::size_t i = 0; i < a; ++i) gf[i] = gstar[f[i]];
          const auto& lhs = ext[a][c][rank_of(gf, m.carriers[c].size())];
          const auto& fstar = ext[a][b][fr];
          for (std::size_t t = 0; t < lhs.size(); ++t)
            if (lhs[t] != gstar[fstar[t]]) return true;
          return false;
        });
        if (bad) {
          const auto fr = *bad / ng, gr = *bad % ng;
          auto f = unrank_table(fr, a, m.carriers[b].size());
          auto g = unrank_table(gr, b, m.carriers[c].size());
          std::vector<std::size_t> fi(f.begin(), f.end()), gi(g.begin(), g.end());
          return CheckResult::fail(name, {{"law", "associativity: (g* . f)* = g* . f*"}, {"A", a}, {"B", b}, {"C", c},
                                          {"f", detail::index_map_json(m, b, fi)},
                                          {"g", detail::index_map_json(m, c, gi)}});
        }
      }
  auto res = CheckResult::pass(name);
  res.stats = {{"instances", instances}};
  return res;
}

/// The same laws on `samples` seeded random maps per size combination, for carriers too
/// large for exhaustive map enumeration. eta* = id is still checked on every element.
inline CheckResult check_monad_laws_sampled(const DicoMonad& m, std::size_t bound, std::size_t samples,
                                            std::uint32_t seed) {
  const std::string name = "monad-laws-sampled(" + m.r->name() + ")";
  if (m.carriers.size() <= bound) throw ShapeError("check_monad_laws_sampled: carriers missing for bound");
  std::mt19937 rng(seed);
  auto random_map = [&](std::size_t dom, std::size_t cod) {
    std::vector<std::size_t> f(dom);
    std::uniform_int_distribution<std::size_t> pick(0, cod - 1);
    for (auto& v : f) v = pick(rng);
    return f;
  };
  std::uint64_t instances = 0;
  for (std::size_t a = 0; a <= bound; ++a) {
    auto e = kleisli_ext_indices(m.carriers[a], m.carriers[a], m.units[a]);
    for (std::size_t t = 0; t < e.size(); ++t, ++instances)
      if (e[t] != t) return CheckResult::fail(name, {{"law", "left unit: eta* = id"}, {"A", a}, {"element", t}});
  }
  for (std::size_t a = 0; a <= bound; ++a)
    for (std::size_t b = 0; b <= bound; ++b)
      for (std::size_t c = 0; c <= bound; ++c) {
        const auto& ca = m.carriers[a];
        const auto& cb = m.carriers[b];
        const auto& cc = m.carriers[c];
        if ((a && cb.size() == 0) || (b && cc.size() == 0)) continue;
        for (std::size_t s = 0; s < samples; ++s) {
          auto f = random_map(a, cb.size());
          auto g = random_map(b, cc.size());
          auto fstar = kleisli_ext_indices(ca, cb, f);
          auto gstar = kleisli_ext_indices(cb, cc, g);
          for (std::size_t i = 0; i < a; ++i, ++instances)
            if (fstar[m.units[a][i]] != f[i])
              return CheckResult::fail(name, {{"law", "right unit: f* . eta = f"}, {"A", a}, {"B", b}, {"f", f}});
          std::vector<std::size_t> gf(a);
          for (std::size_t i = 0; i < a; ++i) gf[i] = gstar[f[i]];
          auto lhs = kleisli_ext_indices(ca, cc, gf);
          for (std::size_t t = 0; t < ca.size(); ++t, ++instances)
            if (lhs[t] != gstar[fstar[t]])
              return CheckResult::fail(name, {{"law", "associativity: (g* . f)* = g* . f*"}, {"A", a}, {"B", b}, {"C", c},
                                              {"f", detail::index_map_json(m, b, f)}, {"g", detail::index_map_json(m, c, g)},
                                              {"element", ca.elements[t].to_json()}});
        }
      }
  auto res = CheckResult::pass(name);
  res.stats = {{"instances", instances}, {"samples", samples}, {"seed", seed}};
  return res;
}

}  // namespace dico
