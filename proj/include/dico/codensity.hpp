#pragma once

#include <functional>
#include <numeric>
#include <vector>

#include "dico/dicodensity.hpp"

namespace dico {

/// Tuples tau_X : (A => G X) -> G X satisfying G f . tau_X = tau_Y . (G f . -), i.e. the
/// end of (A => G -) pitchfork G - computed as natural transformations.
struct EndCarrier {
  FunctorPtr g;
  std::size_t a = 0;
  std::vector<std::vector<FinMap>> elements;  // elements[i][X]

  std::size_t size() const noexcept { return elements.size(); }

  std::optional<std::size_t> index_of(const std::vector<FinMap>& t) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), t);
    if (it == elements.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - elements.begin());
  }
};

namespace detail {

/// Backtracking over per-slot candidate lists with pairwise checks fired once both
/// slots are fixed. Solutions come out in lexicographic candidate order.
class SlotSearch {
 public:
  using Check = std::function<bool(const FinMap&, const FinMap&)>;

  explicit SlotSearch(std::vector<std::vector<FinMap>> candidates) : cand_(std::move(candidates)), checks_(cand_.size()) {}

  /// check(value_i, value_j) must hold; stored at the later slot.
  void add(std::size_t i, std::size_t j, Check check) {
    if (i <= j)
      checks_[j].push_back({i, false, std::move(check)});
    else
      checks_[i].push_back({j, true, std::move(check)});
  }

  template <class Emit>
  void run(Emit&& emit, const Budget& budget) {
    std::vector<const FinMap*> chosen(cand_.size(), nullptr);
    std::uint64_t nodes = 0;
    recurse(0, chosen, emit, budget, nodes);
  }

 private:
  struct Entry {
    std::size_t other;
    bool swapped;  // check(value_self, value_other) rather than check(value_other, value_self)
    Check check;
  };

  template <class Emit>
  void recurse(std::size_t s, std::vector<const FinMap*>& chosen, Emit& emit, const Budget& budget,
               std::uint64_t& nodes) {
    if (s == cand_.size()) {
      emit(chosen);
      return;
    }
    for (const auto& v : cand_[s]) {
      if (++nodes > budget.limit * 10) throw BudgetError("component search nodes", nodes, budget.limit * 10);
      bool ok = true;
      for (const auto& e : checks_[s]) {
        const FinMap& other = e.other == s ? v : *chosen[e.other];
        ok = e.swapped ? e.check(v, other) : e.check(other, v);
        if (!ok) break;
      }
      if (!ok) continue;
      chosen[s] = &v;
      recurse(s + 1, chosen, emit, budget, nodes);
    }
    chosen[s] = nullptr;
  }

  std::vector<std::vector<FinMap>> cand_;
  std::vector<std::vector<Entry>> checks_;
};

/// G f . tau_X = tau_Y . (f_* on ranks), where f_* post-composes tuples with G f.
inline bool naturality_holds(const FinMap& gf, const FinMap& post, const FinMap& tx, const FinMap& ty) {
  for (std::size_t k = 0; k < tx.dom(); ++k)
    if (gf[tx[k]] != ty[post[k]]) return false;
  return true;
}

}  // namespace detail

inline EndCarrier end_codensity(FunctorPtr g, std::size_t a, const Budget& budget = {}) {
  const auto& d = g->domain();
  std::vector<ObjIndex> order(d.num_objects());
  std::iota(order.begin(), order.end(), ObjIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](ObjIndex x, ObjIndex y) { return d.object(x).size() < d.object(y).size(); });
  std::vector<std::size_t> slot_of(d.num_objects());
  std::vector<std::vector<FinMap>> cand;
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto x = order[s];
    slot_of[x] = s;
    const auto k = checked_pow(g->obj(x), a, budget, "end component domain");
    cand.push_back(all_maps(FinSet(k), FinSet(g->obj(x)), budget));
  }
  detail::SlotSearch search(std::move(cand));
  for (MorIndex f = 0; f < d.num_morphisms(); ++f) {
    const auto x = d.morphism(f).dom, y = d.morphism(f).cod;
    const FinMap gf = g->map(f);
    const FinMap post = power_map(gf, a, budget);
    search.add(slot_of[x], slot_of[y], [gf, post](const FinMap& tx, const FinMap& ty) {
      return detail::naturality_holds(gf, post, tx, ty);
    });
  }
  EndCarrier out;
  out.g = g;
  out.a = a;
  search.run(
      [&](const std::vector<const FinMap*>& chosen) {
        budget.require(out.elements.size() + 1, "end elements");
        std::vector<FinMap> t(d.num_objects());
        for (ObjIndex x = 0; x < d.num_objects(); ++x) t[x] = *chosen[slot_of[x]];
        out.elements.push_back(std::move(t));
      },
      budget);
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

/// Codensity unit and extension computed on end tuples.
inline std::vector<FinMap> end_unit(const EndCarrier& c, Elem a) {
  if (a >= c.a) throw IndexError("end_unit: element outside A");
  std::vector<FinMap> t;
  for (ObjIndex x = 0; x < c.g->domain().num_objects(); ++x) {
    const auto n = c.g->obj(x);
    const auto k = checked_pow(n, c.a, Budget{}, "end unit");
    Table tab(k);
    for (std::size_t r = 0; r < k; ++r) tab[r] = table_digit(r, c.a, n, a);
    t.emplace_back(k, n, std::move(tab));
  }
  return t;
}

inline std::vector<std::size_t> end_extension(const EndCarrier& ca, const EndCarrier& cb, std::span<const std::size_t> f) {
  std::vector<std::size_t> out(ca.size());
  const auto& d = ca.g->domain();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    std::vector<FinMap> t;
    for (ObjIndex x = 0; x < d.num_objects(); ++x) {
      const auto n = ca.g->obj(x);
      const auto kb = saturating_pow(n, cb.a);
      Table tab(kb);
      Table inner(ca.a);
      for (std::size_t k = 0; k < kb; ++k) {
        for (std::size_t j = 0; j < ca.a; ++j) inner[j] = cb.elements[f[j]][x][k];
        tab[k] = ca.elements[i][x][rank_table(inner, n)];
      }
      t.emplace_back(kb, n, std::move(tab));
    }
    auto idx = cb.index_of(t);
    if (!idx) throw LawError("end_extension: result is not natural");
    out[i] = *idx;
  }
  return out;
}

/// Identity-on-components bijection between the dicodensity carrier of the dummy bifunctor
/// and the end, plus agreement of units and of extensions along every f : A -> T B, |B| <= b_max.
inline CheckResult codensity_cross_check(FunctorPtr g, std::size_t a, std::size_t b_max, const Budget& budget = {}) {
  const std::string name = "codensity-cross-check(" + g->name() + ",A=" + std::to_string(a) + ")";
  auto r = make_dummy(g);
  const auto& d = g->domain();
  std::vector<DicoCarrier> dico;
  std::vector<EndCarrier> ends;
  for (std::size_t n = 0; n <= std::max(a, b_max); ++n) {
    dico.push_back(build_dicodensity(r, n, budget));
    ends.push_back(end_codensity(g, n, budget));
  }
  json sizes = json::array();
  for (std::size_t n = 0; n < dico.size(); ++n) {
    sizes.push_back({{"A", n}, {"dicodensity", dico[n].size()}, {"end", ends[n].size()}});
    if (dico[n].size() != ends[n].size())
      return CheckResult::fail(name, {{"reason", "cardinality mismatch"}, {"sizes", sizes}});
    for (std::size_t i = 0; i < dico[n].size(); ++i)
      if (dico[n].elements[i].components != ends[n].elements[i]) {
        json comps = json::array();
        for (ObjIndex x = 0; x < d.num_objects(); ++x) comps.push_back(ends[n].elements[i][x].table());
        return CheckResult::fail(name, {{"reason", "component mismatch"},
                                        {"A", n},
                                        {"position", i},
                                        {"dicodensity", dico[n].elements[i].to_json()},
                                        {"end", comps}});
      }
  }
  const auto& ca = dico[a];
  for (Elem i = 0; i < a; ++i)
    if (unit(ca, i).components != end_unit(ends[a], i))
      return CheckResult::fail(name, {{"reason", "unit mismatch"}, {"a", i}});
  std::uint64_t checked = 0;
  for (std::size_t b = 0; b <= b_max; ++b) {
    const auto nf = checked_pow(dico[b].size(), a, budget, "cross-check maps");
    for (std::size_t rk = 0; rk < nf; ++rk) {
      auto f = unrank_table(rk, a, dico[b].size());
      std::vector<std::size_t> fi(f.begin(), f.end());
      auto lhs = kleisli_ext_indices(ca, dico[b], fi);
      auto rhs = end_extension(ends[a], ends[b], fi);
      ++checked;
      if (lhs != rhs) return CheckResult::fail(name, {{"reason", "extension mismatch"}, {"B", b}, {"f", fi}, {"dicodensity", lhs}, {"end", rhs}});
    }
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"sizes", sizes}, {"extensions_compared", checked}};
  return res;
}

/// Number of tuples tau_{X,Y} : (A => R X Y) -> R X Y natural in both arguments separately.
/// Counting mode only; no monad structure is built on it.
inline std::uint64_t count_binatural(BifunctorPtr r, std::size_t a, const Budget& budget = {}) {
  const auto& d = r->domain();
  const auto n = d.num_objects();
  std::vector<std::vector<FinMap>> cand;
  for (ObjIndex x = 0; x < n; ++x)
    for (ObjIndex y = 0; y < n; ++y) {
      const auto m = r->obj(x, y);
      cand.push_back(all_maps(FinSet(checked_pow(m, a, budget, "binatural domain")), FinSet(m), budget));
    }
  detail::SlotSearch search(std::move(cand));
  for (MorIndex f = 0; f < d.num_morphisms(); ++f) {
    const auto x0 = d.morphism(f).dom, x1 = d.morphism(f).cod;
    for (ObjIndex y = 0; y < n; ++y) {
      // contravariant: R f Y : R X1 Y -> R X0 Y
      const FinMap act = r->lact(f, y);
      const FinMap post = power_map(act, a, budget);
      search.add(x1 * n + y, x0 * n + y, [act, post](const FinMap& t1, const FinMap& t0) {
        return detail::naturality_holds(act, post, t1, t0);
      });
      // covariant: R Y f : R Y X0 -> R Y X1
      const FinMap cov = r->ract(y, f);
      const FinMap cpost = power_map(cov, a, budget);
      search.add(y * n + x0, y * n + x1, [cov, cpost](const FinMap& t0, const FinMap& t1) {
        return detail::naturality_holds(cov, cpost, t0, t1);
      });
    }
  }
  std::uint64_t count = 0;
  search.run([&](const std::vector<const FinMap*>&) { budget.require(++count, "binatural tuples"); }, budget);
  return count;
}

}  // namespace dico
