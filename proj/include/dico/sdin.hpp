#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "dico/bifunctor.hpp"

namespace dico {

/// Object-indexed family of maps G X X -> H X X.
struct Family {
  BifunctorPtr source;
  BifunctorPtr target;
  std::vector<FinMap> components;

  const FinMap& operator[](ObjIndex x) const { return components.at(x); }

  friend bool operator==(const Family& a, const Family& b) { return a.components == b.components; }
  friend auto operator<=>(const Family& a, const Family& b) { return a.components <=> b.components; }

  json to_json() const {
    json arr = json::array();
    for (const auto& c : components) arr.push_back(c.table());
    return arr;
  }
};

inline void validate_family(const Family& t) {
  if (!t.source || !t.target) throw ShapeError("family: missing bifunctor");
  if (t.source->domain_ptr() != t.target->domain_ptr())
    throw ShapeError("family: source and target live over different categories");
  const auto& d = t.source->domain();
  if (t.components.size() != d.num_objects()) throw ShapeError("family: component count mismatch");
  for (ObjIndex x = 0; x < d.num_objects(); ++x)
    if (t.components[x].dom() != t.source->obj(x, x) || t.components[x].cod() != t.target->obj(x, x))
      throw ShapeError("family: component " + std::to_string(x) + " has wrong endpoints");
}

inline Family identity_family(BifunctorPtr g) {
  Family t{g, g, {}};
  for (ObjIndex x = 0; x < g->domain().num_objects(); ++x) t.components.push_back(FinMap::identity(g->obj(x, x)));
  return t;
}

/// Family given by a per-object element function.
template <class Fn>
Family family_from(BifunctorPtr g, BifunctorPtr h, Fn&& fn) {
  Family t{g, h, {}};
  for (ObjIndex x = 0; x < g->domain().num_objects(); ++x) {
    Table tab(g->obj(x, x));
    for (std::size_t e = 0; e < tab.size(); ++e) tab[e] = static_cast<Elem>(fn(x, static_cast<Elem>(e)));
    t.components.emplace_back(tab.size(), h->obj(x, x), std::move(tab));
  }
  return t;
}

namespace detail {

inline json morphism_json(const FinCategory& d, MorIndex f) {
  const auto& m = d.morphism(f);
  return {{"index", f}, {"dom", m.dom}, {"cod", m.cod}, {"table", m.map.table()}};
}

}  // namespace detail

/// Hexagon condition: H X f . t_X . G f X = H f Y . t_Y . G Y f on G Y X, for every f : X -> Y.
inline CheckResult is_dinatural(const Family& t) {
  validate_family(t);
  const auto& g = *t.source;
  const auto& h = *t.target;
  const auto& d = g.domain();
  for (MorIndex f = 0; f < d.num_morphisms(); ++f) {
    const auto x = d.morphism(f).dom;
    const auto y = d.morphism(f).cod;
    const auto& gfx = g.lact(f, x);
    const auto& gyf = g.ract(y, f);
    const auto& hxf = h.ract(x, f);
    const auto& hfy = h.lact(f, y);
    for (Elem e = 0; e < g.obj(y, x); ++e) {
      const auto lhs = hxf[t[x][gfx[e]]];
      const auto rhs = hfy[t[y][gyf[e]]];
      if (lhs != rhs)
        return CheckResult::fail("dinatural", {{"f", detail::morphism_json(d, f)},
                                               {"element", g.describe(y, x, e)},
                                               {"lhs", h.describe(x, y, lhs)},
                                               {"rhs", h.describe(x, y, rhs)}});
    }
  }
  return CheckResult::pass("dinatural");
}

/// Element-pair strong dinaturality: for every f : X -> Y and x in G X X, y in G Y Y with
/// G X f (x) = G f Y (y), require H X f (t_X x) = H f Y (t_Y y). The witness is the
/// lexicographically first failing (f, x, y).
inline CheckResult is_strong_dinatural(const Family& t) {
  validate_family(t);
  const auto& g = *t.source;
  const auto& h = *t.target;
  const auto& d = g.domain();
  for (MorIndex f = 0; f < d.num_morphisms(); ++f) {
    const auto x = d.morphism(f).dom;
    const auto y = d.morphism(f).cod;
    const auto& gxf = g.ract(x, f);
    const auto& gfy = g.lact(f, y);
    const auto& hxf = h.ract(x, f);
    const auto& hfy = h.lact(f, y);
    std::vector<std::vector<Elem>> by_image(g.obj(x, y));
    for (Elem b = 0; b < g.obj(y, y); ++b) by_image[gfy[b]].push_back(b);
    for (Elem a = 0; a < g.obj(x, x); ++a)
      for (Elem b : by_image[gxf[a]]) {
        const auto lhs = hxf[t[x][a]];
        const auto rhs = hfy[t[y][b]];
        if (lhs != rhs)
          return CheckResult::fail("strong-dinatural", {{"f", detail::morphism_json(d, f)},
                                                        {"x", g.describe(x, x, a)},
                                                        {"y", g.describe(y, y, b)},
                                                        {"lhs", h.describe(x, y, lhs)},
                                                        {"rhs", h.describe(x, y, rhs)}});
      }
  }
  return CheckResult::pass("strong-dinatural");
}

/// Componentwise composite phi . theta.
inline Family compose_families(const Family& phi, const Family& theta) {
  validate_family(phi);
  validate_family(theta);
  if (phi.source != theta.target) throw ShapeError("compose_families: middle bifunctors differ");
  Family out{theta.source, phi.target, {}};
  for (std::size_t x = 0; x < theta.components.size(); ++x)
    out.components.push_back(compose(phi.components[x], theta.components[x]));
  return out;
}

namespace detail {

/// Fixed-width bitset over the values of one variable.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n, bool full = false) : n_(n), w_((n + 63) / 64, 0) {
    if (full) {
      for (std::size_t i = 0; i < n; ++i) set(i);
    }
  }
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
  bool none() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  /// this &= o; returns whether anything changed.
  bool intersect(const Bits& o) {
    bool changed = false;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      auto nw = w_[i] & o.w_[i];
      changed |= nw != w_[i];
      w_[i] = nw;
    }
    return changed;
  }
  void unite(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      auto w = w_[i];
      while (w) {
        const auto b = static_cast<std::size_t>(__builtin_ctzll(w));
        fn(i * 64 + b);
        w &= w - 1;
      }
    }
  }
  std::size_t size() const noexcept { return n_; }
  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Variables are the pairs (X, x) with x in G X X, valued in H X X. Each (f, w) with
/// w in G X Y yields a hyperedge: all members must project to one common value of H X Y.
class SdinSearch {
 public:
  SdinSearch(const Bifunctor& g, const Bifunctor& h, const Budget& budget) : g_(g), h_(h), budget_(budget) {
    const auto& d = g.domain();
    order_.resize(d.num_objects());
    std::iota(order_.begin(), order_.end(), ObjIndex{0});
    std::stable_sort(order_.begin(), order_.end(), [&](ObjIndex a, ObjIndex b) {
      return d.object(a).size() < d.object(b).size();
    });
    base_.assign(d.num_objects(), 0);
    for (auto x : order_) {
      base_[x] = var_obj_.size();
      for (Elem e = 0; e < g.obj(x, x); ++e) {
        var_obj_.push_back(x);
        var_elem_.push_back(e);
      }
    }
    const auto nv = var_obj_.size();
    domains_.reserve(nv);
    for (std::size_t v = 0; v < nv; ++v) domains_.emplace_back(h.obj(var_obj_[v], var_obj_[v]), true);
    occ_.resize(nv);
    value_.assign(nv, 0);

    for (MorIndex f = 0; f < d.num_morphisms(); ++f) {
      const auto x = d.morphism(f).dom;
      const auto y = d.morphism(f).cod;
      if (f == d.identity(x)) continue;
      const auto& gxf = g.ract(x, f);
      const auto& gfy = g.lact(f, y);
      const FinMap* hxf = &h.ract(x, f);
      const FinMap* hfy = &h.lact(f, y);
      std::vector<std::vector<std::size_t>> lhs(g.obj(x, y)), rhs(g.obj(x, y));
      for (Elem a = 0; a < g.obj(x, x); ++a) lhs[gxf[a]].push_back(base_[x] + a);
      for (Elem b = 0; b < g.obj(y, y); ++b) rhs[gfy[b]].push_back(base_[y] + b);
      for (std::size_t w = 0; w < lhs.size(); ++w) {
        if (lhs[w].empty() || rhs[w].empty()) continue;
        Edge e;
        e.zsize = h.obj(x, y);
        for (auto v : lhs[w]) e.members.push_back({v, hxf});
        for (auto v : rhs[w]) e.members.push_back({v, hfy});
        const auto id = edges_.size();
        for (const auto& m : e.members) occ_[m.var].push_back({id, m.proj});
        edges_.push_back(std::move(e));
      }
    }
    pins_.assign(edges_.size(), kUnpinned);
  }

  std::vector<Family> run(BifunctorPtr gp, BifunctorPtr hp, std::uint64_t* nodes_out) {
    std::vector<Family> out;
    if (propagate_all()) {
      Table assignment(var_obj_.size());
      search(0, assignment, gp, hp, out);
    }
    if (nodes_out) *nodes_out = nodes_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t kUnpinned = std::numeric_limits<std::size_t>::max();

  struct Member {
    std::size_t var;
    const FinMap* proj;
  };
  struct Edge {
    std::size_t zsize = 0;
    std::vector<Member> members;
  };

  const Bits& preimage(const FinMap* p, std::size_t z) {
    auto it = pre_.find(p);
    if (it == pre_.end()) {
      std::vector<Bits> sets(p->cod(), Bits(p->dom()));
      for (std::size_t t = 0; t < p->dom(); ++t) sets[(*p)[t]].set(t);
      it = pre_.emplace(p, std::move(sets)).first;
    }
    return it->second[z];
  }

  // Generalized arc consistency over all hyperedges, to a fixpoint.
  bool propagate_all() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& e : edges_) {
        Bits feasible(e.zsize, true);
        for (const auto& m : e.members) {
          Bits img(e.zsize);
          domains_[m.var].for_each([&](std::size_t t) { img.set((*m.proj)[t]); });
          feasible.intersect(img);
        }
        for (const auto& m : e.members) {
          Bits allowed(domains_[m.var].size());
          feasible.for_each([&](std::size_t z) { allowed.unite(preimage(m.proj, z)); });
          if (domains_[m.var].intersect(allowed)) changed = true;
          if (domains_[m.var].none()) return false;
        }
      }
    }
    return true;
  }

  bool assign(std::size_t v, std::size_t u) {
    for (const auto& [eid, proj] : occ_[v]) {
      const auto z = (*proj)[u];
      if (pins_[eid] == kUnpinned) {
        pins_[eid] = z;
        pin_trail_.push_back(eid);
        for (const auto& m : edges_[eid].members) {
          if (m.var <= v) continue;
          const auto& allowed = preimage(m.proj, z);
          Bits old = domains_[m.var];
          if (domains_[m.var].intersect(allowed)) {
            dom_trail_.emplace_back(m.var, std::move(old));
            if (domains_[m.var].none()) return false;
          }
        }
      } else if (pins_[eid] != z) {
        return false;
      }
    }
    return true;
  }

  void undo(std::size_t dom_mark, std::size_t pin_mark) {
    while (dom_trail_.size() > dom_mark) {
      domains_[dom_trail_.back().first] = std::move(dom_trail_.back().second);
      dom_trail_.pop_back();
    }
    while (pin_trail_.size() > pin_mark) {
      pins_[pin_trail_.back()] = kUnpinned;
      pin_trail_.pop_back();
    }
  }

  void search(std::size_t v, Table& assignment, const BifunctorPtr& gp, const BifunctorPtr& hp,
              std::vector<Family>& out) {
    if (v == var_obj_.size()) {
      budget_.require(out.size() + 1, "strong dinatural solutions");
      Family t{gp, hp, {}};
      const auto& d = g_.domain();
      for (ObjIndex x = 0; x < d.num_objects(); ++x) {
        Table tab(assignment.begin() + static_cast<std::ptrdiff_t>(base_[x]),
                  assignment.begin() + static_cast<std::ptrdiff_t>(base_[x] + g_.obj(x, x)));
        t.components.emplace_back(tab.size(), h_.obj(x, x), std::move(tab));
      }
      out.push_back(std::move(t));
      return;
    }
    const Bits candidates = domains_[v];
    candidates.for_each([&](std::size_t u) {
      if (++nodes_ > budget_.limit * 10)
        throw BudgetError("strong dinatural search nodes (frontier " + std::to_string(out.size()) +
                              " solutions)",
                          nodes_, budget_.limit * 10);
      const auto dom_mark = dom_trail_.size();
      const auto pin_mark = pin_trail_.size();
      if (assign(v, u)) {
        assignment[v] = static_cast<Elem>(u);
        search(v + 1, assignment, gp, hp, out);
      }
      undo(dom_mark, pin_mark);
    });
  }

  const Bifunctor& g_;
  const Bifunctor& h_;
  Budget budget_;
  std::vector<ObjIndex> order_;
  std::vector<std::size_t> base_;
  std::vector<ObjIndex> var_obj_;
  std::vector<Elem> var_elem_;
  std::vector<Bits> domains_;
  std::vector<Elem> value_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<std::size_t, const FinMap*>>> occ_;
  std::vector<std::size_t> pins_;
  std::vector<std::pair<std::size_t, Bits>> dom_trail_;
  std::vector<std::size_t> pin_trail_;
  std::map<const FinMap*, std::vector<Bits>> pre_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

struct SdinStats {
  std::uint64_t nodes = 0;
};

/// Every strong dinatural G -> H, duplicate-free and sorted by component tables.
/// Backtracks over elements (X, x) with objects ascending by carrier size; each fixed
/// value pins the common image on every wedge through it, restricting later elements.
inline std::vector<Family> enumerate_strong_dinaturals(BifunctorPtr g, BifunctorPtr h, const Budget& budget = {},
                                                       SdinStats* stats = nullptr) {
  if (g->domain_ptr() != h->domain_ptr()) throw ShapeError("enumerate_strong_dinaturals: different domains");
  detail::SdinSearch search(*g, *h, budget);
  std::uint64_t nodes = 0;
  auto out = search.run(g, h, &nodes);
  if (stats) stats->nodes = nodes;
  return out;
}

}  // namespace dico
