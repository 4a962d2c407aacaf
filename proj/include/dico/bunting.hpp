#pragma once

#include <array>
#include <deque>
#include <numeric>
#include <vector>

#include "dico/dicodensity.hpp"

namespace dico {

struct CommaObj {
  ObjIndex x = 0;
  FinMap leg;  // A -> R X X
};

struct CommaArrow {
  std::size_t src = 0;  // comma object indices
  std::size_t dst = 0;
  MorIndex d = 0;
};

/// A => R: one object per (X, k : A -> R X X), ordered by X then by the rank of k, and
/// every d : X -> Y with R X d . k1 = R d Y . k2.
struct Comma {
  BifunctorPtr r;
  std::size_t a = 0;
  BifunctorPtr source;  // (A => R - -), used to type recovered families
  std::vector<std::size_t> base;  // first comma object of each X
  std::vector<CommaObj> objects;
  std::vector<CommaArrow> arrows;

  std::size_t index(ObjIndex x, std::size_t k_rank) const { return base.at(x) + k_rank; }
};

inline Comma build_comma(BifunctorPtr r, std::size_t a, const Budget& budget = {}) {
  Comma c;
  c.r = r;
  c.a = a;
  c.source = make_power(r, a, budget);
  const auto& d = r->domain();
  std::uint64_t total = 0;
  for (ObjIndex x = 0; x < d.num_objects(); ++x) total += c.source->obj(x, x);
  budget.require(total, "comma objects");
  for (ObjIndex x = 0; x < d.num_objects(); ++x) {
    c.base.push_back(c.objects.size());
    const auto n = r->obj(x, x);
    for (std::size_t k = 0; k < c.source->obj(x, x); ++k) c.objects.push_back({x, FinMap(a, n, unrank_table(k, a, n))});
  }
  for (MorIndex f = 0; f < d.num_morphisms(); ++f) {
    const auto x = d.morphism(f).dom, y = d.morphism(f).cod;
    const auto& left = c.source->ract(x, f);   // k1 |-> R X f . k1
    const auto& right = c.source->lact(f, y);  // k2 |-> R f Y . k2
    std::vector<std::vector<std::size_t>> by_image(c.source->obj(x, y));
    for (std::size_t k2 = 0; k2 < right.dom(); ++k2) by_image[right[k2]].push_back(k2);
    for (std::size_t k1 = 0; k1 < left.dom(); ++k1)
      for (auto k2 : by_image[left[k1]]) {
        budget.require(c.arrows.size() + 1, "comma arrows");
        c.arrows.push_back({c.index(x, k1), c.index(y, k2), f});
      }
  }
  return c;
}

struct BuntingVertex {
  bool is_arrow = false;
  std::size_t ref = 0;  // comma object or arrow index
  std::size_t carried = 0;
};

struct BuntingEdge {
  std::size_t from = 0;  // comma-object vertex
  std::size_t to = 0;    // arrow vertex
  const FinMap* map = nullptr;
};

/// Two-layer diagram: comma-object vertices carrying R X X, arrow vertices carrying R X Y,
/// and edges R X d, R d Y into each arrow vertex.
struct BuntingGraph {
  std::vector<BuntingVertex> vertices;
  std::vector<BuntingEdge> edges;
};

inline BuntingGraph build_bunting(const Comma& c) {
  BuntingGraph g;
  const auto& r = *c.r;
  const auto& d = r.domain();
  for (std::size_t i = 0; i < c.objects.size(); ++i)
    g.vertices.push_back({false, i, r.obj(c.objects[i].x, c.objects[i].x)});
  for (std::size_t j = 0; j < c.arrows.size(); ++j) {
    const auto& ar = c.arrows[j];
    const auto x = d.morphism(ar.d).dom, y = d.morphism(ar.d).cod;
    const auto v = g.vertices.size();
    g.vertices.push_back({true, j, r.obj(x, y)});
    g.edges.push_back({ar.src, v, &r.ract(x, ar.d)});
    g.edges.push_back({ar.dst, v, &r.lact(ar.d, y)});
  }
  return g;
}

/// Whether an edge's map matches the sets carried by its endpoints.
inline bool bunting_well_formed(const BuntingGraph& g) {
  for (const auto& e : g.edges)
    if (e.map->dom() != g.vertices[e.from].carried || e.map->cod() != g.vertices[e.to].carried) return false;
  return true;
}

/// Limit of the diagram in Set: assignments to comma-object vertices (values at arrow
/// vertices are then determined) agreeing along every pair of edges.
struct LimitCarrier {
  std::vector<Table> tuples;
};

namespace detail {

/// Binary constraint map_src(t[src]) = map_dst(t[dst]) for one comma arrow.
struct PairConstraint {
  std::size_t u, v;
  const FinMap* mu;
  const FinMap* mv;
};

class LimitSolver {
 public:
  LimitSolver(const Comma& c, const Budget& budget) : budget_(budget) {
    const auto& r = *c.r;
    const auto& d = r.domain();
    const auto n = c.objects.size();
    dom_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = r.obj(c.objects[i].x, c.objects[i].x);
      dom_[i].assign(s, 1);
    }
    adj_.resize(n);
    for (const auto& ar : c.arrows) {
      const auto x = d.morphism(ar.d).dom, y = d.morphism(ar.d).cod;
      cons_.push_back({ar.src, ar.dst, &r.ract(x, ar.d), &r.lact(ar.d, y)});
      adj_[ar.src].push_back(cons_.size() - 1);
      if (ar.dst != ar.src) adj_[ar.dst].push_back(cons_.size() - 1);
    }
    // Smallest carried sets first, ties by comma order.
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return dom_[a].size() < dom_[b].size(); });
  }

  std::vector<Table> solve() {
    std::vector<Table> out;
    if (!ac3()) return out;
    Table value(dom_.size(), 0);
    search(0, value, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  // Remove unsupported values of `side` under constraint k. Returns whether anything changed.
  bool revise(std::size_t k, bool side_u) {
    const auto& c = cons_[k];
    const auto self = side_u ? c.u : c.v;
    const auto other = side_u ? c.v : c.u;
    const FinMap& ms = side_u ? *c.mu : *c.mv;
    const FinMap& mo = side_u ? *c.mv : *c.mu;
    std::vector<char> reach(ms.cod(), 0);
    if (self == other) {
      // Unary: value must satisfy mu(t) = mv(t).
      bool changed = false;
      for (std::size_t t = 0; t < dom_[self].size(); ++t)
        if (dom_[self][t] && c.mu->operator[](t) != c.mv->operator[](t)) {
          dom_[self][t] = 0;
          changed = true;
        }
      return changed;
    }
    for (std::size_t t = 0; t < dom_[other].size(); ++t)
      if (dom_[other][t]) reach[mo[t]] = 1;
    bool changed = false;
    for (std::size_t t = 0; t < dom_[self].size(); ++t)
      if (dom_[self][t] && !reach[ms[t]]) {
        dom_[self][t] = 0;
        changed = true;
      }
    return changed;
  }

  bool empty(std::size_t v) const { return std::find(dom_[v].begin(), dom_[v].end(), 1) == dom_[v].end(); }

  bool ac3() {
    std::deque<std::pair<std::size_t, bool>> work;
    std::vector<std::array<char, 2>> queued(cons_.size(), {1, 1});
    for (std::size_t k = 0; k < cons_.size(); ++k) {
      work.emplace_back(k, true);
      work.emplace_back(k, false);
    }
    while (!work.empty()) {
      auto [k, side_u] = work.front();
      work.pop_front();
      queued[k][side_u] = 0;
      if (!revise(k, side_u)) continue;
      const auto changed = side_u ? cons_[k].u : cons_[k].v;
      if (empty(changed)) return false;
      for (auto k2 : adj_[changed]) {
        const bool u_side = cons_[k2].v == changed;  // revise the opposite end
        if (!queued[k2][u_side]) {
          queued[k2][u_side] = 1;
          work.emplace_back(k2, u_side);
        }
      }
    }
    return true;
  }

  void search(std::size_t depth, Table& value, std::vector<Table>& out) {
    if (depth == order_.size()) {
      budget_.require(out.size() + 1, "limit tuples");
      out.push_back(value);
      return;
    }
    const auto v = order_[depth];
    for (std::size_t t = 0; t < dom_[v].size(); ++t) {
      if (!dom_[v][t]) continue;
      if (++nodes_ > budget_.limit * 10) throw BudgetError("limit search nodes", nodes_, budget_.limit * 10);
      // Forward check: prune neighbours to values compatible with t; restore afterwards.
      std::vector<std::pair<std::size_t, std::vector<char>>> saved;
      bool ok = true;
      for (auto k : adj_[v]) {
        const auto& c = cons_[k];
        if (c.u == c.v) continue;  // unary, already enforced
        const auto other = c.u == v ? c.v : c.u;
        const FinMap& ms = c.u == v ? *c.mu : *c.mv;
        const FinMap& mo = c.u == v ? *c.mv : *c.mu;
        const auto target = ms[t];
        if (std::find_if(saved.begin(), saved.end(), [&](auto& s) { return s.first == other; }) == saved.end())
          saved.emplace_back(other, dom_[other]);
        bool any = false;
        for (std::size_t w = 0; w < dom_[other].size(); ++w) {
          if (dom_[other][w] && mo[w] != target) dom_[other][w] = 0;
          any |= dom_[other][w] != 0;
        }
        if (!any) {
          ok = false;
          break;
        }
      }
      if (ok) {
        auto keep = dom_[v];
        std::fill(dom_[v].begin(), dom_[v].end(), 0);
        dom_[v][t] = 1;
        value[v] = static_cast<Elem>(t);
        search(depth + 1, value, out);
        dom_[v] = std::move(keep);
      }
      for (auto& [o, d] : saved) dom_[o] = std::move(d);
    }
  }

  Budget budget_;
  std::vector<std::vector<char>> dom_;
  std::vector<PairConstraint> cons_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> order_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Arc consistency to a fixpoint, then backtracking from the smallest carried sets with
/// forward checking. Tuples are sorted lexicographically in comma-object order.
inline LimitCarrier limit_over_bunting(const Comma& c, const Budget& budget = {}) {
  detail::LimitSolver solver(c, budget);
  return LimitCarrier{solver.solve()};
}

/// First comma arrow whose two legs disagree on the tuple.
inline std::optional<std::size_t> violated_arrow(const Comma& c, std::span<const Elem> t) {
  const auto& r = *c.r;
  const auto& d = r.domain();
  for (std::size_t j = 0; j < c.arrows.size(); ++j) {
    const auto& ar = c.arrows[j];
    const auto x = d.morphism(ar.d).dom, y = d.morphism(ar.d).cod;
    if (r.ract(x, ar.d)[t[ar.src]] != r.lact(ar.d, y)[t[ar.dst]]) return j;
  }
  return std::nullopt;
}

/// theta_X(k) = t[(X, k)].
inline Family tuple_to_family(const Comma& c, std::span<const Elem> t) {
  if (t.size() != c.objects.size()) throw ShapeError("tuple_to_family: tuple length differs from comma object count");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto x = c.objects[i].x;
    if (t[i] >= c.r->obj(x, x)) throw ShapeError("tuple_to_family: value out of range");
  }
  if (auto j = violated_arrow(c, t)) throw ShapeError("tuple_to_family: tuple violates comma arrow " + std::to_string(*j));
  return family_from(c.source, c.r, [&](ObjIndex x, Elem k) { return t[c.index(x, k)]; });
}

inline Table family_to_tuple(const Comma& c, const Family& theta) {
  validate_family(theta);
  const auto& d = c.r->domain();
  if (theta.components.size() != d.num_objects()) throw ShapeError("family_to_tuple: wrong number of components");
  Table t(c.objects.size());
  for (ObjIndex x = 0; x < d.num_objects(); ++x) {
    if (theta[x].dom() != c.source->obj(x, x) || theta[x].cod() != c.r->obj(x, x))
      throw ShapeError("family_to_tuple: component has wrong type");
    for (std::size_t k = 0; k < theta[x].dom(); ++k) t[c.index(x, k)] = theta[x][k];
  }
  if (auto j = violated_arrow(c, t)) throw ShapeError("family_to_tuple: family violates comma arrow " + std::to_string(*j));
  return t;
}

/// Limit tuples and directly enumerated carrier elements correspond 1-1 via the two maps.
inline CheckResult bunting_compare(BifunctorPtr r, std::size_t a, const Budget& budget = {}) {
  const std::string name = "bunting-compare(" + r->name() + ",A=" + std::to_string(a) + ")";
  auto comma = build_comma(r, a, budget);
  auto graph = build_bunting(comma);
  if (!bunting_well_formed(graph)) return CheckResult::fail(name, {{"reason", "edge endpoints do not match"}});
  auto lim = limit_over_bunting(comma, budget);
  auto carrier = build_dicodensity(r, a, budget);
  json stats = {{"comma_objects", comma.objects.size()},
                {"comma_arrows", comma.arrows.size()},
                {"limit", lim.tuples.size()},
                {"dicodensity", carrier.size()}};
  if (lim.tuples.size() != carrier.size())
    return CheckResult::fail(name, {{"reason", "cardinality mismatch"}, {"stats", stats}});
  for (std::size_t i = 0; i < lim.tuples.size(); ++i) {
    auto fam = tuple_to_family(comma, lim.tuples[i]);
    if (!carrier.index_of(fam))
      return CheckResult::fail(name, {{"reason", "tuple maps outside carrier"}, {"tuple", lim.tuples[i]}});
    if (family_to_tuple(comma, fam) != lim.tuples[i])
      return CheckResult::fail(name, {{"reason", "round trip on tuple"}, {"tuple", lim.tuples[i]}});
  }
  for (const auto& e : carrier.elements) {
    auto t = family_to_tuple(comma, e);
    if (!std::binary_search(lim.tuples.begin(), lim.tuples.end(), t))
      return CheckResult::fail(name, {{"reason", "family maps outside limit"}, {"family", e.to_json()}});
    if (tuple_to_family(comma, t) != e)
      return CheckResult::fail(name, {{"reason", "round trip on family"}, {"family", e.to_json()}});
  }
  // Identity-monad detector: |limit| = |A| and every tuple is a unit image.
  bool unit_like = lim.tuples.size() == a;
  for (Elem i = 0; i < a && unit_like; ++i) unit_like = carrier.index_of(unit(carrier, i)).has_value();
  stats["identity_like"] = unit_like;
  stats["bijection"] = true;
  auto res = CheckResult::pass(name);
  res.stats = stats;
  return res;
}

}  // namespace dico
