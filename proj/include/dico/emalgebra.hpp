#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dico/category.hpp"
#include "dico/check.hpp"

namespace dico {

/// Element of an iterated construction over canonical finite sets: an atom, a pair, or a
/// collection whose reading (subset, option, list) is fixed by whatever produced it.
/// Subsets are kept sorted and duplicate-free.
struct Value {
  enum class Kind : std::uint8_t { Atom, Pair, Coll };

  Kind kind = Kind::Atom;
  std::uint64_t atom = 0;
  std::vector<Value> items;

  static Value at(std::uint64_t a) { return Value{Kind::Atom, a, {}}; }
  static Value pair(Value x, Value y) { return Value{Kind::Pair, 0, {std::move(x), std::move(y)}}; }
  static Value coll(std::vector<Value> xs) { return Value{Kind::Coll, 0, std::move(xs)}; }
  static Value set(std::vector<Value> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return coll(std::move(xs));
  }

  const Value& first() const { return items.at(0); }
  const Value& second() const { return items.at(1); }

  friend bool operator==(const Value& x, const Value& y) {
    return x.kind == y.kind && x.atom == y.atom && x.items == y.items;
  }
  friend std::strong_ordering operator<=>(const Value& x, const Value& y) {
    if (x.kind != y.kind) return x.kind <=> y.kind;
    if (x.kind == Kind::Atom) return x.atom <=> y.atom;
    return std::lexicographical_compare_three_way(x.items.begin(), x.items.end(), y.items.begin(), y.items.end());
  }

  json to_json() const {
    switch (kind) {
      case Kind::Atom: return atom;
      case Kind::Pair: return {{"pair", {first().to_json(), second().to_json()}}};
      case Kind::Coll: {
        json arr = json::array();
        for (const auto& v : items) arr.push_back(v.to_json());
        return arr;
      }
    }
    return nullptr;
  }
};

inline std::vector<Value> atoms(std::size_t n) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Value::at(i));
  return out;
}

struct TAlgebra;

/// A monad on finite sets given by its action on values. Strengths default to the
/// canonical cartesian ones. The optional hooks let large instances avoid materializing
/// T T X or T T T X; each hook must be an exact equivalent of the law it replaces.
struct MonadImpl {
  using Fn = std::function<Value(const Value&)>;

  std::string name;
  Fn unit;                                                   // X -> T X
  Fn mult;                                                   // T T X -> T X
  std::function<Value(const Value&, const Fn&)> fmap;        // T f
  std::function<std::vector<Value>(std::span<const Value>, const Budget&)> elements;  // T over a listed base
  std::function<std::uint64_t(std::uint64_t)> count;         // |T X| from |X|, saturating
  Fn rstrength;                                              // tau  : T X x Y -> T (X x Y), on pairs
  Fn lstrength;                                              // tau' : X x T Y -> T (X x Y), on pairs

  /// Elements of T Y that generate it under operations both associativity composites
  /// preserve by construction. Used instead of all of T T T X when that is too large.
  std::function<std::vector<Value>(std::span<const Value>)> generators;
  /// Exact reformulation of a . mu = a . T a that only inspects T X.
  std::function<std::optional<std::string>(const TAlgebra&)> compact_algebra_laws;
  /// Elements of T Y with at most `card` members whose member weights sum to at most
  /// `max_weight`, for capped composite enumeration. Returns (element, weight) pairs.
  std::function<std::vector<std::pair<Value, std::size_t>>(std::span<const Value>, std::span<const std::size_t>,
                                                           std::size_t card, std::size_t max_weight)>
      small_elements;
  /// Structure map of a finkernel algebra of the matching theory, listed over T{0..n-1}.
  std::function<Elem(const AlgebraObj&, const Value&)> structure_of;
};

using MonadPtr = std::shared_ptr<const MonadImpl>;

namespace detail {
inline std::optional<std::string> powerset_compact_laws(const TAlgebra& alg);
}  // namespace detail

/// Plug-in constructor: fills the canonical strengths when absent.
inline MonadPtr make_monad(MonadImpl m) {
  if (!m.unit || !m.mult || !m.fmap || !m.elements || !m.count)
    throw ShapeError("make_monad: unit, mult, fmap, elements and count are required");
  auto fmap = m.fmap;
  if (!m.rstrength)
    m.rstrength = [fmap](const Value& p) {
      const Value y = p.second();
      return fmap(p.first(), [&y](const Value& x) { return Value::pair(x, y); });
    };
  if (!m.lstrength)
    m.lstrength = [fmap](const Value& p) {
      const Value x = p.first();
      return fmap(p.second(), [&x](const Value& y) { return Value::pair(x, y); });
    };
  return std::make_shared<const MonadImpl>(std::move(m));
}

inline MonadPtr identity_monad() {
  MonadImpl m;
  m.name = "identity";
  m.unit = [](const Value& v) { return v; };
  m.mult = [](const Value& v) { return v; };
  m.fmap = [](const Value& v, const MonadImpl::Fn& f) { return f(v); };
  m.elements = [](std::span<const Value> base, const Budget&) { return std::vector<Value>(base.begin(), base.end()); };
  m.count = [](std::uint64_t n) { return n; };
  m.generators = [](std::span<const Value> base) { return std::vector<Value>(base.begin(), base.end()); };
  m.small_elements = [](std::span<const Value> base, std::span<const std::size_t> w, std::size_t, std::size_t max_w) {
    std::vector<std::pair<Value, std::size_t>> out;
    for (std::size_t i = 0; i < base.size(); ++i)
      if (w[i] <= max_w) out.emplace_back(base[i], w[i]);
    return out;
  };
  m.structure_of = [](const AlgebraObj&, const Value& v) { return static_cast<Elem>(v.atom); };
  return make_monad(std::move(m));
}

/// Finite powerset. Algebras are join-semilattices with bottom, a(S) = join of S.
inline MonadPtr powerset_monad() {
  MonadImpl m;
  m.name = "powerset";
  m.unit = [](const Value& v) { return Value::coll({v}); };
  m.mult = [](const Value& v) {
    std::vector<Value> out;
    for (const auto& s : v.items) out.insert(out.end(), s.items.begin(), s.items.end());
    return Value::set(std::move(out));
  };
  m.fmap = [](const Value& v, const MonadImpl::Fn& f) {
    std::vector<Value> out;
    for (const auto& x : v.items) out.push_back(f(x));
    return Value::set(std::move(out));
  };
  m.elements = [](std::span<const Value> base, const Budget& budget) {
    const auto n = checked_pow(2, base.size(), budget, "powerset elements");
    std::vector<Value> out;
    out.reserve(n);
    for (std::uint64_t mask = 0; mask < n; ++mask) {
      std::vector<Value> s;
      for (std::size_t i = 0; i < base.size(); ++i)
        if (mask >> i & 1) s.push_back(base[i]);
      out.push_back(Value::set(std::move(s)));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  m.count = [](std::uint64_t n) { return saturating_pow(2, n); };
  // mu . T mu and mu . mu both send a union of sets to the union of the images.
  m.generators = [](std::span<const Value> base) {
    std::vector<Value> out{Value::coll({})};
    for (const auto& v : base) out.push_back(Value::coll({v}));
    return out;
  };
  m.compact_algebra_laws = [](const TAlgebra& alg) { return detail::powerset_compact_laws(alg); };
  m.small_elements = [](std::span<const Value> base, std::span<const std::size_t> w, std::size_t card,
                        std::size_t max_w) {
    std::vector<std::pair<Value, std::size_t>> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t total) {
      std::vector<Value> s;
      for (auto i : pick) s.push_back(base[i]);
      out.emplace_back(Value::set(std::move(s)), total);
      if (pick.size() == card) return;
      for (std::size_t i = from; i < base.size(); ++i)
        if (total + w[i] <= max_w) {
          pick.push_back(i);
          rec(i + 1, total + w[i]);
          pick.pop_back();
        }
    };
    rec(0, 0);
    return out;
  };
  m.structure_of = [](const AlgebraObj& o, const Value& v) {
    if (!has_join(o.theory)) throw LawError("powerset algebra needs a join-semilattice");
    Elem acc = *o.bottom;
    for (const auto& x : v.items) acc = o.vee(acc, static_cast<Elem>(x.atom));
    return acc;
  };
  return make_monad(std::move(m));
}

/// X + 1 built through the plug-in interface: nothing is the empty collection, just x the
/// singleton. Algebras are pointed sets.
inline MonadPtr maybe_monad() {
  MonadImpl m;
  m.name = "maybe";
  m.unit = [](const Value& v) { return Value::coll({v}); };
  m.mult = [](const Value& v) { return v.items.empty() ? v : v.items[0]; };
  m.fmap = [](const Value& v, const MonadImpl::Fn& f) {
    return v.items.empty() ? v : Value::coll({f(v.items[0])});
  };
  m.elements = [](std::span<const Value> base, const Budget& budget) {
    budget.require(base.size() + 1, "maybe elements");
    std::vector<Value> out{Value::coll({})};
    for (const auto& v : base) out.push_back(Value::coll({v}));
    std::sort(out.begin(), out.end());
    return out;
  };
  m.count = [](std::uint64_t n) { return n == UINT64_MAX ? n : n + 1; };
  m.small_elements = [](std::span<const Value> base, std::span<const std::size_t> w, std::size_t, std::size_t max_w) {
    std::vector<std::pair<Value, std::size_t>> out{{Value::coll({}), 0}};
    for (std::size_t i = 0; i < base.size(); ++i)
      if (w[i] <= max_w) out.emplace_back(Value::coll({base[i]}), w[i]);
    return out;
  };
  m.structure_of = [](const AlgebraObj& o, const Value& v) {
    if (!has_point(o.theory)) throw LawError("maybe algebra needs a pointed set");
    return v.items.empty() ? *o.point : static_cast<Elem>(v.items[0].atom);
  };
  return make_monad(std::move(m));
}

inline MonadPtr monad_by_name(const std::string& name) {
  if (name == "identity") return identity_monad();
  if (name == "powerset") return powerset_monad();
  if (name == "maybe") return maybe_monad();
  throw ConfigError("unknown monad '" + name + "'");
}

/// Eilenberg-Moore algebra on {0..n-1}; a[i] is the structure map at tcarrier[i].
struct TAlgebra {
  MonadPtr t;
  std::size_t n = 0;
  std::vector<Value> tcarrier;
  Table a;

  Elem apply(const Value& v) const {
    auto it = std::lower_bound(tcarrier.begin(), tcarrier.end(), v);
    if (it == tcarrier.end() || *it != v) throw IndexError("TAlgebra: value outside T of the carrier");
    return a[it - tcarrier.begin()];
  }

  json to_json() const {
    json arr = json::array();
    for (std::size_t i = 0; i < tcarrier.size(); ++i) arr.push_back({tcarrier[i].to_json(), a[i]});
    return {{"monad", t->name}, {"size", n}, {"structure", arr}};
  }
};

/// First failing Eilenberg-Moore law, or nullopt.
inline std::optional<std::string> talgebra_violation(const TAlgebra& alg, const Budget& budget = {}) {
  const auto& t = *alg.t;
  for (std::size_t x = 0; x < alg.n; ++x)
    if (alg.apply(t.unit(Value::at(x))) != x) return "a . eta != id at " + std::to_string(x);
  if (t.count(alg.tcarrier.size()) <= budget.limit) {
    for (const auto& z : t.elements(alg.tcarrier, budget)) {
      const auto lhs = alg.apply(t.mult(z));
      const auto rhs = alg.apply(t.fmap(z, [&](const Value& v) { return Value::at(alg.apply(v)); }));
      if (lhs != rhs) return "a . mu != a . T a at " + json(z.to_json()).dump();
    }
    return std::nullopt;
  }
  if (t.compact_algebra_laws) return t.compact_algebra_laws(alg);
  throw BudgetError("algebra law domain T T X", t.count(alg.tcarrier.size()), budget.limit);
}

inline TAlgebra make_talgebra(MonadPtr t, std::size_t n, const std::function<Elem(const Value&)>& a,
                              const Budget& budget = {}) {
  TAlgebra alg;
  alg.t = std::move(t);
  alg.n = n;
  auto base = atoms(n);
  alg.tcarrier = alg.t->elements(base, budget);
  for (const auto& v : alg.tcarrier) {
    const auto e = a(v);
    if (e >= n) throw ShapeError("make_talgebra: structure value out of range");
    alg.a.push_back(e);
  }
  if (auto v = talgebra_violation(alg, budget)) throw LawError(alg.t->name + "-algebra: " + *v);
  return alg;
}

/// The T-algebra presenting a finkernel algebra (semilattice for powerset, pointed set for
/// maybe, any set for identity).
inline TAlgebra talgebra_from(MonadPtr t, const AlgebraObj& obj, const Budget& budget = {}) {
  if (!t->structure_of) throw ShapeError("talgebra_from: monad has no algebra presentation");
  auto fn = t->structure_of;
  return make_talgebra(t, obj.size(), [&](const Value& v) { return fn(obj, v); }, budget);
}

namespace detail {

inline std::optional<std::string> powerset_compact_laws(const TAlgebra& alg) {
  // a(S u S') = a{a S, a S'} together with a . eta = id is equivalent to a . mu = a . T a
  // by induction on the number of sets in the union.
  const auto& t = *alg.t;
  for (std::size_t i = 0; i < alg.tcarrier.size(); ++i)
    for (std::size_t j = 0; j < alg.tcarrier.size(); ++j) {
      const auto u = t.mult(Value::coll({alg.tcarrier[i], alg.tcarrier[j]}));
      const auto lhs = alg.apply(u);
      const auto rhs = alg.apply(Value::set({Value::at(alg.a[i]), Value::at(alg.a[j])}));
      if (lhs != rhs) return "a(S u S') != a{aS, aS'} at " + json(u.to_json()).dump();
    }
  return std::nullopt;
}

}  // namespace detail

/// Unit laws on T X and associativity on T T T X for |X| <= bound. Where T T T X exceeds
/// the budget, associativity runs on the monad's generators of T (T T X).
inline CheckResult check_monad(const MonadImpl& t, std::size_t bound, const Budget& budget = {}) {
  const std::string name = "monad-laws(" + t.name + ")";
  json sizes = json::array();
  std::uint64_t instances = 0;
  for (std::size_t n = 0; n <= bound; ++n) {
    const auto base = atoms(n);
    const auto tx = t.elements(base, budget);
    for (const auto& v : tx) {
      ++instances;
      if (t.mult(t.unit(v)) != v)
        return CheckResult::fail(name, {{"law", "mu . eta T = id"}, {"X", n}, {"element", v.to_json()}});
      if (t.mult(t.fmap(v, t.unit)) != v)
        return CheckResult::fail(name, {{"law", "mu . T eta = id"}, {"X", n}, {"element", v.to_json()}});
    }
    const auto ttx = t.elements(tx, budget);
    std::vector<Value> domain;
    std::string mode = "exhaustive";
    if (t.count(ttx.size()) <= budget.limit) {
      domain = t.elements(ttx, budget);
    } else if (t.generators) {
      domain = t.generators(ttx);
      mode = "generators";
    } else {
      throw BudgetError("associativity domain T T T X", t.count(ttx.size()), budget.limit);
    }
    for (const auto& z : domain) {
      ++instances;
      const auto lhs = t.mult(t.mult(z));
      const auto rhs = t.mult(t.fmap(z, t.mult));
      if (lhs != rhs)
        return CheckResult::fail(name, {{"law", "mu . mu T = mu . T mu"}, {"X", n}, {"element", z.to_json()},
                                        {"lhs", lhs.to_json()}, {"rhs", rhs.to_json()}});
    }
    sizes.push_back({{"X", n}, {"TX", tx.size()}, {"TTX", ttx.size()}, {"associativity", mode}, {"checked", domain.size()}});
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"sizes", sizes}, {"instances", instances}};
  return res;
}

/// mu . T tau' . tau = mu . T tau . tau' on T A x T B for |A|, |B| <= bound.
inline CheckResult check_commutative(const MonadImpl& t, std::size_t bound, const Budget& budget = {}) {
  const std::string name = "commutativity(" + t.name + ")";
  std::uint64_t instances = 0;
  for (std::size_t na = 0; na <= bound; ++na)
    for (std::size_t nb = 0; nb <= bound; ++nb) {
      const auto ta = t.elements(atoms(na), budget);
      const auto tb = t.elements(atoms(nb), budget);
      for (const auto& s : ta)
        for (const auto& u : tb) {
          ++instances;
          const auto lhs = t.mult(t.fmap(t.rstrength(Value::pair(s, u)), t.lstrength));
          const auto rhs = t.mult(t.fmap(t.lstrength(Value::pair(s, u)), t.rstrength));
          if (lhs != rhs)
            return CheckResult::fail(name, {{"A", na}, {"B", nb}, {"s", s.to_json()}, {"t", u.to_json()},
                                            {"lhs", lhs.to_json()}, {"rhs", rhs.to_json()}});
        }
    }
  auto res = CheckResult::pass(name);
  res.stats = {{"instances", instances}};
  return res;
}

/// b . T h . tau' = h . (X x a) on X x T A; h is tabulated at x * |A| + a.
inline CheckResult is_one_linear(const FinMap& h, std::size_t x_size, const TAlgebra& src, const TAlgebra& dst) {
  if (h.dom() != x_size * src.n || h.cod() != dst.n) throw ShapeError("is_one_linear: h has wrong endpoints");
  const auto& t = *src.t;
  auto apply_h = [&](const Value& p) { return Value::at(h[p.first().atom * src.n + p.second().atom]); };
  for (std::size_t x = 0; x < x_size; ++x)
    for (std::size_t i = 0; i < src.tcarrier.size(); ++i) {
      const auto lhs = dst.apply(t.fmap(t.lstrength(Value::pair(Value::at(x), src.tcarrier[i])), apply_h));
      const auto rhs = h[x * src.n + src.a[i]];
      if (lhs != rhs)
        return CheckResult::fail("one-linear", {{"x", x}, {"element", src.tcarrier[i].to_json()}, {"lhs", lhs}, {"rhs", rhs}});
    }
  return CheckResult::pass("one-linear");
}

/// The T-algebra homomorphisms src -> dst in table order.
struct HomObject {
  std::size_t src_size = 0;
  std::size_t dst_size = 0;
  std::vector<FinMap> maps;

  std::size_t size() const noexcept { return maps.size(); }

  std::optional<Elem> index_of(const FinMap& f) const {
    auto it = std::lower_bound(maps.begin(), maps.end(), f);
    if (it == maps.end() || *it != f) return std::nullopt;
    return static_cast<Elem>(it - maps.begin());
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& f : maps) arr.push_back(f.table());
    return arr;
  }
};

/// Filters A => B by f . a = b . T f.
inline HomObject hom_object_direct(const TAlgebra& src, const TAlgebra& dst, const Budget& budget = {}) {
  HomObject h{src.n, dst.n, {}};
  const auto& t = *src.t;
  for (auto& f : all_maps(FinSet(src.n), FinSet(dst.n), budget)) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < src.tcarrier.size(); ++i) {
      const auto image = t.fmap(src.tcarrier[i], [&](const Value& v) { return Value::at(f[v.atom]); });
      ok = f[src.a[i]] == dst.apply(image);
    }
    if (ok) h.maps.push_back(std::move(f));
  }
  return h;
}

/// phi(f)(t) for f : A => B given by its rank and t in T A.
using PhiFn = std::function<Value(std::uint64_t, const Value&)>;

/// Transpose of (A => B) x T A --tau'--> T((A => B) x A) --T app--> T B.
inline PhiFn default_phi(MonadPtr t, std::size_t na, std::size_t nb) {
  return [t, na, nb](std::uint64_t f, const Value& v) {
    auto app = [na, nb](const Value& p) { return Value::at(table_digit(p.first().atom, na, nb, p.second().atom)); };
    return t->fmap(t->lstrength(Value::pair(Value::at(f), v)), app);
  };
}

/// The equalizer of (T A => b) . phi and (a => B) inside A => B.
inline HomObject hom_object_equalizer(const TAlgebra& src, const TAlgebra& dst, PhiFn phi = nullptr,
                                      const Budget& budget = {}) {
  if (!phi) phi = default_phi(src.t, src.n, dst.n);
  HomObject h{src.n, dst.n, {}};
  const auto total = checked_pow(dst.n, src.n, budget, "function object");
  for (std::uint64_t r = 0; r < total; ++r) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < src.tcarrier.size(); ++i)
      ok = dst.apply(phi(r, src.tcarrier[i])) == table_digit(r, src.n, dst.n, src.a[i]);
    if (ok) h.maps.emplace_back(src.n, dst.n, unrank_table(r, src.n, dst.n));
  }
  return h;
}

/// The element of the hom object corresponding to a 1-linear h : X x A -> B, per x.
inline Table transpose(const FinMap& h, std::size_t x_size, const TAlgebra& src, const TAlgebra& dst,
                       const HomObject& hom) {
  if (auto lin = is_one_linear(h, x_size, src, dst); !lin.passed)
    throw LawError("transpose: map is not 1-linear: " + lin.witness.dump());
  Table out(x_size);
  for (std::size_t x = 0; x < x_size; ++x) {
    Table row(src.n);
    for (std::size_t a = 0; a < src.n; ++a) row[a] = h[x * src.n + a];
    auto idx = hom.index_of(FinMap(src.n, dst.n, std::move(row)));
    if (!idx) throw LawError("transpose: row " + std::to_string(x) + " is not a homomorphism");
    out[x] = *idx;
  }
  return out;
}

/// hcomp : (B => C) x (A => B) -> (A => C), the transpose of happ . (id x happ).
inline Table hom_compose(const TAlgebra& a, const HomObject& ab, const HomObject& bc, const HomObject& ac,
                         const TAlgebra& c) {
  const std::size_t x_size = bc.size() * ab.size();
  Table h(x_size * a.n);
  for (std::size_t g = 0; g < bc.size(); ++g)
    for (std::size_t f = 0; f < ab.size(); ++f)
      for (std::size_t x = 0; x < a.n; ++x) h[(g * ab.size() + f) * a.n + x] = bc.maps[g][ab.maps[f][x]];
  return transpose(FinMap(x_size * a.n, c.n, std::move(h)), x_size, a, c, ac);
}

/// Internal evaluation, identity and composition on (A, a) => (A, a).
struct InternalStructure {
  TAlgebra alg;
  HomObject hom;
  Table happ;   // happ[f * n + x]
  Elem hid = 0;
  Table hcomp;  // hcomp[g * |hom| + f] = g . f

  Elem app(Elem f, Elem x) const { return happ[f * alg.n + x]; }
  Elem comp(Elem g, Elem f) const { return hcomp[g * hom.size() + f]; }
};

inline InternalStructure internal_structure(const TAlgebra& alg, const Budget& budget = {}) {
  InternalStructure s;
  s.alg = alg;
  s.hom = hom_object_direct(alg, alg, budget);
  // happ is the transpose of the identity on the hom object: evaluation.
  s.happ.resize(s.hom.size() * alg.n);
  for (std::size_t f = 0; f < s.hom.size(); ++f)
    for (std::size_t x = 0; x < alg.n; ++x) s.happ[f * alg.n + x] = s.hom.maps[f][x];
  // hid is the transpose of 1 x A = A.
  s.hid = transpose(FinMap::identity(alg.n), 1, alg, alg, s.hom)[0];
  s.hcomp = hom_compose(alg, s.hom, s.hom, s.hom, alg);
  return s;
}

/// happ(hid, x) = x, unit laws and associativity of hcomp, exhaustively.
inline CheckResult check_internal_laws(const InternalStructure& s) {
  const std::string name = "internal-structure";
  const auto n = s.hom.size();
  for (Elem x = 0; x < s.alg.n; ++x)
    if (s.app(s.hid, x) != x) return CheckResult::fail(name, {{"law", "happ(hid, x) = x"}, {"x", x}});
  for (Elem f = 0; f < n; ++f) {
    if (s.comp(f, s.hid) != f) return CheckResult::fail(name, {{"law", "hcomp(f, hid) = f"}, {"f", s.hom.maps[f].table()}});
    if (s.comp(s.hid, f) != f) return CheckResult::fail(name, {{"law", "hcomp(hid, f) = f"}, {"f", s.hom.maps[f].table()}});
  }
  for (Elem h = 0; h < n; ++h)
    for (Elem g = 0; g < n; ++g)
      for (Elem f = 0; f < n; ++f)
        if (s.comp(s.comp(h, g), f) != s.comp(h, s.comp(g, f)))
          return CheckResult::fail(name, {{"law", "hcomp associative"},
                                          {"h", s.hom.maps[h].table()},
                                          {"g", s.hom.maps[g].table()},
                                          {"f", s.hom.maps[f].table()}});
  auto res = CheckResult::pass(name);
  res.stats = {{"hom_size", n}};
  return res;
}

/// A T-algebra together with a monoid on the same carrier.
struct TildeAlgebra {
  TAlgebra alg;
  Table mul;  // mul[x * n + y]
  Elem unit = 0;
  std::vector<FinMap> labels;  // optional: elements as endomaps (Cayley outputs)

  Elem m(Elem x, Elem y) const { return mul[x * alg.n + y]; }

  json to_json() const {
    json j = alg.to_json();
    j["mul"] = mul;
    j["unit"] = unit;
    if (!labels.empty()) {
      json arr = json::array();
      for (const auto& f : labels) arr.push_back(f.table());
      j["elements"] = arr;
    }
    return j;
  }
};

/// Monoid laws, Eilenberg-Moore laws, and the coherence square
/// m . (a x a) = a . mu . T T m . T tau' . tau on T A x T A.
inline CheckResult check_tilde(const TildeAlgebra& ta, const Budget& budget = {}) {
  const std::string name = "tilde-algebra(" + ta.alg.t->name + ")";
  const auto n = ta.alg.n;
  const auto& t = *ta.alg.t;
  for (Elem x = 0; x < n; ++x)
    if (ta.m(ta.unit, x) != x || ta.m(x, ta.unit) != x) return CheckResult::fail(name, {{"law", "monoid unit"}, {"x", x}});
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z)
        if (ta.m(ta.m(x, y), z) != ta.m(x, ta.m(y, z)))
          return CheckResult::fail(name, {{"law", "monoid associativity"}, {"x", x}, {"y", y}, {"z", z}});
  if (auto v = talgebra_violation(ta.alg, budget)) return CheckResult::fail(name, {{"law", "T-algebra"}, {"detail", *v}});
  auto mul = [&](const Value& p) { return Value::at(ta.m(static_cast<Elem>(p.first().atom), static_cast<Elem>(p.second().atom))); };
  std::uint64_t instances = 0;
  for (std::size_t i = 0; i < ta.alg.tcarrier.size(); ++i)
    for (std::size_t j = 0; j < ta.alg.tcarrier.size(); ++j) {
      ++instances;
      const auto& s = ta.alg.tcarrier[i];
      const auto& u = ta.alg.tcarrier[j];
      const auto lhs = ta.m(ta.alg.a[i], ta.alg.a[j]);
      const auto tt = t.fmap(t.rstrength(Value::pair(s, u)), t.lstrength);
      const auto ttm = t.fmap(tt, [&](const Value& inner) { return t.fmap(inner, mul); });
      const auto rhs = ta.alg.apply(t.mult(ttm));
      if (lhs != rhs)
        return CheckResult::fail(name, {{"law", "coherence"}, {"s", s.to_json()}, {"t", u.to_json()}, {"lhs", lhs}, {"rhs", rhs}});
    }
  auto res = CheckResult::pass(name);
  res.stats = {{"coherence_instances", instances}};
  return res;
}

/// ((A, a) => (A, a), s, hcomp, hid) with s the transpose of a . T happ . tau.
inline TildeAlgebra cayley_algebra(const TAlgebra& alg, const Budget& budget = {}) {
  const auto s = internal_structure(alg, budget);
  const auto& t = *alg.t;
  const auto h = s.hom.size();
  const auto th = t.elements(atoms(h), budget);
  auto happ = [&](const Value& p) { return Value::at(s.app(static_cast<Elem>(p.first().atom), static_cast<Elem>(p.second().atom))); };
  // Tabulate the map T H x A -> A, then transpose with T H as a plain set.
  Table tab(th.size() * alg.n);
  for (std::size_t i = 0; i < th.size(); ++i)
    for (std::size_t x = 0; x < alg.n; ++x)
      tab[i * alg.n + x] = alg.apply(t.fmap(t.rstrength(Value::pair(th[i], Value::at(x))), happ));
  const auto rows = tab.size();
  const auto st = transpose(FinMap(rows, alg.n, std::move(tab)), th.size(), alg, alg, s.hom);
  TildeAlgebra out;
  out.alg.t = alg.t;
  out.alg.n = h;
  out.alg.tcarrier = th;
  out.alg.a = st;
  if (auto v = talgebra_violation(out.alg, budget)) throw LawError("cayley_algebra: " + *v);
  out.mul = s.hcomp;
  out.unit = s.hid;
  out.labels = s.hom.maps;
  return out;
}

/// The idempotent-semiring reading of a powerset tilde-algebra: x v y = s{x, y}, bottom = s{}.
inline AlgebraObj semiring_view(const TildeAlgebra& ta) {
  if (ta.alg.t->name != "powerset") throw ShapeError("semiring_view: needs the powerset monad");
  const auto n = ta.alg.n;
  AlgebraObj o;
  o.carrier = FinSet(n);
  o.theory = Theory::IdempotentSemiring;
  o.unit = ta.unit;
  o.mul = ta.mul;
  o.bottom = ta.alg.apply(Value::coll({}));
  o.join.resize(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) o.join[x * n + y] = ta.alg.apply(Value::set({Value::at(x), Value::at(y)}));
  return o;
}

struct SigmaRho {
  HomObject hom;
  Table sigma;  // A -> hom
  Table rho;    // hom -> A
  CheckResult verdict;
};

/// sigma(x) = m(x, -) as an element of (A, a) => (A, a); rho(f) = happ(f, u).
inline SigmaRho sigma_rho_tilde(const TildeAlgebra& ta, const Budget& budget = {}) {
  SigmaRho out;
  const auto n = ta.alg.n;
  out.hom = hom_object_direct(ta.alg, ta.alg, budget);
  out.rho.resize(out.hom.size());
  for (std::size_t f = 0; f < out.hom.size(); ++f) out.rho[f] = out.hom.maps[f][ta.unit];
  try {
    out.sigma = transpose(FinMap(n * n, n, ta.mul), n, ta.alg, ta.alg, out.hom);
  } catch (const LawError& e) {
    out.verdict = CheckResult::fail("sigma-rho", {{"reason", "sigma image is not a homomorphism"}, {"detail", e.what()}});
    return out;
  }
  for (Elem x = 0; x < n; ++x)
    if (out.rho[out.sigma[x]] != x) {
      out.verdict = CheckResult::fail("sigma-rho", {{"reason", "rho . sigma != id"}, {"x", x}, {"sigma", out.hom.maps[out.sigma[x]].table()}});
      return out;
    }
  out.verdict = CheckResult::pass("sigma-rho");
  out.verdict.stats = {{"size", n}, {"hom_size", out.hom.size()}};
  return out;
}

// ---------------------------------------------------------------------------------------
// Lists over T and the composite monad T . L.

/// The canonical law L T -> T L for a strong monad, on a list of T-values:
/// sequence [] = eta [], sequence (t : ts) = mu (T (x |-> T (cons x) (sequence ts)) t).
inline Value sequence(const MonadImpl& t, std::span<const Value> list) {
  if (list.empty()) return t.unit(Value::coll({}));
  const auto rest = sequence(t, list.subspan(1));
  return t.mult(t.fmap(list[0], [&](const Value& x) {
    return t.fmap(rest, [&](const Value& xs) {
      std::vector<Value> out{x};
      out.insert(out.end(), xs.items.begin(), xs.items.end());
      return Value::coll(std::move(out));
    });
  }));
}

/// The T . L structure of a tilde-algebra on a list of T-values: s . T(fold m u) . lambda.
inline Elem tilde_action(const TildeAlgebra& ta, std::span<const Value> list) {
  const auto& t = *ta.alg.t;
  auto fold = [&](const Value& l) {
    Elem acc = ta.unit;
    for (auto it = l.items.rbegin(); it != l.items.rend(); ++it) acc = ta.m(static_cast<Elem>(it->atom), acc);
    return Value::at(acc);
  };
  return ta.alg.apply(t.fmap(sequence(t, list), fold));
}

/// An idempotent semiring read as a powerset tilde-algebra: a(S) = join of S.
inline TildeAlgebra tilde_from_semiring(const AlgebraObj& o, const Budget& budget = {}) {
  if (o.theory != Theory::IdempotentSemiring) throw ShapeError("tilde_from_semiring: needs an idempotent semiring");
  TildeAlgebra ta;
  ta.alg = talgebra_from(powerset_monad(), o, budget);
  ta.mul = o.mul;
  ta.unit = *o.unit;
  return ta;
}

using MaybeList = std::optional<std::vector<Elem>>;

/// [inl x1, ..., inl xn] |-> inl [x1, ..., xn]; any inr * absorbs.
inline MaybeList dist_law_maybe(const std::vector<std::optional<Elem>>& list) {
  static const auto t = maybe_monad();
  std::vector<Value> vs;
  for (const auto& e : list) vs.push_back(e ? Value::coll({Value::at(*e)}) : Value::coll({}));
  const auto r = sequence(*t, vs);
  if (r.items.empty()) return std::nullopt;
  std::vector<Elem> out;
  for (const auto& x : r.items[0].items) out.push_back(static_cast<Elem>(x.atom));
  return out;
}

/// [X1, ..., Xn] |-> {[x1, ..., xn] | xi in Xi}.
inline std::set<std::vector<Elem>> dist_law_powerset(const std::vector<std::set<Elem>>& list) {
  static const auto t = powerset_monad();
  std::vector<Value> vs;
  for (const auto& s : list) {
    std::vector<Value> items;
    for (auto x : s) items.push_back(Value::at(x));
    vs.push_back(Value::set(std::move(items)));
  }
  std::set<std::vector<Elem>> out;
  for (const auto& l : sequence(*t, vs).items) {
    std::vector<Elem> xs;
    for (const auto& x : l.items) xs.push_back(static_cast<Elem>(x.atom));
    out.insert(std::move(xs));
  }
  return out;
}

/// Caps for enumerating the composite T . L: every list has length <= max_len, every
/// T-layer at most max_card members, and each element at most max_weight list entries
/// summed over all of its layers.
struct CompositeCaps {
  std::size_t base = 2;
  std::size_t max_len = 2;
  std::size_t max_card = 2;
  std::size_t max_weight = 3;
};

/// Distributive law L T -> T L on values; nullptr selects sequence.
using DistLaw = std::function<Value(std::span<const Value>)>;

/// Faulty variants of the maybe law used to exercise the composite check.
enum class MaybeLawFault {
  DropInr,          // no absorption at all: inr entries are discarded
  AbsorbOnlyAtHead  // inr absorbs only in first position; later inr entries are discarded
};

inline DistLaw faulty_maybe_law(MaybeLawFault fault) {
  return [fault](std::span<const Value> list) {
    std::vector<Value> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].items.empty()) {
        out.push_back(list[i].items[0]);
      } else if (fault == MaybeLawFault::AbsorbOnlyAtHead && i == 0) {
        return Value::coll({});
      }
    }
    return Value::coll({Value::coll(std::move(out))});
  };
}

namespace detail {

struct Weighted {
  Value v;
  std::size_t weight;
};

}  // namespace detail

/// Monad laws for T~ = T . L with unit x |-> eta [x] and multiplication
/// T L T L --T lambda L--> T T L L --mu--> T L L --T concat--> T L,
/// on all capped elements of T~ X, T~ T~ X and T~ T~ T~ X. Instances whose results
/// leave the caps are skipped and counted.
inline CheckResult composite_monad_check(MonadPtr tp, const CompositeCaps& caps, DistLaw lambda = nullptr,
                                         const Budget& budget = {}) {
  const auto& t = *tp;
  const std::string name = "composite-monad(" + t.name + " . list)";
  if (!t.small_elements) throw ShapeError("composite_monad_check: monad has no capped enumeration");
  if (!lambda) lambda = [&t](std::span<const Value> l) { return sequence(t, l); };

  auto concat = [](const Value& ls) {
    std::vector<Value> out;
    for (const auto& l : ls.items) out.insert(out.end(), l.items.begin(), l.items.end());
    return Value::coll(std::move(out));
  };
  auto unit = [&t](const Value& x) { return t.unit(Value::coll({x})); };
  auto mult = [&](const Value& z) {
    const auto tt = t.fmap(z, [&](const Value& l) { return lambda(l.items); });
    return t.fmap(t.mult(tt), concat);
  };
  auto fmap = [&t](const Value& v, const MonadImpl::Fn& f) {
    return t.fmap(v, [&](const Value& l) {
      std::vector<Value> out;
      for (const auto& x : l.items) out.push_back(f(x));
      return Value::coll(std::move(out));
    });
  };

  // One capped layer of T . L over a weighted pool.
  auto layer = [&](const std::vector<detail::Weighted>& pool) {
    std::vector<detail::Weighted> lists;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t w) {
      std::vector<Value> items;
      for (auto i : pick) items.push_back(pool[i].v);
      lists.push_back({Value::coll(std::move(items)), w});
      if (pick.size() == caps.max_len) return;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (w + 1 + pool[i].weight <= caps.max_weight) {
          pick.push_back(i);
          rec(w + 1 + pool[i].weight);
          pick.pop_back();
        }
    };
    rec(0);
    budget.require(lists.size(), "composite list layer");
    std::vector<Value> vals;
    std::vector<std::size_t> weights;
    for (auto& l : lists) {
      vals.push_back(std::move(l.v));
      weights.push_back(l.weight);
    }
    std::vector<detail::Weighted> out;
    for (auto& [v, w] : t.small_elements(vals, weights, caps.max_card, caps.max_weight)) out.push_back({std::move(v), w});
    budget.require(out.size(), "composite layer");
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.v < y.v; });
    return out;
  };

  // A result in T~ X fits when its T-layer and each of its lists respect the caps.
  auto fits = [&](const Value& v) {
    if (v.kind == Value::Kind::Coll && v.items.size() > caps.max_card) return false;
    bool ok = true;
    t.fmap(v, [&](const Value& l) {
      ok = ok && l.items.size() <= caps.max_len;
      return l;
    });
    return ok;
  };

  std::vector<detail::Weighted> base;
  for (std::size_t i = 0; i < caps.base; ++i) base.push_back({Value::at(i), 0});
  const auto l1 = layer(base);
  const auto l2 = layer(l1);
  const auto l3 = layer(l2);

  // Each law keeps its own first witness so a fault shows every law it breaks.
  std::uint64_t checked = 0, skipped = 0;
  std::map<std::string, json> failures;
  auto record = [&](const std::string& law, json w) {
    if (!failures.contains(law)) failures[law] = std::move(w);
  };
  for (const auto& e : l1) {
    const auto left = mult(unit(e.v));
    const auto right = mult(fmap(e.v, unit));
    if (!fits(left) || !fits(right)) {
      ++skipped;
      continue;
    }
    ++checked;
    if (left != e.v) record("mu . eta = id", {{"element", e.v.to_json()}, {"result", left.to_json()}});
    if (right != e.v) record("mu . T eta = id", {{"element", e.v.to_json()}, {"result", right.to_json()}});
  }
  for (const auto& e : l3) {
    const auto lhs = mult(mult(e.v));
    const auto rhs = mult(fmap(e.v, mult));
    if (!fits(lhs) || !fits(rhs)) {
      ++skipped;
      continue;
    }
    ++checked;
    if (lhs != rhs)
      record("mu . mu = mu . T mu", {{"element", e.v.to_json()}, {"lhs", lhs.to_json()}, {"rhs", rhs.to_json()}});
  }
  const json stats = {{"layer_sizes", {l1.size(), l2.size(), l3.size()}}, {"checked", checked}, {"skipped", skipped}};
  if (!failures.empty()) {
    json w = json::array();
    for (auto& [law, wit] : failures) {
      wit["law"] = law;
      w.push_back(std::move(wit));
    }
    auto res = CheckResult::fail(name, {{"failures", w}});
    res.stats = stats;
    return res;
  }
  auto res = CheckResult::pass(name);
  res.stats = stats;
  return res;
}

}  // namespace dico
