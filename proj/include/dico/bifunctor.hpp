#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dico/category.hpp"
#include "dico/check.hpp"

namespace dico {

/// Covariant functor D -> Set: a carrier size per object and a map per morphism.
class Functor {
 public:
  using MapFn = std::function<FinMap(MorIndex)>;

  Functor(std::string name, CategoryPtr dom, std::vector<std::size_t> sizes, MapFn map)
      : name_(std::move(name)), dom_(std::move(dom)), sizes_(std::move(sizes)) {
    if (sizes_.size() != dom_->num_objects()) throw ShapeError("Functor: object map size mismatch");
    maps_.reserve(dom_->num_morphisms());
    for (MorIndex m = 0; m < dom_->num_morphisms(); ++m) {
      auto f = map(m);
      const auto& mor = dom_->morphism(m);
      if (f.dom() != sizes_[mor.dom] || f.cod() != sizes_[mor.cod])
        throw ShapeError("Functor: morphism image has wrong endpoints");
      maps_.push_back(std::move(f));
    }
  }

  const std::string& name() const noexcept { return name_; }
  const FinCategory& domain() const noexcept { return *dom_; }
  const CategoryPtr& domain_ptr() const noexcept { return dom_; }
  std::size_t obj(ObjIndex x) const { return sizes_.at(x); }
  const FinMap& map(MorIndex m) const { return maps_.at(m); }

  /// First failure of identity or composition preservation.
  std::optional<std::string> functoriality_violation() const {
    const auto& d = *dom_;
    for (ObjIndex x = 0; x < d.num_objects(); ++x)
      if (!map(d.identity(x)).is_identity())
        return "identity not preserved at object " + std::to_string(x);
    for (MorIndex f = 0; f < d.num_morphisms(); ++f)
      for (MorIndex g = 0; g < d.num_morphisms(); ++g)
        if (d.morphism(f).cod == d.morphism(g).dom &&
            map(d.compose(g, f)) != dico::compose(map(g), map(f)))
          return "composition not preserved for (" + std::to_string(g) + "," + std::to_string(f) + ")";
    return std::nullopt;
  }

 private:
  std::string name_;
  CategoryPtr dom_;
  std::vector<std::size_t> sizes_;
  std::vector<FinMap> maps_;
};

using FunctorPtr = std::shared_ptr<const Functor>;

inline FunctorPtr make_functor(std::string name, CategoryPtr dom, std::vector<std::size_t> sizes,
                               Functor::MapFn map) {
  auto f = std::make_shared<const Functor>(std::move(name), std::move(dom), std::move(sizes), std::move(map));
  if (auto v = f->functoriality_violation()) throw LawError("functor " + f->name() + ": " + *v);
  return f;
}

/// The carrier functor: forgets structure, sending each morphism to its underlying map.
/// On a category of plain sets this is the identity functor.
inline FunctorPtr carrier_functor(CategoryPtr dom) {
  std::vector<std::size_t> sizes;
  for (const auto& o : dom->objects()) sizes.push_back(o.size());
  auto d = dom;
  return make_functor("carrier", dom, std::move(sizes), [d](MorIndex m) { return d->morphism(m).map; });
}

inline FunctorPtr constant_functor(CategoryPtr dom, std::size_t o) {
  std::vector<std::size_t> sizes(dom->num_objects(), o);
  return make_functor("constant(" + std::to_string(o) + ")", dom, std::move(sizes),
                      [o](MorIndex) { return FinMap::identity(o); });
}

/// Mixed-variant functor D^op x D -> Set. Element sets are canonical {0..n-1};
/// actions are computed on demand and memoized per key.
class Bifunctor {
 public:
  using ObjFn = std::function<std::size_t(ObjIndex, ObjIndex)>;
  /// lact(f : X' -> X, Y) : obj(X, Y) -> obj(X', Y)
  using LeftFn = std::function<FinMap(MorIndex, ObjIndex)>;
  /// ract(X, g : Y -> Y') : obj(X, Y) -> obj(X, Y')
  using RightFn = std::function<FinMap(ObjIndex, MorIndex)>;
  /// Explicit description of an element of obj(X, Y), used in witnesses.
  using DescribeFn = std::function<json(ObjIndex, ObjIndex, Elem)>;

  Bifunctor(std::string name, CategoryPtr dom, ObjFn obj, LeftFn lact, RightFn ract,
            DescribeFn describe = nullptr)
      : name_(std::move(name)),
        dom_(std::move(dom)),
        obj_fn_(std::move(obj)),
        lact_fn_(std::move(lact)),
        ract_fn_(std::move(ract)),
        describe_fn_(std::move(describe)) {}

  Bifunctor(const Bifunctor&) = delete;
  Bifunctor& operator=(const Bifunctor&) = delete;

  const std::string& name() const noexcept { return name_; }
  const FinCategory& domain() const noexcept { return *dom_; }
  const CategoryPtr& domain_ptr() const noexcept { return dom_; }

  std::size_t obj(ObjIndex x, ObjIndex y) const {
    std::lock_guard lock(mutex_);
    auto key = std::pair(x, y);
    if (auto it = obj_memo_.find(key); it != obj_memo_.end()) return it->second;
    auto n = obj_fn_(x, y);
    obj_memo_.emplace(key, n);
    return n;
  }

  const FinMap& lact(MorIndex f, ObjIndex y) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = lact_memo_.find({f, y}); it != lact_memo_.end()) return it->second;
    }
    auto m = lact_fn_(f, y);
    std::lock_guard lock(mutex_);
    return lact_memo_.try_emplace({f, y}, std::move(m)).first->second;
  }

  const FinMap& ract(ObjIndex x, MorIndex g) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = ract_memo_.find({x, g}); it != ract_memo_.end()) return it->second;
    }
    auto m = ract_fn_(x, g);
    std::lock_guard lock(mutex_);
    return ract_memo_.try_emplace({x, g}, std::move(m)).first->second;
  }

  json describe(ObjIndex x, ObjIndex y, Elem e) const {
    return describe_fn_ ? describe_fn_(x, y, e) : json(e);
  }

 private:
  std::string name_;
  CategoryPtr dom_;
  ObjFn obj_fn_;
  LeftFn lact_fn_;
  RightFn ract_fn_;
  DescribeFn describe_fn_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<ObjIndex, ObjIndex>, std::size_t> obj_memo_;
  mutable std::map<std::pair<MorIndex, ObjIndex>, FinMap> lact_memo_;
  mutable std::map<std::pair<ObjIndex, MorIndex>, FinMap> ract_memo_;
};

using BifunctorPtr = std::shared_ptr<const Bifunctor>;

/// R X Y = O with identity actions.
inline BifunctorPtr make_constant(CategoryPtr dom, const FinSet& o) {
  const std::size_t n = o.size;
  return std::make_shared<const Bifunctor>(
      "constant(" + std::to_string(n) + ")", std::move(dom), [n](ObjIndex, ObjIndex) { return n; },
      [n](MorIndex, ObjIndex) { return FinMap::identity(n); },
      [n](ObjIndex, MorIndex) { return FinMap::identity(n); });
}

/// R X Y = G Y, contravariant action trivial.
inline BifunctorPtr make_dummy(FunctorPtr g) {
  if (auto v = g->functoriality_violation()) throw LawError("make_dummy: " + *v);
  auto dom = g->domain_ptr();
  return std::make_shared<const Bifunctor>(
      "dummy(" + g->name() + ")", dom, [g](ObjIndex, ObjIndex y) { return g->obj(y); },
      [g](MorIndex, ObjIndex y) { return FinMap::identity(g->obj(y)); },
      [g](ObjIndex, MorIndex m) { return g->map(m); });
}

/// R X Y = D[X, Y]; elements are positions in the hom list, actions are
/// pre- and post-composition.
inline BifunctorPtr make_hom(CategoryPtr dom) {
  const FinCategory* d = dom.get();
  return std::make_shared<const Bifunctor>(
      "hom", dom, [d](ObjIndex x, ObjIndex y) { return d->hom(x, y).size(); },
      [d](MorIndex f, ObjIndex y) {
        const auto& mf = d->morphism(f);
        auto src = d->hom(mf.cod, y);
        Table t(src.size());
        for (std::size_t j = 0; j < src.size(); ++j) t[j] = static_cast<Elem>(d->hom_position(d->compose(src[j], f)));
        return FinMap(src.size(), d->hom(mf.dom, y).size(), std::move(t));
      },
      [d](ObjIndex x, MorIndex g) {
        const auto& mg = d->morphism(g);
        auto src = d->hom(x, mg.dom);
        Table t(src.size());
        for (std::size_t j = 0; j < src.size(); ++j) t[j] = static_cast<Elem>(d->hom_position(d->compose(g, src[j])));
        return FinMap(src.size(), d->hom(x, mg.cod).size(), std::move(t));
      },
      [d](ObjIndex x, ObjIndex y, Elem e) { return json(d->morphism(d->hom(x, y)[e]).map.table()); });
}

/// Lifts a map pointwise to tuples: (A => S) -> (A => T), tuples encoded by rank.
inline FinMap power_map(const FinMap& f, std::size_t arity, const Budget& budget = {}) {
  const auto n = checked_pow(f.dom(), arity, budget, "power source");
  const auto m = checked_pow(f.cod(), arity, budget, "power target");
  Table out(n);
  Table digits(arity, 0);
  Table image(arity);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < arity; ++i) image[i] = f[digits[i]];
    out[r] = static_cast<Elem>(rank_table(image, f.cod()));
    next_table(digits, f.dom());
  }
  return FinMap(n, m, std::move(out));
}

/// (A => R - -): element of obj(X, Y) is a tuple k : A -> R X Y encoded by rank
/// (k(0) most significant); actions apply R's actions pointwise.
inline BifunctorPtr make_power(BifunctorPtr r, std::size_t a, const Budget& budget = {}) {
  return std::make_shared<const Bifunctor>(
      "power(" + std::to_string(a) + "," + r->name() + ")", r->domain_ptr(),
      [r, a, budget](ObjIndex x, ObjIndex y) { return checked_pow(r->obj(x, y), a, budget, "power object"); },
      [r, a, budget](MorIndex f, ObjIndex y) { return power_map(r->lact(f, y), a, budget); },
      [r, a, budget](ObjIndex x, MorIndex g) { return power_map(r->ract(x, g), a, budget); },
      [r, a](ObjIndex x, ObjIndex y, Elem e) {
        json arr = json::array();
        for (auto d : unrank_table(e, a, r->obj(x, y))) arr.push_back(r->describe(x, y, d));
        return arr;
      });
}

/// Restriction of R along a functor M -> D given on objects and morphisms:
/// (M, N) |-> R (F M) (F N).
inline BifunctorPtr make_pullback(BifunctorPtr r, CategoryPtr m, std::function<ObjIndex(ObjIndex)> on_obj,
                                  std::function<MorIndex(MorIndex)> on_mor) {
  return std::make_shared<const Bifunctor>(
      "pullback(" + r->name() + ")", std::move(m),
      [r, on_obj](ObjIndex x, ObjIndex y) { return r->obj(on_obj(x), on_obj(y)); },
      [r, on_obj, on_mor](MorIndex f, ObjIndex y) { return r->lact(on_mor(f), on_obj(y)); },
      [r, on_obj, on_mor](ObjIndex x, MorIndex g) { return r->ract(on_obj(x), on_mor(g)); },
      [r, on_obj](ObjIndex x, ObjIndex y, Elem e) { return r->describe(on_obj(x), on_obj(y), e); });
}

/// R X Y = (P X => Y) for the polynomial P X = sum_i X^{arity_i}, over a category of sets.
/// Elements of P X are (summand, tuple rank) laid out summand by summand.
inline BifunctorPtr make_polynomial(CategoryPtr dom, std::vector<std::size_t> arities,
                                    const Budget& budget = {}) {
  const FinCategory* d = dom.get();
  auto poly_size = [arities, budget](std::size_t x) {
    std::size_t n = 0;
    for (auto k : arities) n += checked_pow(x, k, budget, "polynomial summand");
    return n;
  };
  auto poly_map = [arities, budget, poly_size](const FinMap& f) {
    Table t;
    std::size_t offset_cod = 0;
    for (auto k : arities) {
      auto pm = power_map(f, k, budget);
      for (std::size_t i = 0; i < pm.dom(); ++i) t.push_back(static_cast<Elem>(pm[i] + offset_cod));
      offset_cod += pm.cod();
    }
    return FinMap(poly_size(f.dom()), poly_size(f.cod()), std::move(t));
  };
  std::string name = "polynomial(";
  for (std::size_t i = 0; i < arities.size(); ++i) name += (i ? "," : "") + std::to_string(arities[i]);
  name += ")";
  return std::make_shared<const Bifunctor>(
      name, dom,
      [d, poly_size, budget](ObjIndex x, ObjIndex y) {
        return checked_pow(d->object(y).size(), poly_size(d->object(x).size()), budget, "polynomial object");
      },
      [d, poly_size, poly_map, budget](MorIndex f, ObjIndex y) {
        const auto& mf = d->morphism(f);
        const auto pf = poly_map(mf.map);  // P X' -> P X
        const auto ny = d->object(y).size();
        const auto src = checked_pow(ny, pf.cod(), budget, "polynomial object");
        const auto dst = checked_pow(ny, pf.dom(), budget, "polynomial object");
        Table out(src);
        for (std::size_t r = 0; r < src; ++r) {
          auto h = unrank_table(r, pf.cod(), ny);
          Table hp(pf.dom());
          for (std::size_t i = 0; i < pf.dom(); ++i) hp[i] = h[pf[i]];
          out[r] = static_cast<Elem>(rank_table(hp, ny));
        }
        return FinMap(src, dst, std::move(out));
      },
      [d, poly_size, budget](ObjIndex x, MorIndex g) {
        const auto& mg = d->morphism(g);
        const auto px = poly_size(d->object(x).size());
        const auto src = checked_pow(mg.map.dom(), px, budget, "polynomial object");
        const auto dst = checked_pow(mg.map.cod(), px, budget, "polynomial object");
        Table out(src);
        for (std::size_t r = 0; r < src; ++r) {
          auto h = unrank_table(r, px, mg.map.dom());
          for (auto& v : h) v = mg.map[v];
          out[r] = static_cast<Elem>(rank_table(h, mg.map.cod()));
        }
        return FinMap(src, dst, std::move(out));
      },
      [d, poly_size](ObjIndex x, ObjIndex y, Elem e) {
        return json(unrank_table(e, poly_size(d->object(x).size()), d->object(y).size()));
      });
}

/// Identity, composition and interchange laws of both actions, exhaustively.
inline CheckResult check_bifunctoriality(const Bifunctor& r) {
  const auto& d = r.domain();
  const std::string name = "bifunctoriality(" + r.name() + ")";
  auto mismatch = [&](const std::string& law, json where, const FinMap& lhs, const FinMap& rhs) {
    std::size_t e = 0;
    while (e < lhs.dom() && lhs[e] == rhs[e]) ++e;
    where["law"] = law;
    where["element"] = e;
    where["lhs"] = lhs.table();
    where["rhs"] = rhs.table();
    return CheckResult::fail(name, std::move(where));
  };
  for (ObjIndex x = 0; x < d.num_objects(); ++x)
    for (ObjIndex y = 0; y < d.num_objects(); ++y) {
      const auto n = r.obj(x, y);
      const auto id = FinMap::identity(n);
      if (r.lact(d.identity(x), y) != id) return mismatch("lact identity", {{"X", x}, {"Y", y}}, r.lact(d.identity(x), y), id);
      if (r.ract(x, d.identity(y)) != id) return mismatch("ract identity", {{"X", x}, {"Y", y}}, r.ract(x, d.identity(y)), id);
    }
  for (MorIndex f = 0; f < d.num_morphisms(); ++f)
    for (MorIndex g = 0; g < d.num_morphisms(); ++g) {
      if (d.morphism(f).cod != d.morphism(g).dom) continue;
      const auto gf = d.compose(g, f);
      for (ObjIndex z = 0; z < d.num_objects(); ++z) {
        // f : X'' -> X', g : X' -> X, contravariant in the first argument.
        auto lhs = r.lact(gf, z);
        auto rhs = compose(r.lact(f, z), r.lact(g, z));
        if (lhs != rhs) return mismatch("lact composition", {{"f", f}, {"g", g}, {"Y", z}}, lhs, rhs);
        auto lhs2 = r.ract(z, gf);
        auto rhs2 = compose(r.ract(z, g), r.ract(z, f));
        if (lhs2 != rhs2) return mismatch("ract composition", {{"f", f}, {"g", g}, {"X", z}}, lhs2, rhs2);
      }
    }
  for (MorIndex f = 0; f < d.num_morphisms(); ++f)
    for (MorIndex g = 0; g < d.num_morphisms(); ++g) {
      const auto& mf = d.morphism(f);  // X' -> X
      const auto& mg = d.morphism(g);  // Y -> Y'
      auto lhs = compose(r.ract(mf.dom, g), r.lact(f, mg.dom));
      auto rhs = compose(r.lact(f, mg.cod), r.ract(mf.cod, g));
      if (lhs != rhs) return mismatch("interchange", {{"f", f}, {"g", g}}, lhs, rhs);
    }
  return CheckResult::pass(name);
}

}  // namespace dico
