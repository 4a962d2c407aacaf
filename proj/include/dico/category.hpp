#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dico/algebra.hpp"

namespace dico {

using ObjIndex = std::size_t;
using MorIndex = std::size_t;

struct Morphism {
  ObjIndex dom = 0;
  ObjIndex cod = 0;
  FinMap map;
};

/// A finite concrete category: algebra objects with every homomorphism between them.
/// Morphisms are sorted by (dom, cod, table); identities and composites are looked up
/// by binary search in the relevant hom list.
class FinCategory {
 public:
  FinCategory() = default;

  /// Builds the full subcategory on `objects`: every homomorphism between every
  /// ordered pair becomes a morphism.
  static FinCategory full_on(std::vector<AlgebraObj> objects, const Budget& budget = {}) {
    FinCategory c;
    c.objects_ = std::move(objects);
    const std::size_t n = c.objects_.size();
    c.homs_.assign(n * n, {});
    for (ObjIndex x = 0; x < n; ++x)
      for (ObjIndex y = 0; y < n; ++y) {
        const auto& a = c.objects_[x];
        const auto& b = c.objects_[y];
        budget.require(saturating_pow(b.size(), a.size()), "hom-set candidates");
        for (auto& f : all_maps(a.carrier, b.carrier, budget))
          if (is_homomorphism(f, a, b)) {
            c.homs_[x * n + y].push_back(c.morphisms_.size());
            c.morphisms_.push_back(Morphism{x, y, std::move(f)});
          }
      }
    c.identities_.resize(n);
    for (ObjIndex x = 0; x < n; ++x) {
      auto id = c.find(x, x, FinMap::identity(c.objects_[x].size()));
      if (!id) throw LawError("FinCategory: identity is not a homomorphism");
      c.identities_[x] = *id;
    }
    c.hom_position_.resize(c.morphisms_.size());
    for (const auto& hom : c.homs_)
      for (std::size_t i = 0; i < hom.size(); ++i) c.hom_position_[hom[i]] = i;
    return c;
  }

  std::size_t num_objects() const noexcept { return objects_.size(); }
  std::size_t num_morphisms() const noexcept { return morphisms_.size(); }
  const AlgebraObj& object(ObjIndex x) const { return objects_.at(x); }
  const std::vector<AlgebraObj>& objects() const noexcept { return objects_; }
  const Morphism& morphism(MorIndex m) const { return morphisms_.at(m); }
  const std::vector<Morphism>& morphisms() const noexcept { return morphisms_; }
  MorIndex identity(ObjIndex x) const { return identities_.at(x); }

  /// Morphism indices X -> Y in table order.
  std::span<const MorIndex> hom(ObjIndex x, ObjIndex y) const {
    return homs_.at(x * objects_.size() + y);
  }

  /// Position of a morphism inside its hom list.
  std::size_t hom_position(MorIndex m) const { return hom_position_.at(m); }

  std::optional<MorIndex> find(ObjIndex x, ObjIndex y, const FinMap& f) const {
    auto h = hom(x, y);
    auto it = std::lower_bound(h.begin(), h.end(), f, [this](MorIndex m, const FinMap& v) {
      return morphisms_[m].map.table() < v.table();
    });
    if (it == h.end() || morphisms_[*it].map != f) return std::nullopt;
    return *it;
  }

  /// g ∘ f as a listed morphism.
  MorIndex compose(MorIndex g, MorIndex f) const {
    const auto& mg = morphism(g);
    const auto& mf = morphism(f);
    if (mf.cod != mg.dom) throw EndpointError("FinCategory::compose: endpoints do not match");
    auto r = find(mf.dom, mg.cod, dico::compose(mg.map, mf.map));
    if (!r) throw LawError("FinCategory: composite missing (category not closed)");
    return *r;
  }

  std::optional<ObjIndex> find_object(const AlgebraObj& a) const {
    for (ObjIndex x = 0; x < objects_.size(); ++x)
      if (objects_[x] == a) return x;
    return std::nullopt;
  }

 private:
  std::vector<AlgebraObj> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<MorIndex> identities_;
  std::vector<std::vector<MorIndex>> homs_;
  std::vector<std::size_t> hom_position_;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

/// Full subcategory of Set on the carriers {0..k-1}, k = 1..n_max.
inline CategoryPtr build_finset_category(std::size_t n_max, bool include_empty_carrier = false,
                                         const Budget& budget = {}) {
  std::vector<AlgebraObj> objs;
  for (std::size_t k = include_empty_carrier ? 0 : 1; k <= n_max; ++k) objs.push_back(plain_set(k));
  return std::make_shared<const FinCategory>(FinCategory::full_on(std::move(objs), budget));
}

/// All structures of the theory on carriers of size 1..n_max with all homomorphisms.
inline CategoryPtr build_algebra_category(Theory theory, std::size_t n_max,
                                          bool include_empty_carrier = false,
                                          const Budget& budget = {}) {
  std::vector<AlgebraObj> objs;
  for (std::size_t k = include_empty_carrier ? 0 : 1; k <= n_max; ++k)
    for (auto& a : enumerate_structures(theory, k, budget)) objs.push_back(std::move(a));
  return std::make_shared<const FinCategory>(FinCategory::full_on(std::move(objs), budget));
}

/// Closure and completeness audit: composites are listed, and each hom list equals the
/// brute-force filter of all maps by the homomorphism predicate.
inline std::optional<std::string> audit_category(const FinCategory& c, const Budget& budget = {}) {
  const std::size_t n = c.num_objects();
  for (ObjIndex x = 0; x < n; ++x)
    for (ObjIndex y = 0; y < n; ++y) {
      std::vector<FinMap> expected;
      for (auto& f : all_maps(c.object(x).carrier, c.object(y).carrier, budget))
        if (is_homomorphism(f, c.object(x), c.object(y))) expected.push_back(std::move(f));
      auto hom = c.hom(x, y);
      if (hom.size() != expected.size())
        return "hom(" + std::to_string(x) + "," + std::to_string(y) + ") count mismatch";
      for (std::size_t i = 0; i < hom.size(); ++i)
        if (c.morphism(hom[i]).map != expected[i])
          return "hom(" + std::to_string(x) + "," + std::to_string(y) + ") order mismatch";
    }
  for (MorIndex f = 0; f < c.num_morphisms(); ++f)
    for (MorIndex g = 0; g < c.num_morphisms(); ++g) {
      if (c.morphism(f).cod != c.morphism(g).dom) continue;
      auto composite = compose(c.morphism(g).map, c.morphism(f).map);
      if (!c.find(c.morphism(f).dom, c.morphism(g).cod, composite))
        return "composite of " + std::to_string(g) + " and " + std::to_string(f) + " missing";
    }
  return std::nullopt;
}

}  // namespace dico
