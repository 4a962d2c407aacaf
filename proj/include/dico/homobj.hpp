#pragma once

#include <memory>

#include "dico/bifunctor.hpp"
#include "dico/emalgebra.hpp"

namespace dico {

/// R (A, a) (B, b) = (A, a) => (B, b) over a category whose objects present T-algebras.
/// Elements are hom-object positions; actions are pre- and post-composition.
inline BifunctorPtr make_homobj(MonadPtr t, CategoryPtr dom, const Budget& budget = {}) {
  const FinCategory* d = dom.get();
  const auto n = d->num_objects();
  std::vector<TAlgebra> algs;
  for (ObjIndex x = 0; x < n; ++x) algs.push_back(talgebra_from(t, d->object(x), budget));
  auto homs = std::make_shared<std::vector<HomObject>>();
  for (ObjIndex x = 0; x < n; ++x)
    for (ObjIndex y = 0; y < n; ++y) homs->push_back(hom_object_direct(algs[x], algs[y], budget));
  auto at = [homs, n](ObjIndex x, ObjIndex y) -> const HomObject& { return (*homs)[x * n + y]; };
  return std::make_shared<const Bifunctor>(
      "homobj(" + t->name + ")", dom, [at](ObjIndex x, ObjIndex y) { return at(x, y).size(); },
      [d, at](MorIndex f, ObjIndex y) {
        const auto& mf = d->morphism(f);
        const auto& src = at(mf.cod, y);
        const auto& dst = at(mf.dom, y);
        Table out(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
          auto idx = dst.index_of(compose(src.maps[i], mf.map));
          if (!idx) throw LawError("homobj: precomposite is not a homomorphism");
          out[i] = *idx;
        }
        return FinMap(src.size(), dst.size(), std::move(out));
      },
      [d, at](ObjIndex x, MorIndex g) {
        const auto& mg = d->morphism(g);
        const auto& src = at(x, mg.dom);
        const auto& dst = at(x, mg.cod);
        Table out(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
          auto idx = dst.index_of(compose(mg.map, src.maps[i]));
          if (!idx) throw LawError("homobj: postcomposite is not a homomorphism");
          out[i] = *idx;
        }
        return FinMap(src.size(), dst.size(), std::move(out));
      },
      [at](ObjIndex x, ObjIndex y, Elem e) { return json(at(x, y).maps.at(e).table()); });
}

}  // namespace dico
