#include <gtest/gtest.h>

#include "dico/bifunctor.hpp"

using namespace dico;

TEST(Constant, ActionsAreIdentities) {
  auto d = build_finset_category(2);
  auto r = make_constant(d, FinSet(3));
  for (MorIndex f = 0; f < d->num_morphisms(); ++f)
    for (ObjIndex y = 0; y < d->num_objects(); ++y) {
      EXPECT_TRUE(r->lact(f, y).is_identity());
      EXPECT_TRUE(r->ract(y, f).is_identity());
    }
  EXPECT_TRUE(check_bifunctoriality(*r).passed);
}

TEST(Dummy, IdentityFunctor) {
  auto d = build_finset_category(2);
  auto r = make_dummy(carrier_functor(d));
  for (MorIndex f = 0; f < d->num_morphisms(); ++f) {
    const auto& m = d->morphism(f);
    for (ObjIndex x = 0; x < d->num_objects(); ++x) {
      EXPECT_EQ(r->ract(x, f), m.map);
      EXPECT_TRUE(r->lact(f, x).is_identity());
    }
  }
  EXPECT_TRUE(check_bifunctoriality(*r).passed);
}

TEST(Dummy, ConstantFunctorMatchesConstantBifunctor) {
  auto d = build_finset_category(2);
  auto a = make_dummy(constant_functor(d, 3));
  auto b = make_constant(d, FinSet(3));
  for (MorIndex f = 0; f < d->num_morphisms(); ++f)
    for (ObjIndex x = 0; x < d->num_objects(); ++x) {
      EXPECT_EQ(a->lact(f, x), b->lact(f, x));
      EXPECT_EQ(a->ract(x, f), b->ract(x, f));
    }
}

TEST(Dummy, ForgetfulOnPointedSets) {
  auto d = build_algebra_category(Theory::Pointed, 2);
  auto g = carrier_functor(d);
  EXPECT_FALSE(g->functoriality_violation());
  EXPECT_TRUE(check_bifunctoriality(*make_dummy(g)).passed);
}

TEST(Dummy, RejectsNonFunctor) {
  auto d = build_finset_category(2);
  // Sends every morphism to a constant map: identities are not preserved on the 2-set.
  EXPECT_THROW(make_functor("bad", d, {1, 2}, [d](MorIndex m) {
                 const auto& mm = d->morphism(m);
                 return FinMap::constant(mm.dom == 0 ? 1 : 2, mm.cod == 0 ? 1 : 2, 0);
               }),
               LawError);
}

TEST(Hom, Sizes) {
  auto d = build_finset_category(2);
  auto r = make_hom(d);
  EXPECT_EQ(r->obj(1, 0), 1u);
  EXPECT_EQ(r->obj(0, 1), 2u);
  EXPECT_EQ(r->obj(1, 1), 4u);

  auto p = build_algebra_category(Theory::Pointed, 2);
  auto rp = make_hom(p);
  for (ObjIndex x = 0; x < p->num_objects(); ++x)
    if (p->object(x).size() == 2) EXPECT_EQ(rp->obj(x, x), 2u);
}

TEST(Hom, BifunctorialAtThree) {
  EXPECT_TRUE(check_bifunctoriality(*make_hom(build_finset_category(3))).passed);
  EXPECT_TRUE(check_bifunctoriality(*make_hom(build_algebra_category(Theory::Pointed, 2))).passed);
}

TEST(Hom, ActionsAreComposition) {
  auto d = build_finset_category(3);
  auto r = make_hom(d);
  for (MorIndex f = 0; f < d->num_morphisms(); ++f) {
    const auto& mf = d->morphism(f);
    for (ObjIndex y = 0; y < d->num_objects(); ++y) {
      const auto& pre = r->lact(f, y);
      auto src = d->hom(mf.cod, y);
      for (std::size_t j = 0; j < src.size(); ++j) {
        auto expect = compose(d->morphism(src[j]).map, mf.map);
        EXPECT_EQ(d->morphism(d->hom(mf.dom, y)[pre[j]]).map, expect);
      }
    }
  }
}

TEST(Broken, PostcompositionAsLeftActionIsCaught) {
  auto d = std::make_shared<const FinCategory>(FinCategory::full_on({plain_set(2)}));
  const FinCategory* dp = d.get();
  auto post = [dp](MorIndex g) {
    auto src = dp->hom(0, 0);
    Table t(src.size());
    for (std::size_t j = 0; j < src.size(); ++j) t[j] = static_cast<Elem>(dp->hom_position(dp->compose(g, src[j])));
    return FinMap(src.size(), src.size(), std::move(t));
  };
  Bifunctor broken("broken", d, [dp](ObjIndex, ObjIndex) { return dp->hom(0, 0).size(); },
                   [post](MorIndex f, ObjIndex) { return post(f); }, [post](ObjIndex, MorIndex g) { return post(g); });
  auto r = check_bifunctoriality(broken);
  ASSERT_FALSE(r.passed);
  EXPECT_TRUE(r.witness.contains("law"));
  EXPECT_NE(r.witness["lhs"], r.witness["rhs"]);
}

TEST(Power, Bifunctorial) {
  auto d = build_finset_category(2);
  auto p = make_power(make_hom(d), 2);
  EXPECT_EQ(p->obj(1, 1), 16u);
  EXPECT_TRUE(check_bifunctoriality(*p).passed);
  EXPECT_EQ(p->describe(1, 1, 1), json::array({{0, 0}, {0, 1}}));
}

TEST(Power, PowerMapIsPointwise) {
  const FinMap f(3, 2, {1, 0, 1});
  auto pm = power_map(f, 2);
  for (std::size_t r = 0; r < pm.dom(); ++r) {
    auto in = unrank_table(r, 2, 3);
    auto out = unrank_table(pm[r], 2, 2);
    EXPECT_EQ(out[0], f[in[0]]);
    EXPECT_EQ(out[1], f[in[1]]);
  }
}

TEST(Polynomial, Bifunctorial) {
  auto d = build_finset_category(2);
  auto p = make_polynomial(d, {0, 1});  // P X = 1 + X
  EXPECT_EQ(p->obj(1, 1), 8u);
  EXPECT_TRUE(check_bifunctoriality(*p).passed);
}

TEST(Pullback, AlongInclusion) {
  auto d = build_finset_category(2);
  auto one = build_finset_category(1);
  auto r = make_pullback(make_hom(d), one, [](ObjIndex) { return ObjIndex{0}; }, [d](MorIndex) { return d->identity(0); });
  EXPECT_EQ(r->obj(0, 0), 1u);
  EXPECT_TRUE(check_bifunctoriality(*r).passed);
}
