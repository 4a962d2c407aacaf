#include <gtest/gtest.h>

#include "dico/bunting.hpp"

using namespace dico;

namespace {

// Full product filter over comma-object values.
std::vector<Table> brute_limit(const Comma& c) {
  std::vector<std::size_t> sizes;
  for (const auto& o : c.objects) sizes.push_back(c.r->obj(o.x, o.x));
  std::vector<Table> out;
  Table t(sizes.size(), 0);
  while (true) {
    if (!violated_arrow(c, t)) out.push_back(t);
    std::size_t i = t.size();
    while (i-- > 0) {
      if (++t[i] < sizes[i]) break;
      t[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace

TEST(Comma, ConstantArrowsJoinEqualLegs) {
  auto d = build_finset_category(2);
  auto c = build_comma(make_constant(d, FinSet(2)), 1);
  for (const auto& ar : c.arrows) EXPECT_EQ(c.objects[ar.src].leg, c.objects[ar.dst].leg);
  EXPECT_EQ(c.arrows.size(), d->num_morphisms() * 2);
}

TEST(Comma, HomCounts) {
  auto c1 = build_comma(make_hom(build_finset_category(1)), 1);
  EXPECT_EQ(c1.objects.size(), 1u);
  EXPECT_EQ(c1.arrows.size(), 1u);
  auto c2 = build_comma(make_hom(build_finset_category(2)), 1);
  EXPECT_EQ(c2.objects.size(), 5u);
}

TEST(Comma, IdentityArrowsPresent) {
  auto d = build_finset_category(2);
  auto c = build_comma(make_hom(d), 2);
  for (std::size_t i = 0; i < c.objects.size(); ++i) {
    const auto id = d->identity(c.objects[i].x);
    bool found = false;
    for (const auto& ar : c.arrows) found |= ar.d == id && ar.src == i && ar.dst == i;
    EXPECT_TRUE(found) << i;
  }
}

TEST(Bunting, GraphShape) {
  auto c = build_comma(make_hom(build_finset_category(2)), 1);
  auto g = build_bunting(c);
  EXPECT_EQ(g.vertices.size(), c.objects.size() + c.arrows.size());
  EXPECT_EQ(g.edges.size(), 2 * c.arrows.size());
  EXPECT_TRUE(bunting_well_formed(g));
}

TEST(Limit, ConstantIsContinuation) {
  auto c = build_comma(make_constant(build_finset_category(2), FinSet(2)), 1);
  EXPECT_EQ(limit_over_bunting(c).tuples.size(), 4u);
}

TEST(Limit, HomAtOne) {
  auto c = build_comma(make_hom(build_finset_category(1)), 2);
  EXPECT_EQ(limit_over_bunting(c).tuples.size(), 1u);
}

TEST(Limit, PropagationEqualsBruteForce) {
  auto d = build_finset_category(2);
  for (auto r : {make_constant(d, FinSet(2)), make_hom(d), make_dummy(carrier_functor(d))}) {
    auto c = build_comma(r, 1);
    EXPECT_EQ(limit_over_bunting(c).tuples, brute_limit(c)) << r->name();
  }
}

TEST(Limit, BijectionWithDirectEnumeration) {
  auto d = build_finset_category(2);
  for (auto r : {make_constant(d, FinSet(2)), make_hom(d), make_dummy(carrier_functor(d))})
    for (std::size_t a = 0; a <= 2; ++a) {
      auto res = bunting_compare(r, a);
      EXPECT_TRUE(res.passed) << res.to_json().dump();
      EXPECT_TRUE(res.stats["bijection"].get<bool>());
    }
}

TEST(Limit, UnitMapsToEvaluationTuple) {
  auto r = make_hom(build_finset_category(2));
  auto c = build_comma(r, 2);
  auto carrier = build_dicodensity(r, 2);
  for (Elem a = 0; a < 2; ++a) {
    auto t = family_to_tuple(c, unit(carrier, a));
    for (std::size_t i = 0; i < c.objects.size(); ++i) EXPECT_EQ(t[i], c.objects[i].leg[a]);
  }
}

TEST(Limit, InvalidTupleRejected) {
  auto r = make_hom(build_finset_category(2));
  auto c = build_comma(r, 1);
  auto lim = limit_over_bunting(c);
  auto bad = lim.tuples.front();
  // Alter one value at the 2-element object; some arrow must notice.
  bad[c.index(1, 0)] = (bad[c.index(1, 0)] + 1) % 4;
  EXPECT_THROW(tuple_to_family(c, bad), ShapeError);
  EXPECT_THROW(tuple_to_family(c, Table(3, 0)), ShapeError);
}

TEST(Limit, IdentityDetectorOnDummyIdentity) {
  auto d = build_finset_category(2);
  auto res = bunting_compare(make_dummy(carrier_functor(d)), 2);
  ASSERT_TRUE(res.passed);
  RecordProperty("identity_like", res.stats["identity_like"].get<bool>() ? "true" : "false");
}
