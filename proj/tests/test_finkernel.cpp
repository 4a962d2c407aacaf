#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dico/category.hpp"

using namespace dico;

namespace {

FinMap random_map(std::mt19937& rng, std::size_t dom, std::size_t cod) {
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(cod - 1));
  Table t(dom);
  for (auto& v : t) v = pick(rng);
  return FinMap(dom, cod, t);
}

// Brute-force monoid count: every binary table and every unit candidate.
std::size_t brute_monoids(std::size_t n) {
  std::size_t count = 0;
  const std::size_t cells = n * n;
  Table mul(cells, 0);
  do {
    for (Elem u = 0; u < n; ++u) {
      bool ok = true;
      for (Elem x = 0; x < n && ok; ++x) ok = mul[u * n + x] == x && mul[x * n + u] == x;
      for (Elem x = 0; x < n && ok; ++x)
        for (Elem y = 0; y < n && ok; ++y)
          for (Elem z = 0; z < n && ok; ++z) ok = mul[mul[x * n + y] * n + z] == mul[x * n + mul[y * n + z]];
      count += ok;
    }
  } while (next_table(mul, n));
  return count;
}

std::size_t brute_semilattices(std::size_t n) {
  // Commutativity is imposed by mirroring the upper triangle; the rest is filtered.
  std::vector<std::pair<Elem, Elem>> cells;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x; y < n; ++y) cells.emplace_back(x, y);
  std::size_t count = 0;
  Table choice(cells.size(), 0);
  Table j(n * n, 0);
  do {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      j[cells[i].first * n + cells[i].second] = choice[i];
      j[cells[i].second * n + cells[i].first] = choice[i];
    }
    for (Elem b = 0; b < n; ++b) {
      bool ok = true;
      for (Elem x = 0; x < n && ok; ++x) ok = j[x * n + x] == x && j[b * n + x] == x;
      for (Elem x = 0; x < n && ok; ++x)
        for (Elem y = 0; y < n && ok; ++y)
          for (Elem z = 0; z < n && ok; ++z) ok = j[j[x * n + y] * n + z] == j[x * n + j[y * n + z]];
      count += ok;
    }
  } while (next_table(choice, n));
  return count;
}

}  // namespace

TEST(FinMap, RejectsBadTables) {
  EXPECT_THROW(FinMap(2, 2, {0}), ShapeError);
  EXPECT_THROW(FinMap(2, 2, {0, 2}), ShapeError);
  EXPECT_THROW(FinMap(1, 1, {0})(1), IndexError);
}

TEST(FinMap, ComposeLaws) {
  const FinMap f(2, 1, {0, 0});
  const FinMap g(1, 3, {2});
  EXPECT_EQ(compose(g, f).table(), (Table{2, 2}));
  EXPECT_EQ(compose(FinMap::identity(1), f), f);
  EXPECT_EQ(compose(f, FinMap::identity(2)), f);
  EXPECT_THROW(compose(f, g), EndpointError);
}

TEST(FinMap, RandomAssociativity) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  for (int i = 0; i < 100; ++i) {
    const auto a = size(rng), b = size(rng), c = size(rng), d = size(rng);
    auto f = random_map(rng, a, b);
    auto g = random_map(rng, b, c);
    auto h = random_map(rng, c, d);
    auto lhs = compose(h, compose(g, f));
    auto rhs = compose(compose(h, g), f);
    for (std::size_t x = 0; x < a; ++x) ASSERT_EQ(lhs(x), h(g(f(x))));
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(AllMaps, Counts) {
  EXPECT_EQ(all_maps(FinSet(3), FinSet(2)).size(), 8u);
  auto empty_dom = all_maps(FinSet(0), FinSet(5));
  ASSERT_EQ(empty_dom.size(), 1u);
  EXPECT_TRUE(empty_dom[0].table().empty());
  EXPECT_TRUE(all_maps(FinSet(2), FinSet(0)).empty());
  EXPECT_THROW(all_maps(FinSet(30), FinSet(3)), BudgetError);
}

TEST(AllMaps, DistinctAndOrdered) {
  for (std::size_t x = 0; x <= 3; ++x)
    for (std::size_t y = 0; y <= 3; ++y) {
      auto maps = all_maps(FinSet(x), FinSet(y));
      ASSERT_EQ(maps.size(), saturating_pow(y, x));
      std::set<Table> seen;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        seen.insert(maps[i].table());
        if (i) {
          ASSERT_LT(maps[i - 1].table(), maps[i].table());
        }
        ASSERT_EQ(rank_table(maps[i].table(), y), i);
        ASSERT_EQ(unrank_table(i, x, y), maps[i].table());
      }
      ASSERT_EQ(seen.size(), maps.size());
    }
}

TEST(FinSetCategory, Counts) {
  auto c1 = build_finset_category(1);
  EXPECT_EQ(c1->num_objects(), 1u);
  EXPECT_EQ(c1->num_morphisms(), 1u);
  auto c2 = build_finset_category(2);
  EXPECT_EQ(c2->num_objects(), 2u);
  EXPECT_EQ(c2->num_morphisms(), 8u);
  auto c0 = build_finset_category(2, true);
  EXPECT_EQ(c0->num_objects(), 3u);
  EXPECT_EQ(c0->num_morphisms(), 8u + 3u);
}

TEST(FinSetCategory, AuditAtThree) {
  auto c = build_finset_category(3);
  EXPECT_EQ(c->num_morphisms(), 1u + 2 + 3 + 1 + 4 + 9 + 1 + 8 + 27);
  EXPECT_FALSE(audit_category(*c).has_value());
  for (ObjIndex x = 0; x < c->num_objects(); ++x) EXPECT_TRUE(c->morphism(c->identity(x)).map.is_identity());
}

TEST(Algebra, MonoidCountsMatchBruteForce) {
  EXPECT_EQ(enumerate_structures(Theory::Monoid, 1).size(), 1u);
  EXPECT_EQ(enumerate_structures(Theory::Monoid, 2).size(), 4u);
  EXPECT_EQ(brute_monoids(2), 4u);
  EXPECT_EQ(enumerate_structures(Theory::Monoid, 3).size(), brute_monoids(3));
}

TEST(Algebra, SemilatticeCountsMatchBruteForce) {
  auto two = enumerate_structures(Theory::Semilattice, 2);
  ASSERT_EQ(two.size(), 2u);
  for (const auto& s : two) {
    const Elem top = 1 - *s.bottom;
    EXPECT_EQ(s.vee(0, 1), top);
  }
  EXPECT_EQ(enumerate_structures(Theory::Semilattice, 3).size(), brute_semilattices(3));
  EXPECT_EQ(enumerate_structures(Theory::Semilattice, 4).size(), brute_semilattices(4));
}

TEST(Algebra, PointedCounts) {
  auto c = build_algebra_category(Theory::Pointed, 2);
  EXPECT_EQ(c->num_objects(), 3u);
  EXPECT_EQ(c->object(0).size(), 1u);
}

TEST(Algebra, ConstructorRejectsLawBreakers) {
  EXPECT_THROW(monoid(2, 1, {0, 1, 1, 1}), LawError);
  EXPECT_NO_THROW(monoid(2, 0, {0, 1, 1, 0}));
  EXPECT_THROW(semilattice(2, 0, {0, 0, 0, 1}), LawError);
  EXPECT_THROW(pointed_set(2, 3), LawError);
}

TEST(Algebra, EnumeratedStructuresSatisfyLaws) {
  for (auto th : {Theory::Monoid, Theory::Semilattice, Theory::IdempotentSemiring})
    for (std::size_t n = 1; n <= 3; ++n)
      for (const auto& a : enumerate_structures(th, n)) ASSERT_FALSE(algebra_violation(a)) << theory_name(th);
}

TEST(Algebra, SemiringsAreFilteredProducts) {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::size_t brute = 0;
    for (const auto& s : enumerate_structures(Theory::Semilattice, n))
      for (const auto& m : enumerate_structures(Theory::Monoid, n)) {
        bool ok = true;
        for (Elem x = 0; x < n && ok; ++x) {
          ok = m.times(x, *s.bottom) == *s.bottom && m.times(*s.bottom, x) == *s.bottom;
          for (Elem y = 0; y < n && ok; ++y)
            for (Elem z = 0; z < n && ok; ++z)
              ok = m.times(x, s.vee(y, z)) == s.vee(m.times(x, y), m.times(x, z)) &&
                   m.times(s.vee(x, y), z) == s.vee(m.times(x, z), m.times(y, z));
        }
        brute += ok;
      }
    EXPECT_EQ(enumerate_structures(Theory::IdempotentSemiring, n).size(), brute);
  }
}

TEST(AlgebraCategory, AuditsPass) {
  for (auto th : {Theory::Pointed, Theory::Monoid, Theory::Semilattice}) {
    auto c = build_algebra_category(th, 3);
    EXPECT_FALSE(audit_category(*c).has_value()) << theory_name(th);
  }
}

TEST(Budget, ExplodingEnumerationRaises) {
  Budget tiny{100};
  EXPECT_THROW(build_finset_category(4, false, tiny), BudgetError);
  try {
    checked_pow(10, 5, tiny, "probe");
    FAIL();
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.requested(), 100000u);
    EXPECT_EQ(e.limit(), 100u);
  }
}
