#include <gtest/gtest.h>

#include <random>

#include "dico/homobj.hpp"

using namespace dico;

namespace {

// X + {e0, e1}: values are (0, x), errors (1, e). Not commutative.
MonadPtr two_error_monad() {
  MonadImpl m;
  m.name = "errors(2)";
  m.unit = [](const Value& v) { return Value::pair(Value::at(0), v); };
  m.mult = [](const Value& v) { return v.first().atom == 0 ? v.second() : v; };
  m.fmap = [](const Value& v, const MonadImpl::Fn& f) {
    return v.first().atom == 0 ? Value::pair(Value::at(0), f(v.second())) : v;
  };
  m.elements = [](std::span<const Value> base, const Budget&) {
    std::vector<Value> out;
    for (const auto& x : base) out.push_back(Value::pair(Value::at(0), x));
    out.push_back(Value::pair(Value::at(1), Value::at(0)));
    out.push_back(Value::pair(Value::at(1), Value::at(1)));
    std::sort(out.begin(), out.end());
    return out;
  };
  m.count = [](std::uint64_t n) { return n + 2; };
  return make_monad(std::move(m));
}

std::vector<AlgebraObj> semilattices_upto(std::size_t n) {
  std::vector<AlgebraObj> out;
  for (std::size_t k = 1; k <= n; ++k)
    for (auto& s : enumerate_structures(Theory::Semilattice, k)) out.push_back(std::move(s));
  return out;
}

// Join-and-bottom preserving maps, straight from the finkernel predicate.
std::vector<FinMap> brute_homs(const AlgebraObj& a, const AlgebraObj& b) {
  std::vector<FinMap> out;
  for (auto& f : all_maps(a.carrier, b.carrier))
    if (is_homomorphism(f, a, b)) out.push_back(std::move(f));
  return out;
}

Value subset_value(std::uint32_t mask, std::size_t n) {
  std::vector<Value> xs;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1) xs.push_back(Value::at(i));
  return Value::set(std::move(xs));
}

}  // namespace

TEST(Value, SetNormalizes) {
  auto s = Value::set({Value::at(2), Value::at(0), Value::at(2)});
  EXPECT_EQ(s.items.size(), 2u);
  EXPECT_EQ(s, Value::coll({Value::at(0), Value::at(2)}));
  EXPECT_LT(Value::at(5), Value::pair(Value::at(0), Value::at(0)));
}

TEST(Monad, BuiltinsPassLawsAndCommutativity) {
  for (auto t : {identity_monad(), powerset_monad(), maybe_monad()}) {
    auto laws = check_monad(*t, 3);
    EXPECT_TRUE(laws.passed) << laws.to_json().dump();
    auto comm = check_commutative(*t, 3);
    EXPECT_TRUE(comm.passed) << comm.to_json().dump();
  }
}

TEST(Monad, PowersetAssociativityModes) {
  auto res = check_monad(*powerset_monad(), 3);
  ASSERT_TRUE(res.passed);
  EXPECT_EQ(res.stats["sizes"][2]["associativity"], "exhaustive");
  EXPECT_EQ(res.stats["sizes"][2]["checked"], 65536);
  EXPECT_EQ(res.stats["sizes"][3]["associativity"], "generators");
}

TEST(Monad, PluginWithoutCommutativity) {
  auto t = two_error_monad();
  EXPECT_TRUE(check_monad(*t, 2).passed);
  auto comm = check_commutative(*t, 1);
  ASSERT_FALSE(comm.passed);
  EXPECT_NE(comm.witness["lhs"], comm.witness["rhs"]);
}

TEST(Monad, PluginRequiresCoreFields) {
  MonadImpl m;
  m.name = "partial";
  EXPECT_THROW(make_monad(m), ShapeError);
}

TEST(TAlgebra, PowersetAlgebrasAreSemilattices) {
  // Brute force over every structure table on T 2 = 4 subsets.
  auto t = powerset_monad();
  auto tc = t->elements(atoms(2), Budget{});
  std::size_t valid = 0;
  Table a(tc.size(), 0);
  do {
    TAlgebra alg{t, 2, tc, a};
    bool ok = true;
    for (Elem x = 0; x < 2; ++x) ok = ok && alg.apply(Value::coll({Value::at(x)})) == x;
    if (ok && !talgebra_violation(alg)) ++valid;
  } while (next_table(a, 2));
  EXPECT_EQ(valid, enumerate_structures(Theory::Semilattice, 2).size());
}

TEST(TAlgebra, CompactLawsAgreeWithExhaustive) {
  auto t = powerset_monad();
  std::mt19937 rng(5);
  std::uniform_int_distribution<Elem> pick(0, 2);
  auto tc = t->elements(atoms(3), Budget{});
  for (int trial = 0; trial < 200; ++trial) {
    Table a(tc.size());
    for (auto& v : a) v = pick(rng);
    TAlgebra alg{t, 3, tc, a};
    for (Elem x = 0; x < 3; ++x) {
      auto it = std::lower_bound(tc.begin(), tc.end(), Value::coll({Value::at(x)}));
      alg.a[it - tc.begin()] = x;
    }
    Budget tiny{100};  // T T 3 has 256 elements, so the compact form runs
    EXPECT_EQ(talgebra_violation(alg).has_value(), talgebra_violation(alg, tiny).has_value()) << trial;
  }
}

TEST(TAlgebra, RejectsBadStructure) {
  EXPECT_THROW(make_talgebra(powerset_monad(), 2, [](const Value&) { return Elem{0}; }), LawError);
  EXPECT_THROW(talgebra_from(powerset_monad(), monoid(1, 0, {0})), LawError);
}

TEST(HomObject, DirectMatchesHomomorphismFilter) {
  auto t = powerset_monad();
  auto sls = semilattices_upto(3);
  for (const auto& a : sls)
    for (const auto& b : sls) {
      auto h = hom_object_direct(talgebra_from(t, a), talgebra_from(t, b));
      EXPECT_EQ(h.maps, brute_homs(a, b));
    }
}

TEST(HomObject, EqualizerMatchesDirect) {
  auto t = powerset_monad();
  auto sls = semilattices_upto(3);
  std::size_t pairs = 0;
  for (const auto& a : sls)
    for (const auto& b : sls) {
      auto sa = talgebra_from(t, a), sb = talgebra_from(t, b);
      EXPECT_EQ(hom_object_direct(sa, sb).maps, hom_object_equalizer(sa, sb).maps);
      ++pairs;
    }
  EXPECT_EQ(pairs, 81u);
}

TEST(HomObject, ChainToChainHasTwoElements) {
  auto c = talgebra_from(powerset_monad(), chain_semilattice(2));
  EXPECT_EQ(hom_object_direct(c, c).size(), 2u);
}

TEST(HomObject, IdentityMonadGivesAllMaps) {
  auto t = identity_monad();
  auto a = talgebra_from(t, plain_set(2)), b = talgebra_from(t, plain_set(3));
  EXPECT_EQ(hom_object_direct(a, b).size(), 9u);
  EXPECT_EQ(hom_object_equalizer(a, b).size(), 9u);
}

TEST(HomObject, SingletonSourcesAndTargets) {
  // Out of the trivial semilattice only bottom-to-bottom survives; into a point only the constant.
  auto t = powerset_monad();
  auto one = talgebra_from(t, chain_semilattice(1));
  auto two = talgebra_from(t, chain_semilattice(2));
  EXPECT_EQ(hom_object_direct(one, two).size(), 1u);
  auto maybe = maybe_monad();
  auto p = talgebra_from(maybe, pointed_set(2, 0));
  auto q = talgebra_from(maybe, pointed_set(1, 0));
  EXPECT_EQ(hom_object_direct(p, q).size(), 1u);
}

TEST(HomObject, CorruptedPhiDisagrees) {
  auto t = powerset_monad();
  auto c = talgebra_from(t, chain_semilattice(2));
  auto good = default_phi(t, 2, 2);
  PhiFn bad = [good](std::uint64_t f, const Value& v) {
    return v.items.empty() ? Value::coll({Value::at(1)}) : good(f, v);
  };
  EXPECT_NE(hom_object_direct(c, c).maps, hom_object_equalizer(c, c, bad).maps);
}

TEST(OneLinear, AtUnitEqualsHomomorphism) {
  auto t = powerset_monad();
  auto sls = semilattices_upto(2);
  for (const auto& a : sls)
    for (const auto& b : sls) {
      auto sa = talgebra_from(t, a), sb = talgebra_from(t, b);
      for (const auto& f : all_maps(a.carrier, b.carrier))
        EXPECT_EQ(is_one_linear(f, 1, sa, sb).passed, is_homomorphism(f, a, b));
    }
}

TEST(OneLinear, IdentityMonadAcceptsEverything) {
  auto t = identity_monad();
  auto a = talgebra_from(t, plain_set(2));
  for (const auto& h : all_maps(FinSet(4), FinSet(2))) EXPECT_TRUE(is_one_linear(h, 2, a, a).passed);
}

TEST(OneLinear, EvaluationIsLinear) {
  auto t = powerset_monad();
  auto c = talgebra_from(t, chain_semilattice(2));
  auto s = internal_structure(c);
  EXPECT_TRUE(is_one_linear(FinMap(s.happ.size(), 2, s.happ), s.hom.size(), c, c).passed);
  EXPECT_THROW(is_one_linear(FinMap::identity(2), 2, c, c), ShapeError);
}

TEST(Internal, LawsOnSemilattices) {
  auto t = powerset_monad();
  for (const auto& a : semilattices_upto(3)) {
    auto s = internal_structure(talgebra_from(t, a));
    EXPECT_TRUE(check_internal_laws(s).passed);
    for (Elem f = 0; f < s.hom.size(); ++f)
      for (Elem g = 0; g < s.hom.size(); ++g)
        EXPECT_EQ(s.hom.maps[s.comp(g, f)], compose(s.hom.maps[g], s.hom.maps[f]));
  }
}

TEST(Internal, CompositionAcrossAlgebras) {
  auto t = powerset_monad();
  auto a = talgebra_from(t, chain_semilattice(2));
  auto b = talgebra_from(t, chain_semilattice(3));
  auto c = talgebra_from(t, chain_semilattice(2));
  auto ab = hom_object_direct(a, b), bc = hom_object_direct(b, c), ac = hom_object_direct(a, c);
  auto comp = hom_compose(a, ab, bc, ac, c);
  ASSERT_EQ(comp.size(), bc.size() * ab.size());
  for (std::size_t g = 0; g < bc.size(); ++g)
    for (std::size_t f = 0; f < ab.size(); ++f)
      EXPECT_EQ(ac.maps[comp[g * ab.size() + f]], compose(bc.maps[g], ab.maps[f]));
}

TEST(Cayley, IdentityMonadIsEndomapMonoid) {
  auto t = identity_monad();
  auto alg = talgebra_from(t, plain_set(3));
  auto ta = cayley_algebra(alg);
  ASSERT_EQ(ta.alg.n, 27u);
  for (std::size_t i = 0; i < ta.alg.tcarrier.size(); ++i) EXPECT_EQ(ta.alg.a[i], ta.alg.tcarrier[i].atom);
  EXPECT_TRUE(ta.labels[ta.unit].is_identity());
  EXPECT_TRUE(check_tilde(ta).passed);
}

TEST(Cayley, PowersetIsPointwiseJoin) {
  auto t = powerset_monad();
  for (const auto& sl : semilattices_upto(3)) {
    auto ta = cayley_algebra(talgebra_from(t, sl));
    const auto h = ta.alg.n;
    for (std::uint32_t mask = 0; mask < (1u << h); ++mask) {
      Table expect(sl.size());
      for (Elem x = 0; x < sl.size(); ++x) {
        Elem acc = *sl.bottom;
        for (Elem f = 0; f < h; ++f)
          if (mask >> f & 1) acc = sl.vee(acc, ta.labels[f][x]);
        expect[x] = acc;
      }
      EXPECT_EQ(ta.labels[ta.alg.apply(subset_value(mask, h))].table(), expect);
    }
    auto res = check_tilde(ta);
    EXPECT_TRUE(res.passed) << res.to_json().dump();
    EXPECT_FALSE(algebra_violation(semiring_view(ta)).has_value());
  }
}

TEST(Cayley, BrokenMultiplicationFailsCoherence) {
  auto ta = cayley_algebra(talgebra_from(powerset_monad(), chain_semilattice(3)));
  // Constant multiplication keeps neither the unit nor distributivity.
  std::fill(ta.mul.begin(), ta.mul.end(), ta.unit);
  EXPECT_FALSE(check_tilde(ta).passed);
}

TEST(Cayley, PointedInstanceMatchesGlobalErrorTable) {
  // For (X, x) the list-over-maybe action sends all-inl lists to composites and any inr
  // to the constant map at the point.
  auto t = maybe_monad();
  for (std::size_t n = 1; n <= 3; ++n)
    for (Elem pt = 0; pt < n; ++pt) {
      auto ta = cayley_algebra(talgebra_from(t, pointed_set(n, pt)));
      ASSERT_TRUE(check_tilde(ta).passed);
      const auto h = ta.alg.n;
      const auto konst = FinMap::constant(n, n, pt);
      for (std::size_t len = 0; len <= 3; ++len) {
        Table entries(len, 0);
        do {
          std::vector<Value> list;
          bool any_inr = false;
          FinMap expect = FinMap::identity(n);
          for (auto e : entries) {
            if (e == h) {
              any_inr = true;
              list.push_back(Value::coll({}));
            } else {
              list.push_back(Value::coll({Value::at(e)}));
              expect = compose(expect, ta.labels[e]);
            }
          }
          if (any_inr) expect = konst;
          EXPECT_EQ(ta.labels[tilde_action(ta, list)], expect);
        } while (next_table(entries, h + 1));
      }
    }
}

TEST(SigmaRho, RetractionOnCayleyOutputs) {
  for (auto t : {identity_monad(), powerset_monad()}) {
    auto alg = t->name == "identity" ? talgebra_from(t, plain_set(2)) : talgebra_from(t, chain_semilattice(3));
    auto sr = sigma_rho_tilde(cayley_algebra(alg));
    EXPECT_TRUE(sr.verdict.passed) << sr.verdict.to_json().dump();
  }
}

TEST(SigmaRho, IdentityMonadMatchesPlainCayley) {
  auto t = identity_monad();
  auto m = monoid(2, 0, {0, 1, 1, 1});
  TildeAlgebra ta;
  ta.alg = talgebra_from(t, plain_set(2));
  ta.mul = m.mul;
  ta.unit = *m.unit;
  auto sr = sigma_rho_tilde(ta);
  ASSERT_TRUE(sr.verdict.passed);
  for (Elem x = 0; x < 2; ++x)
    for (Elem b = 0; b < 2; ++b) EXPECT_EQ(sr.hom.maps[sr.sigma[x]][b], m.times(x, b));
}

TEST(SigmaRho, SemiringsRetract) {
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& s : enumerate_structures(Theory::IdempotentSemiring, n)) {
      auto ta = tilde_from_semiring(s);
      EXPECT_TRUE(check_tilde(ta).passed);
      EXPECT_TRUE(sigma_rho_tilde(ta).verdict.passed);
      ++count;
    }
  EXPECT_GT(count, 0u);
}

TEST(SigmaRho, NonLinearMultiplicationReported) {
  // Left multiplication by 1 on the 2-chain must preserve bottom; make it swap.
  TildeAlgebra ta;
  ta.alg = talgebra_from(powerset_monad(), chain_semilattice(2));
  ta.mul = {0, 1, 1, 0};
  ta.unit = 0;
  auto sr = sigma_rho_tilde(ta);
  EXPECT_FALSE(sr.verdict.passed);
  EXPECT_EQ(sr.verdict.witness["reason"], "sigma image is not a homomorphism");
}

TEST(DistLaw, MaybeMatchesDisplayedFormula) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t len = 0; len <= 3; ++len) {
      Table entries(len, 0);
      do {
        std::vector<std::optional<Elem>> in;
        MaybeList expect = std::vector<Elem>{};
        for (auto e : entries) {
          if (e == n) {
            in.push_back(std::nullopt);
            expect = std::nullopt;
          } else {
            in.push_back(e);
            if (expect) expect->push_back(e);
          }
        }
        EXPECT_EQ(dist_law_maybe(in), expect);
      } while (next_table(entries, n + 1));
    }
  EXPECT_EQ(dist_law_maybe({}), MaybeList(std::vector<Elem>{}));
}

TEST(DistLaw, PowersetMatchesDisplayedFormula) {
  const std::size_t n = 3;
  for (std::size_t len = 0; len <= 3; ++len) {
    Table masks(len, 0);
    do {
      std::vector<std::set<Elem>> in;
      for (auto m : masks) {
        std::set<Elem> s;
        for (Elem x = 0; x < n; ++x)
          if (m >> x & 1) s.insert(x);
        in.push_back(s);
      }
      std::set<std::vector<Elem>> expect{{}};
      for (const auto& s : in) {
        std::set<std::vector<Elem>> next;
        for (const auto& pre : expect)
          for (auto x : s) {
            auto l = pre;
            l.push_back(x);
            next.insert(l);
          }
        expect = next;
      }
      EXPECT_EQ(dist_law_powerset(in), expect);
    } while (next_table(masks, 1u << n));
  }
  EXPECT_EQ(dist_law_powerset({{0}, {1, 2}}), (std::set<std::vector<Elem>>{{0, 1}, {0, 2}}));
  EXPECT_TRUE(dist_law_powerset({{0}, {}}).empty());
}

TEST(Composite, LawsHoldWithinCaps) {
  auto maybe = composite_monad_check(maybe_monad(), {3, 3, 1, 6});
  EXPECT_TRUE(maybe.passed) << maybe.to_json().dump();
  auto pow = composite_monad_check(powerset_monad(), {2, 2, 2, 6});
  EXPECT_TRUE(pow.passed) << pow.to_json().dump();
  EXPECT_GT(pow.stats["skipped"].get<std::uint64_t>(), 0u);
}

TEST(Composite, HeadOnlyAbsorptionBreaksAssociativity) {
  auto res = composite_monad_check(maybe_monad(), {2, 3, 1, 6}, faulty_maybe_law(MaybeLawFault::AbsorbOnlyAtHead));
  ASSERT_FALSE(res.passed);
  bool assoc = false;
  for (const auto& f : res.witness["failures"]) assoc |= f["law"] == "mu . mu = mu . T mu";
  EXPECT_TRUE(assoc) << res.to_json().dump();
}

TEST(Composite, DroppingInrBreaksUnit) {
  auto res = composite_monad_check(maybe_monad(), {2, 3, 1, 6}, faulty_maybe_law(MaybeLawFault::DropInr));
  ASSERT_FALSE(res.passed);
  EXPECT_EQ(res.witness["failures"][0]["law"], "mu . eta = id");
}

TEST(HomObj, IdentityMonadReducesToHom) {
  auto d = build_finset_category(2);
  auto r = make_homobj(identity_monad(), d);
  auto h = make_hom(d);
  for (ObjIndex x = 0; x < d->num_objects(); ++x)
    for (ObjIndex y = 0; y < d->num_objects(); ++y) EXPECT_EQ(r->obj(x, y), h->obj(x, y));
  for (MorIndex f = 0; f < d->num_morphisms(); ++f)
    for (ObjIndex y = 0; y < d->num_objects(); ++y) {
      EXPECT_EQ(r->lact(f, y), h->lact(f, y));
      EXPECT_EQ(r->ract(y, f), h->ract(y, f));
    }
}

TEST(HomObj, PowersetOverSemilattices) {
  auto d = build_algebra_category(Theory::Semilattice, 3);
  auto r = make_homobj(powerset_monad(), d);
  auto chain = d->find_object(chain_semilattice(2));
  ASSERT_TRUE(chain.has_value());
  EXPECT_EQ(r->obj(*chain, *chain), 2u);
  auto res = check_bifunctoriality(*r);
  EXPECT_TRUE(res.passed) << res.to_json().dump();
}

TEST(HomObj, WrongTheoryRejected) {
  EXPECT_THROW(make_homobj(powerset_monad(), build_finset_category(2)), LawError);
}
