#include <gtest/gtest.h>

#include "dico/representation.hpp"

using namespace dico;

namespace {

const RepresentationBundle& cayley3() {
  static const auto b = cayley_bundle(3, 3);
  return b;
}

const RepresentationBundle& adjoint3() {
  static const auto b = adjoint_bundle(Theory::Semilattice, 3);
  return b;
}

// Concatenation in the wrong order, so bind(ab, f) = f(b) f(a).
std::optional<Elem> reversed_bind(const FreeTruncation& fa, const FreeTruncation& fb, Elem e, std::span<const Elem> f) {
  if (fa.is_sink(e)) return std::nullopt;
  Elem acc = fb.unit();
  for (auto l : fa.words[e]) acc = fb.obj.times(f[l], acc);
  if (fb.is_sink(acc)) return std::nullopt;
  return acc;
}

}  // namespace

TEST(FreeTruncation, MonoidShape) {
  auto f = free_monoid(2, 3);
  EXPECT_EQ(f.size(), 16u);
  EXPECT_EQ(f.words.size(), 15u);
  EXPECT_EQ(f.words[0], std::vector<Elem>{});
  EXPECT_EQ(f.words[1], std::vector<Elem>{0});
  EXPECT_EQ(f.words[3], (std::vector<Elem>{0, 0}));
  EXPECT_EQ(f.words[14], (std::vector<Elem>{1, 1, 1}));
  EXPECT_EQ(f.eta, (Table{1, 2}));
  const Elem sink = *f.sink;
  for (Elem x = 0; x < f.size(); ++x) {
    EXPECT_EQ(f.obj.times(sink, x), sink);
    EXPECT_EQ(f.obj.times(x, sink), sink);
  }
  // [0,1] . [1] = [0,1,1]; [0,1] . [0,1] overflows.
  EXPECT_EQ(f.words[f.obj.times(*f.index_of({0, 1}), 2)], (std::vector<Elem>{0, 1, 1}));
  EXPECT_EQ(f.obj.times(*f.index_of({0, 1}), *f.index_of({0, 1})), sink);
}

TEST(FreeTruncation, SemilatticeIsPowerset) {
  EXPECT_EQ(free_semilattice(1).obj, chain_semilattice(2));
  auto f = free_semilattice(2);
  EXPECT_EQ(f.size(), 4u);
  EXPECT_FALSE(f.sink.has_value());
  EXPECT_EQ(f.obj.vee(1, 2), 3u);
  EXPECT_THROW(make_free(Theory::Pointed, 1, 1), ConfigError);
}

TEST(FreeTruncation, ExtensionIsHomomorphic) {
  auto f = free_monoid(2, 3);
  auto target = monoid(3, 0, {0, 1, 2, 1, 2, 0, 2, 0, 1});  // Z/3
  for (Elem k0 = 0; k0 < 3; ++k0)
    for (Elem k1 = 0; k1 < 3; ++k1) {
      Table k{k0, k1};
      for (Elem l = 0; l < 2; ++l) EXPECT_EQ(f.ext(target, k, f.eta[l]), k[l]);
      for (Elem x = 0; x < f.words.size(); ++x)
        for (Elem y = 0; y < f.words.size(); ++y) {
          const auto xy = f.obj.times(x, y);
          if (f.is_sink(xy)) continue;
          EXPECT_EQ(*f.ext(target, k, xy), target.times(*f.ext(target, k, x), *f.ext(target, k, y)));
        }
      EXPECT_FALSE(f.ext(target, k, *f.sink).has_value());
    }
}

TEST(Cayley, EndomapMonoids) {
  const auto& b = cayley3();
  const auto& d = *b.d;
  ASSERT_EQ(b.rbb.size(), 3u);
  EXPECT_EQ(b.rbb[2].size(), 27u);
  for (ObjIndex x = 0; x < d.num_objects(); ++x) {
    const auto hom = d.hom(x, x);
    for (std::size_t p = 0; p < hom.size(); ++p)
      for (std::size_t q = 0; q < hom.size(); ++q)
        EXPECT_EQ(d.morphism(hom[b.rbb[x].times(p, q)]).map,
                  compose(d.morphism(hom[p]).map, d.morphism(hom[q]).map));
    EXPECT_TRUE(d.morphism(hom[*b.rbb[x].unit]).map.is_identity());
  }
}

TEST(Cayley, SigmaAndRhoPointwise) {
  const auto& b = cayley3();
  const auto& d = *b.d;
  for (ObjIndex mo = 0; mo < b.m->num_objects(); ++mo) {
    const auto& o = b.m->object(mo);
    const auto hom = d.hom(b.ubar_obj[mo], b.ubar_obj[mo]);
    for (Elem a = 0; a < o.size(); ++a) {
      const auto& s = d.morphism(hom[b.sigma[mo][a]]).map;
      for (Elem y = 0; y < o.size(); ++y) EXPECT_EQ(s[y], o.times(a, y));
    }
    for (std::size_t g = 0; g < hom.size(); ++g) EXPECT_EQ(b.rho[mo][g], d.morphism(hom[g]).map[*o.unit]);
  }
}

TEST(Cayley, AllConditionsHold) {
  const auto& b = cayley3();
  auto list = check_representation(b, 2, 3);
  for (const auto& c : list.items) EXPECT_TRUE(c.passed) << c.to_json().dump();
  EXPECT_EQ(list.items.size(), 7u);
}

TEST(Cayley, BrokenHatIsCaught) {
  auto b = cayley_bundle(2, 2);
  const auto target = *free_monoid(2, 3).index_of({0, 1});
  b.hat = [&b, target](ObjIndex x, const FreeTruncation& f, std::span<const Elem> k, Elem e) -> std::optional<Elem> {
    if (e == target) return Elem{0};  // the constant map at 0
    return f.ext(b.rbb.at(x), k, e);
  };
  auto res = check_hat_sdin(b, 2, 3);
  ASSERT_FALSE(res.passed);
  EXPECT_EQ(res.witness["element"], json({0, 1}));
  EXPECT_TRUE(check_hat_sdin(b, 1, 3).passed);  // the broken word needs two letters
}

TEST(Cayley, CorruptedSigmaIsCaught) {
  auto b = cayley_bundle(3, 3);
  // At the 2-element monoid {e, z} with z absorbing, send z to the identity instead.
  const auto mo = *b.m->find_object(monoid(2, 0, {0, 1, 1, 1}));
  b.sigma[mo] = FinMap(2, b.sigma[mo].cod(), {b.sigma[mo][0], b.sigma[mo][0]});
  EXPECT_FALSE(check_sigma_sdin(b).passed);
  EXPECT_FALSE(check_rho(b).passed);
}

TEST(Cayley, RhoAtNonUnitFailsRetraction) {
  auto b = cayley_bundle(3, 3);
  const auto mo = *b.m->find_object(monoid(2, 0, {0, 1, 1, 1}));
  const auto& d = *b.d;
  const auto hom = d.hom(b.ubar_obj[mo], b.ubar_obj[mo]);
  Table t(hom.size());
  for (std::size_t g = 0; g < hom.size(); ++g) t[g] = d.morphism(hom[g]).map[1];
  b.rho[mo] = FinMap(hom.size(), 2, t);
  auto res = check_rho(b);
  ASSERT_FALSE(res.passed);
  EXPECT_EQ(res.witness["reason"], "rho . sigma != id");
}

TEST(Cayley, RunThreshold) {
  for (std::size_t keep = 0; keep <= 3; ++keep) {
    auto b = cayley3();
    for (auto& rd : b.runs) {
      if (rd.runs.size() > keep) rd.runs.resize(keep);
    }
    const bool expect = keep >= 3;  // every |X| in 2..3 needs all of X
    auto res = check_sigma_commute(b);
    EXPECT_EQ(res.passed, expect) << keep;
    if (!res.passed) {
      EXPECT_EQ(res.witness["reason"], "runs are not jointly monic");
    }
  }
}

TEST(Cayley, BrokenRunSquare) {
  auto b = cayley3();
  auto& rd = b.runs[1];
  // Right multiplication in place of left breaks the square for non-commuting maps.
  for (Elem f = 0; f < rd.sigma.size(); ++f) {
    Table t(rd.carrier);
    for (Elem g = 0; g < rd.carrier; ++g) t[g] = b.rbb[1].times(g, f);
    rd.sigma[f] = FinMap(rd.carrier, rd.carrier, t);
  }
  auto res = check_sigma_commute(b);
  ASSERT_FALSE(res.passed);
  EXPECT_EQ(res.witness["reason"], "run square fails");
}

TEST(Words, FloorThroughHatMatchesComposition) {
  const auto& b = cayley3();
  for (std::size_t a = 1; a <= 2; ++a) {
    const auto f = free_monoid(a, 3);
    const auto c = carrier_shell(b.r, a);
    for (Elem e = 0; e < f.words.size(); ++e) EXPECT_EQ(floor_map(b, c, f, e), tabulate(word_family(f.words[e]), c));
    EXPECT_THROW(floor_map(b, c, f, *f.sink), BudgetError);
  }
}

TEST(Words, ExplicitComponent) {
  // floor([0, 1]) at X = 2 sends (k0, k1) to k0 . k1.
  const auto& b = cayley3();
  const auto& d = *b.d;
  const auto c = carrier_shell(b.r, 2);
  const auto f = free_monoid(2, 3);
  auto fam = floor_map(b, c, f, *f.index_of({0, 1}));
  const auto hom = d.hom(1, 1);
  for (std::size_t p = 0; p < hom.size(); ++p)
    for (std::size_t q = 0; q < hom.size(); ++q) {
      const auto got = d.morphism(hom[fam[1][rank_table(Table{Elem(p), Elem(q)}, hom.size())]]).map;
      EXPECT_EQ(got, compose(d.morphism(hom[p]).map, d.morphism(hom[q]).map));
    }
}

TEST(Words, RoundTripAndInjectivity) {
  auto res = check_word_round_trip(cayley3().r, 2, 3);
  EXPECT_TRUE(res.passed) << res.to_json().dump();
  EXPECT_EQ(res.stats["free_size"], 16);
  EXPECT_EQ(res.stats["words"], 15);
}

TEST(Words, CeilOfUnitIsLetter) {
  const auto f = free_monoid(2, 3);
  for (Elem l = 0; l < 2; ++l) EXPECT_EQ(word_ceil(f, word_family({l})), f.eta[l]);
}

TEST(Words, CeilNeedsFreeObjectInM) {
  const auto& b = cayley3();
  const auto f = free_monoid(1, 2);
  const auto c = carrier_shell(b.r, 1);
  EXPECT_THROW(ceil_map(b, f, floor_map(b, c, f, 1)), ShapeError);
}

TEST(Words, MonadAgreement) {
  auto res = check_monad_agreement(cayley3(), 2, 2, 3);
  EXPECT_TRUE(res.passed) << res.to_json().dump();
  EXPECT_GT(res.stats["skipped"].get<std::uint64_t>(), 0u);
}

TEST(Words, BrokenBindIsCaught) {
  auto res = check_monad_agreement(cayley3(), 2, 2, 3, reversed_bind);
  ASSERT_FALSE(res.passed);
  EXPECT_EQ(res.witness["law"], "bind");
}

TEST(Church, IteratesStrongAndDistinct) {
  auto d = build_finset_category(3);
  const auto c = carrier_shell(make_hom(d), 1);
  Table succ(6);
  for (Elem i = 0; i < 6; ++i) succ[i] = std::min<Elem>(i + 1, 5);
  std::vector<FinMap> k{FinMap(6, 6, succ)};
  for (std::size_t n = 0; n <= 4; ++n) {
    EXPECT_TRUE(is_strong_dinatural(tabulate(church_iterate(n), c)).passed);
    EXPECT_EQ(church_iterate(n)(6, k)[0], n);
  }
}

TEST(Adjoint, AllConditionsHold) {
  auto list = check_representation(adjoint3(), 1, 1);
  for (const auto& c : list.items) EXPECT_TRUE(c.passed) << c.to_json().dump();
}

TEST(Adjoint, FullBijection) {
  for (std::size_t a = 0; a <= 1; ++a) {
    auto res = check_iso_round_trip(adjoint3(), a, a);
    EXPECT_TRUE(res.passed) << res.to_json().dump();
    EXPECT_EQ(res.stats["carrier"], std::size_t{1} << a);
  }
  EXPECT_THROW(check_iso_round_trip(adjoint3(), 2, 2), ShapeError);
}

TEST(Adjoint, MonadAgreement) {
  auto res = check_monad_agreement(adjoint3(), 1, 1, 1);
  EXPECT_TRUE(res.passed) << res.to_json().dump();
}

TEST(Adjoint, SigmaNotIdentityBreaksRetraction) {
  auto b = adjoint_bundle(Theory::Semilattice, 2);
  const auto x = *b.m->find_object(chain_semilattice(2));
  b.sigma[x] = FinMap(2, 2, {1, 1});
  EXPECT_FALSE(check_rho(b).passed);
}

TEST(Bundle, DomainMustCoverMonoids) { EXPECT_THROW(cayley_bundle(2, 3), ConfigError); }
