#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dico/dicodensity.hpp"
#include "dico/parallel.hpp"

namespace dico {

// ---------------------------------------------------------------------------------------
// Truncated free objects.

/// A finite stand-in for U F A. Monoids: words of length <= bound, ordered by length then
/// lexicographically, plus an absorbing sink for overlong products. Semilattices: all
/// subsets of A (element index = bitmask), no sink needed.
struct FreeTruncation {
  Theory theory = Theory::Monoid;
  std::size_t a = 0;
  std::size_t bound = 0;
  std::vector<std::vector<Elem>> words;  // letters of each non-sink element
  std::optional<Elem> sink;
  AlgebraObj obj;
  Table eta;

  std::size_t size() const noexcept { return obj.size(); }
  bool is_sink(Elem e) const noexcept { return sink && *sink == e; }
  Elem unit() const { return theory == Theory::Monoid ? *obj.unit : *obj.bottom; }

  std::optional<Elem> index_of(const std::vector<Elem>& w) const {
    for (Elem e = 0; e < words.size(); ++e)
      if (words[e] == w) return e;
    return std::nullopt;
  }

  /// k^ (e): the homomorphic extension of k : A -> target into `target`. nullopt at the sink.
  std::optional<Elem> ext(const AlgebraObj& target, std::span<const Elem> k, Elem e) const {
    if (k.size() != a) throw ShapeError("FreeTruncation::ext: k must have one value per letter");
    if (is_sink(e)) return std::nullopt;
    if (theory == Theory::Monoid) {
      Elem acc = *target.unit;
      for (auto l : words.at(e)) acc = target.times(acc, k[l]);
      return acc;
    }
    Elem acc = *target.bottom;
    for (auto l : words.at(e)) acc = target.vee(acc, k[l]);
    return acc;
  }

  json describe(Elem e) const {
    if (is_sink(e)) return "sink";
    return words.at(e);
  }
};

inline FreeTruncation free_monoid(std::size_t a, std::size_t bound, const Budget& budget = {}) {
  FreeTruncation f;
  f.theory = Theory::Monoid;
  f.a = a;
  f.bound = bound;
  f.words.push_back({});
  for (std::size_t len = 1; len <= bound; ++len) {
    budget.require(f.words.size() + saturating_pow(a, len), "truncated free monoid");
    Table w(len, 0);
    if (a == 0) break;
    do f.words.push_back(w);
    while (next_table(w, a));
  }
  const auto n = f.words.size() + 1;
  f.sink = static_cast<Elem>(n - 1);
  std::map<std::vector<Elem>, Elem> pos;
  for (Elem e = 0; e < f.words.size(); ++e) pos.emplace(f.words[e], e);
  Table mul(n * n, *f.sink);
  for (Elem x = 0; x + 1 < n; ++x)
    for (Elem y = 0; y + 1 < n; ++y) {
      auto w = f.words[x];
      w.insert(w.end(), f.words[y].begin(), f.words[y].end());
      if (auto it = pos.find(w); it != pos.end()) mul[x * n + y] = it->second;
    }
  f.obj = monoid(n, 0, std::move(mul));
  for (Elem l = 0; l < a; ++l) f.eta.push_back(pos.at({l}));
  return f;
}

inline FreeTruncation free_semilattice(std::size_t a, const Budget& budget = {}) {
  FreeTruncation f;
  f.theory = Theory::Semilattice;
  f.a = a;
  f.bound = a;
  const auto n = checked_pow(2, a, budget, "free semilattice");
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    std::vector<Elem> w;
    for (Elem l = 0; l < a; ++l)
      if (mask >> l & 1) w.push_back(l);
    f.words.push_back(std::move(w));
  }
  Table join(n * n);
  for (std::uint64_t x = 0; x < n; ++x)
    for (std::uint64_t y = 0; y < n; ++y) join[x * n + y] = static_cast<Elem>(x | y);
  f.obj = semilattice(n, 0, std::move(join));
  for (Elem l = 0; l < a; ++l) f.eta.push_back(Elem{1} << l);
  return f;
}

inline FreeTruncation make_free(Theory theory, std::size_t a, std::size_t bound, const Budget& budget = {}) {
  if (theory == Theory::Monoid) return free_monoid(a, bound, budget);
  if (theory == Theory::Semilattice) return free_semilattice(a, budget);
  throw ConfigError("no truncated free object for theory '" + std::string(theory_name(theory)) + "'");
}

/// Kleisli extension of the free structure: f^ (e) computed inside the free object on B.
/// nullopt when the result leaves the truncation.
inline std::optional<Elem> free_bind(const FreeTruncation& fa, const FreeTruncation& fb, Elem e,
                                     std::span<const Elem> f) {
  auto r = fa.ext(fb.obj, f, e);
  if (!r || fb.is_sink(*r)) return std::nullopt;
  return r;
}

// ---------------------------------------------------------------------------------------
// The bundle.

/// Data for the run-family criterion at one D-object X. Elements of U RR X are positions in
/// R X X; RR-bar X is a plain set of size `carrier`, possibly outside D.
struct RunsData {
  std::size_t carrier = 0;
  std::vector<FinMap> runs;    // U-bar RR X -> X
  std::vector<FinMap> sigma;   // U sigma_{RR X}(f) as an endomap of U-bar RR X, per f
  std::vector<FinMap> as_map;  // f in R X X read as X -> X (hom-like R)
};

struct RepresentationBundle {
  using HatFn = std::function<std::optional<Elem>(ObjIndex, const FreeTruncation&, std::span<const Elem>, Elem)>;
  enum class CommuteMode { Runs, Direct };

  std::string name;
  CategoryPtr d;
  CategoryPtr m;
  BifunctorPtr r;
  FunctorPtr u;                    // M -> Set
  std::vector<ObjIndex> ubar_obj;  // M-object -> D-object
  std::vector<MorIndex> ubar_mor;  // M-morphism -> D-morphism
  std::vector<AlgebraObj> rbb;     // per D-object X, the M-structure on R X X
  std::vector<FinMap> sigma;       // per M-object: U M -> R (U-bar M) (U-bar M)
  std::vector<FinMap> rho;         // per M-object: R (U-bar M) (U-bar M) -> U M
  Theory free_theory = Theory::Monoid;
  HatFn hat;                       // defaults to the extension into RR X

  CommuteMode mode = CommuteMode::Runs;
  std::vector<RunsData> runs;         // Runs mode, per D-object
  std::vector<ObjIndex> ubar_rbb;     // Direct mode: U-bar RR X as a D-object
  std::vector<FinMap> sigma_rbb;      // Direct mode: U sigma_{RR X} : R X X -> R X' X'

  std::optional<Elem> hat_of(ObjIndex x, const FreeTruncation& f, std::span<const Elem> k, Elem e) const {
    return hat ? hat(x, f, k, e) : f.ext(rbb.at(x), k, e);
  }
};

namespace detail {

inline BifunctorPtr carrier_dummy(const RepresentationBundle& b) { return make_dummy(b.u); }

inline BifunctorPtr ubar_pullback(const RepresentationBundle& b) {
  auto obj = b.ubar_obj;
  auto mor = b.ubar_mor;
  return make_pullback(b.r, b.m, [obj](ObjIndex x) { return obj.at(x); }, [mor](MorIndex f) { return mor.at(f); });
}

inline std::size_t hom_pos(const FinCategory& d, ObjIndex x, ObjIndex y, const FinMap& f) {
  auto m = d.find(x, y, f);
  if (!m) throw LawError("map is not a morphism of the domain category");
  return d.hom_position(*m);
}

}  // namespace detail

/// (ii)(a): U RR X = R X X, and RR X satisfies the laws of the M-theory.
inline CheckResult check_rbb(const RepresentationBundle& b) {
  const std::string name = "rbb-carrier";
  const auto theory = b.m->num_objects() ? b.m->object(0).theory : Theory::Set;
  if (b.rbb.size() != b.d->num_objects()) throw ShapeError("check_rbb: one RR X per D-object required");
  json sizes = json::array();
  for (ObjIndex x = 0; x < b.d->num_objects(); ++x) {
    const auto& o = b.rbb[x];
    if (o.size() != b.r->obj(x, x))
      return CheckResult::fail(name, {{"X", x}, {"reason", "U RR X differs from R X X"}, {"U", o.size()},
                                      {"R", b.r->obj(x, x)}});
    if (o.theory != theory) return CheckResult::fail(name, {{"X", x}, {"reason", "RR X has the wrong theory"}});
    if (auto v = algebra_violation(o)) return CheckResult::fail(name, {{"X", x}, {"reason", *v}});
    sizes.push_back(o.size());
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"sizes", sizes}};
  return res;
}

/// (ii)(b) in its unfolded form: for every g : X -> Y and every f1, f2 with
/// R X g . f1 = R g Y . f2, also R X g . f1^ = R g Y . f2^ on the truncated free carrier.
/// The sink has no image in RR X and is skipped.
inline CheckResult check_hat_sdin(const RepresentationBundle& b, std::size_t a, std::size_t bound,
                                  const Budget& budget = {}) {
  const std::string name = "hat-strong-dinatural";
  const auto free = make_free(b.free_theory, a, bound, budget);
  const auto& d = *b.d;
  const auto& r = *b.r;
  std::atomic<std::uint64_t> squares{0}, checked{0};
  std::vector<json> witness(d.num_morphisms());
  auto bad = parallel_find_first(d.num_morphisms(), [&](std::size_t g) {
    const auto x = d.morphism(g).dom;
    const auto y = d.morphism(g).cod;
    const auto& rxg = r.ract(x, g);
    const auto& rgy = r.lact(g, y);
    std::vector<std::pair<Elem, Elem>> pairs;
    for (Elem p = 0; p < r.obj(x, x); ++p)
      for (Elem q = 0; q < r.obj(y, y); ++q)
        if (rxg[p] == rgy[q]) pairs.emplace_back(p, q);
    budget.require(saturating_pow(pairs.size(), a), "hat square assumptions");
    Table choice(a, 0);
    Table k1(a), k2(a);
    std::uint64_t local_sq = 0, local_ck = 0;
    bool done = pairs.empty() && a > 0;
    while (!done) {
      for (std::size_t i = 0; i < a; ++i) std::tie(k1[i], k2[i]) = pairs[choice[i]];
      ++local_sq;
      for (Elem e = 0; e < free.size(); ++e) {
        if (free.is_sink(e)) continue;
        auto h1 = b.hat_of(x, free, k1, e);
        auto h2 = b.hat_of(y, free, k2, e);
        if (!h1 || !h2) continue;
        ++local_ck;
        if (rxg[*h1] != rgy[*h2]) {
          witness[g] = {{"g", detail::morphism_json(d, g)},
                        {"f1", k1},
                        {"f2", k2},
                        {"element", free.describe(e)},
                        {"lhs", r.describe(x, y, rxg[*h1])},
                        {"rhs", r.describe(x, y, rgy[*h2])}};
          return true;
        }
      }
      done = !next_table(choice, pairs.size());
    }
    squares += local_sq;
    checked += local_ck;
    return false;
  });
  if (bad) return CheckResult::fail(name, witness[*bad]);
  auto res = CheckResult::pass(name);
  res.stats = {{"A", a}, {"bound", bound}, {"free_size", free.size()}, {"squares", squares.load()},
               {"checked", checked.load()}, {"sink_skipped", free.sink.has_value()}};
  return res;
}

/// (iii)(a): U sigma is strongly dinatural from M |-> U M to M |-> R (U-bar M) (U-bar M),
/// and each sigma_M is an M-morphism M -> RR (U-bar M).
inline CheckResult check_sigma_sdin(const RepresentationBundle& b) {
  const std::string name = "sigma-strong-dinatural";
  for (ObjIndex mo = 0; mo < b.m->num_objects(); ++mo)
    if (!is_homomorphism(b.sigma.at(mo), b.m->object(mo), b.rbb.at(b.ubar_obj.at(mo))))
      return CheckResult::fail(name, {{"M", mo}, {"reason", "sigma_M is not a homomorphism"},
                                      {"sigma", b.sigma[mo].table()}});
  Family t{detail::carrier_dummy(b), detail::ubar_pullback(b), b.sigma};
  auto res = is_strong_dinatural(t);
  res.name = name;
  if (res.passed) res.stats = {{"objects", b.m->num_objects()}, {"morphisms", b.m->num_morphisms()}};
  return res;
}

/// (iv): rho . U sigma = id per object, and rho strongly dinatural.
inline CheckResult check_rho(const RepresentationBundle& b) {
  const std::string name = "rho-retraction";
  for (ObjIndex mo = 0; mo < b.m->num_objects(); ++mo)
    if (!compose(b.rho.at(mo), b.sigma.at(mo)).is_identity())
      return CheckResult::fail(name, {{"M", mo}, {"reason", "rho . sigma != id"}, {"sigma", b.sigma[mo].table()},
                                      {"rho", b.rho[mo].table()}});
  Family t{detail::ubar_pullback(b), detail::carrier_dummy(b), b.rho};
  auto res = is_strong_dinatural(t);
  res.name = name;
  if (res.passed) res.stats = {{"objects", b.m->num_objects()}};
  return res;
}

/// (iii)(b). Runs mode: the runs separate the points of U-bar RR X (equivalently, post-
/// composition with them is jointly monic) and
/// R (U-bar RR X) run_i . U sigma_{RR X} = R run_i X on R X X, as maps U-bar RR X -> X.
/// Direct mode: theta_{X'}(U sigma . k) = U sigma . theta_X(k) for every element theta of
/// the dicodensity carrier on A, |A| <= a_max, X' = U-bar RR X.
inline CheckResult check_sigma_commute(const RepresentationBundle& b, std::size_t a_max = 1,
                                       const Budget& budget = {}) {
  const std::string name = "sigma-commutes";
  const auto& d = *b.d;
  if (b.mode == RepresentationBundle::CommuteMode::Runs) {
    json index_sets = json::array();
    for (ObjIndex x = 0; x < d.num_objects(); ++x) {
      const auto& rd = b.runs.at(x);
      for (Elem p = 0; p < rd.carrier; ++p)
        for (Elem q = p + 1; q < rd.carrier; ++q) {
          bool separated = false;
          for (const auto& run : rd.runs) separated |= run[p] != run[q];
          if (!separated)
            return CheckResult::fail(name, {{"X", x}, {"reason", "runs are not jointly monic"}, {"indices", rd.runs.size()},
                                            {"p", p}, {"q", q}});
        }
      for (Elem f = 0; f < rd.sigma.size(); ++f)
        for (std::size_t i = 0; i < rd.runs.size(); ++i) {
          auto lhs = compose(rd.runs[i], rd.sigma[f]);
          auto rhs = compose(rd.as_map[f], rd.runs[i]);
          if (lhs != rhs)
            return CheckResult::fail(name, {{"X", x}, {"reason", "run square fails"}, {"i", i},
                                            {"f", rd.as_map[f].table()}, {"lhs", lhs.table()}, {"rhs", rhs.table()}});
        }
      index_sets.push_back(rd.runs.size());
    }
    auto res = CheckResult::pass(name);
    res.stats = {{"mode", "runs"}, {"index_sizes", index_sets}};
    return res;
  }
  std::uint64_t instances = 0;
  for (std::size_t a = 0; a <= a_max; ++a) {
    auto c = build_dicodensity(b.r, a, budget);
    for (std::size_t ti = 0; ti < c.size(); ++ti) {
      const auto& theta = c.elements[ti];
      for (ObjIndex x = 0; x < d.num_objects(); ++x) {
        const auto xp = b.ubar_rbb.at(x);
        const auto& s = b.sigma_rbb.at(x);
        const auto nx = b.r->obj(x, x);
        const auto total = checked_pow(nx, a, budget, "maps A -> R X X");
        for (std::uint64_t k = 0; k < total; ++k) {
          auto kt = unrank_table(k, a, nx);
          for (auto& v : kt) v = s[v];
          const auto lhs = theta[xp][rank_table(kt, b.r->obj(xp, xp))];
          const auto rhs = s[theta[x][k]];
          ++instances;
          if (lhs != rhs)
            return CheckResult::fail(name, {{"A", a}, {"theta", theta.to_json()}, {"X", x}, {"k", unrank_table(k, a, nx)},
                                            {"lhs", lhs}, {"rhs", rhs}});
        }
      }
    }
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"mode", "direct"}, {"instances", instances}};
  return res;
}

/// All five conditions.
inline CheckList check_representation(const RepresentationBundle& b, std::size_t a_max, std::size_t bound,
                                      const Budget& budget = {}) {
  CheckList out;
  out.add(check_rbb(b));
  for (std::size_t a = 0; a <= a_max; ++a) out.add(check_hat_sdin(b, a, bound, budget));
  out.add(check_sigma_sdin(b));
  out.add(check_sigma_commute(b, a_max, budget));
  out.add(check_rho(b));
  return out;
}

// ---------------------------------------------------------------------------------------
// The isomorphism U F A ~ C^R A.

/// A dicodensity carrier with no enumerated elements, enough for unit and kleisli_ext.
inline DicoCarrier carrier_shell(BifunctorPtr r, std::size_t a, const Budget& budget = {}) {
  DicoCarrier c;
  c.r = r;
  c.a = a;
  c.source = make_power(r, a, budget);
  return c;
}

/// floor(e)_X(k) = k^(e).
inline Family floor_map(const RepresentationBundle& b, const DicoCarrier& c, const FreeTruncation& free, Elem e) {
  if (free.is_sink(e)) throw BudgetError("floor_map: element outside the truncation", free.size(), free.size() - 1);
  if (free.a != c.a) throw ShapeError("floor_map: alphabet size differs from the carrier");
  return family_from(c.source, c.r, [&](ObjIndex x, Elem k) {
    auto kt = unrank_table(k, c.a, b.r->obj(x, x));
    auto h = b.hat_of(x, free, kt, e);
    if (!h) throw LawError("floor_map: hat undefined");
    return *h;
  });
}

/// ceil(theta) = rho_{FA}(theta_{U-bar FA}(U sigma_{FA} . eta)). The truncated free object must
/// be an object of M whose image under U-bar is in D.
inline Elem ceil_map(const RepresentationBundle& b, const FreeTruncation& free, const Family& theta) {
  auto mo = b.m->find_object(free.obj);
  if (!mo) throw ShapeError("ceil_map: the truncated free object is not an object of M");
  const auto x = b.ubar_obj.at(*mo);
  Table k(free.a);
  for (std::size_t l = 0; l < free.a; ++l) k[l] = b.sigma.at(*mo)[free.eta[l]];
  const auto h = theta[x][rank_table(k, b.r->obj(x, x))];
  return b.rho.at(*mo)[h];
}

/// ceil . floor = id on U F A, floor . ceil = id on C^R A, and |C^R A| = |U F A|.
inline CheckResult check_iso_round_trip(const RepresentationBundle& b, std::size_t a, std::size_t bound,
                                        const Budget& budget = {}) {
  const std::string name = "floor-ceil-bijection";
  const auto free = make_free(b.free_theory, a, bound, budget);
  auto c = build_dicodensity(b.r, a, budget);
  for (Elem e = 0; e < free.size(); ++e) {
    if (free.is_sink(e)) continue;
    auto fl = floor_map(b, c, free, e);
    if (auto sd = is_strong_dinatural(fl); !sd.passed)
      return CheckResult::fail(name, {{"reason", "floor is not strongly dinatural"}, {"element", free.describe(e)},
                                      {"witness", sd.witness}});
    if (!c.index_of(fl)) return CheckResult::fail(name, {{"reason", "floor outside the carrier"}, {"element", free.describe(e)}});
    if (auto back = ceil_map(b, free, fl); back != e)
      return CheckResult::fail(name, {{"reason", "ceil . floor != id"}, {"element", free.describe(e)},
                                      {"got", free.describe(back)}});
  }
  for (const auto& theta : c.elements) {
    const auto e = ceil_map(b, free, theta);
    if (floor_map(b, c, free, e) != theta)
      return CheckResult::fail(name, {{"reason", "floor . ceil != id"}, {"theta", theta.to_json()}});
  }
  const std::size_t free_size = free.size() - (free.sink ? 1 : 0);
  auto res = CheckResult::pass(name);
  res.stats = {{"A", a}, {"carrier", c.size()}, {"free", free_size}, {"bijection", c.size() == free_size}};
  if (c.size() != free_size) {
    res.passed = false;
    res.witness = {{"reason", "cardinalities differ"}, {"carrier", c.size()}, {"free", free_size}};
  }
  return res;
}

using FreeBindFn = std::function<std::optional<Elem>(const FreeTruncation&, const FreeTruncation&, Elem, std::span<const Elem>)>;

/// floor(eta a) = unit(a) and floor(bind e f) = kleisli_ext(floor . f, floor e), componentwise
/// at every D-object, for |A| <= a_max, |B| <= b_max and all in-truncation elements.
inline CheckResult check_monad_agreement(const RepresentationBundle& b, std::size_t a_max, std::size_t b_max,
                                         std::size_t bound, FreeBindFn bind = nullptr, const Budget& budget = {}) {
  const std::string name = "monad-agreement";
  if (!bind) bind = free_bind;
  std::uint64_t units = 0, binds = 0, skipped = 0;
  for (std::size_t a = 1; a <= a_max; ++a) {
    const auto fa = make_free(b.free_theory, a, bound, budget);
    const auto ca = carrier_shell(b.r, a, budget);
    std::vector<std::optional<Family>> floor_a(fa.size());
    for (Elem e = 0; e < fa.size(); ++e)
      if (!fa.is_sink(e)) floor_a[e] = floor_map(b, ca, fa, e);
    for (Elem l = 0; l < a; ++l) {
      ++units;
      if (*floor_a[fa.eta[l]] != unit(ca, l))
        return CheckResult::fail(name, {{"law", "unit"}, {"A", a}, {"letter", l}});
    }
    for (std::size_t bs = 1; bs <= b_max; ++bs) {
      const auto fb = make_free(b.free_theory, bs, bound, budget);
      const auto cb = carrier_shell(b.r, bs, budget);
      std::vector<std::optional<Family>> floor_b(fb.size());
      for (Elem e = 0; e < fb.size(); ++e)
        if (!fb.is_sink(e)) floor_b[e] = floor_map(b, cb, fb, e);
      const auto inner = fb.size() - (fb.sink ? 1 : 0);
      const auto nf = checked_pow(inner, a, budget, "maps A -> U F B");
      for (std::uint64_t fr = 0; fr < nf; ++fr) {
        const auto f = unrank_table(fr, a, inner);  // non-sink elements come first
        std::vector<Family> ff;
        for (auto v : f) ff.push_back(*floor_b[v]);
        for (Elem e = 0; e < fa.size(); ++e) {
          if (fa.is_sink(e)) continue;
          auto r = bind(fa, fb, e, f);
          if (!r) {
            ++skipped;
            continue;
          }
          ++binds;
          if (*floor_b[*r] != kleisli_ext(ca, cb, ff, *floor_a[e]))
            return CheckResult::fail(name, {{"law", "bind"}, {"A", a}, {"B", bs}, {"element", fa.describe(e)},
                                            {"f", [&] {
                                               json j = json::array();
                                               for (auto v : f) j.push_back(fb.describe(v));
                                               return j;
                                             }()},
                                            {"bind", fb.describe(*r)}});
        }
      }
    }
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"units", units}, {"binds", binds}, {"skipped", skipped}};
  return res;
}

// ---------------------------------------------------------------------------------------
// Families over R = Set[-, =] given uniformly in the set, so they can be evaluated at sets
// outside a truncated D.

/// theta(n, k) for k : A -> n^n, returning an endomap of n.
using ParamFamily = std::function<FinMap(std::size_t, std::span<const FinMap>)>;

/// Components at the objects of a finite-set category with R = hom.
inline Family tabulate(const ParamFamily& theta, const DicoCarrier& c) {
  const auto& d = c.r->domain();
  std::vector<FinMap> ks(c.a);
  return family_from(c.source, c.r, [&](ObjIndex x, Elem k) {
    const auto n = d.object(x).size();
    const auto hom = d.hom(x, x);
    auto kt = unrank_table(k, c.a, hom.size());
    for (std::size_t i = 0; i < c.a; ++i) ks[i] = d.morphism(hom[kt[i]]).map;
    return detail::hom_pos(d, x, x, theta(n, ks));
  });
}

/// floor(w)(n, k) = k(w_1) . ... . k(w_m); the empty word gives the identity.
inline ParamFamily word_family(std::vector<Elem> word) {
  return [word](std::size_t n, std::span<const FinMap> k) {
    FinMap acc = FinMap::identity(n);
    for (auto l : word) acc = compose(acc, k[l]);
    return acc;
  };
}

/// The Church numeral f |-> f^n on a one-letter alphabet.
inline ParamFamily church_iterate(std::size_t n) { return word_family(std::vector<Elem>(n, 0)); }

/// k(a) = left multiplication by [a] on the truncated free monoid.
inline std::vector<FinMap> left_multiplications(const FreeTruncation& free) {
  const auto n = free.size();
  std::vector<FinMap> k;
  for (std::size_t l = 0; l < free.a; ++l) {
    Table t(n);
    for (Elem y = 0; y < n; ++y) t[y] = free.obj.times(free.eta[l], y);
    k.emplace_back(n, n, std::move(t));
  }
  return k;
}

/// ceil through the truncated free monoid: evaluate theta there at the left multiplications,
/// then at the empty word.
inline Elem word_ceil(const FreeTruncation& free, const ParamFamily& theta) {
  if (free.theory != Theory::Monoid) throw ShapeError("word_ceil: needs a truncated free monoid");
  return theta(free.size(), left_multiplications(free))[free.unit()];
}

/// ceil . floor = id on the words of the truncation, floor injective there (components at D
/// together with the free component, which is what ceil reads), and every tabulated floor
/// strongly dinatural.
inline CheckResult check_word_round_trip(BifunctorPtr hom, std::size_t a, std::size_t bound, const Budget& budget = {}) {
  const std::string name = "word-round-trip";
  const auto free = free_monoid(a, bound, budget);
  const auto c = carrier_shell(hom, a, budget);
  std::map<std::pair<Family, Elem>, Elem> seen;
  std::map<Family, Elem> seen_d;
  bool d_separates = true;
  for (Elem e = 0; e < free.size(); ++e) {
    if (free.is_sink(e)) continue;
    const auto theta = word_family(free.words[e]);
    const auto back = word_ceil(free, theta);
    if (back != e)
      return CheckResult::fail(name, {{"reason", "ceil . floor != id"}, {"element", free.describe(e)},
                                      {"got", free.describe(back)}});
    auto fam = tabulate(theta, c);
    if (auto sd = is_strong_dinatural(fam); !sd.passed)
      return CheckResult::fail(name, {{"reason", "floor is not strongly dinatural"}, {"element", free.describe(e)},
                                      {"witness", sd.witness}});
    if (auto [it, fresh] = seen.emplace(std::pair(fam, back), e); !fresh)
      return CheckResult::fail(name, {{"reason", "floor not injective"}, {"first", free.describe(it->second)},
                                      {"second", free.describe(e)}});
    d_separates &= seen_d.emplace(std::move(fam), e).second;
  }
  auto res = CheckResult::pass(name);
  res.stats = {{"A", a}, {"bound", bound}, {"free_size", free.size()}, {"words", free.words.size()},
               {"separated_by_d_alone", d_separates}};
  return res;
}

// ---------------------------------------------------------------------------------------
// Packaged instances.

/// Monoids with R = Set[-, =]: RR X = (X^X, ., id), U-bar = U, sigma(m) = b |-> m b,
/// rho(g) = g(e), run_{X,i}(f) = f(i).
inline RepresentationBundle cayley_bundle(std::size_t d_max, std::size_t m_max, const Budget& budget = {}) {
  RepresentationBundle b;
  b.name = "monoid-cayley";
  b.d = build_finset_category(d_max, false, budget);
  b.m = build_algebra_category(Theory::Monoid, m_max, false, budget);
  b.r = make_hom(b.d);
  b.u = carrier_functor(b.m);
  b.free_theory = Theory::Monoid;
  const auto& d = *b.d;
  const auto& m = *b.m;
  auto set_of = [&](std::size_t n) {
    auto x = d.find_object(plain_set(n));
    if (!x) throw ConfigError("cayley bundle: D lacks a set of size " + std::to_string(n) + " (d_max < m_max)");
    return *x;
  };
  for (ObjIndex x = 0; x < d.num_objects(); ++x) {
    const auto hom = d.hom(x, x);
    const auto h = hom.size();
    Table mul(h * h);
    for (std::size_t p = 0; p < h; ++p)
      for (std::size_t q = 0; q < h; ++q) mul[p * h + q] = static_cast<Elem>(d.hom_position(d.compose(hom[p], hom[q])));
    b.rbb.push_back(monoid(h, static_cast<Elem>(d.hom_position(d.identity(x))), std::move(mul)));
  }
  for (ObjIndex mo = 0; mo < m.num_objects(); ++mo) b.ubar_obj.push_back(set_of(m.object(mo).size()));
  for (MorIndex f = 0; f < m.num_morphisms(); ++f) {
    const auto& mf = m.morphism(f);
    auto g = d.find(b.ubar_obj[mf.dom], b.ubar_obj[mf.cod], mf.map);
    if (!g) throw LawError("cayley bundle: U-bar image missing");
    b.ubar_mor.push_back(*g);
  }
  for (ObjIndex mo = 0; mo < m.num_objects(); ++mo) {
    const auto& o = m.object(mo);
    const auto n = o.size();
    const auto x = b.ubar_obj[mo];
    Table s(n);
    for (Elem a = 0; a < n; ++a) {
      Table left(n);
      for (Elem y = 0; y < n; ++y) left[y] = o.times(a, y);
      s[a] = static_cast<Elem>(detail::hom_pos(d, x, x, FinMap(n, n, left)));
    }
    b.sigma.emplace_back(n, b.r->obj(x, x), std::move(s));
    const auto hom = d.hom(x, x);
    Table rt(hom.size());
    for (std::size_t g = 0; g < hom.size(); ++g) rt[g] = d.morphism(hom[g]).map[*o.unit];
    b.rho.emplace_back(hom.size(), n, std::move(rt));
  }
  for (ObjIndex x = 0; x < d.num_objects(); ++x) {
    const auto& rx = b.rbb[x];
    const auto n = d.object(x).size();
    const auto p = rx.size();
    RunsData rd;
    rd.carrier = p;
    const auto hom = d.hom(x, x);
    for (Elem i = 0; i < n; ++i) {
      Table t(p);
      for (std::size_t f = 0; f < p; ++f) t[f] = d.morphism(hom[f]).map[i];
      rd.runs.emplace_back(p, n, std::move(t));
    }
    for (Elem f = 0; f < p; ++f) {
      Table t(p);
      for (Elem g = 0; g < p; ++g) t[g] = rx.times(f, g);
      rd.sigma.emplace_back(p, p, std::move(t));
      rd.as_map.push_back(d.morphism(hom[f]).map);
    }
    b.runs.push_back(std::move(rd));
  }
  return b;
}

/// D = M = algebras of `theory` up to n_max, R X Y = U Y, RR X = X, U-bar = Id, sigma = rho = id.
inline RepresentationBundle adjoint_bundle(Theory theory, std::size_t n_max, const Budget& budget = {}) {
  if (theory != Theory::Semilattice && theory != Theory::Monoid)
    throw ConfigError("adjoint bundle: free objects are available for monoids and semilattices only");
  RepresentationBundle b;
  b.name = "adjoint(" + std::string(theory_name(theory)) + ")";
  b.d = build_algebra_category(theory, n_max, false, budget);
  b.m = b.d;
  b.u = carrier_functor(b.d);
  b.r = make_dummy(b.u);
  b.free_theory = theory;
  b.mode = RepresentationBundle::CommuteMode::Direct;
  const auto& d = *b.d;
  for (ObjIndex x = 0; x < d.num_objects(); ++x) {
    b.rbb.push_back(d.object(x));
    b.ubar_obj.push_back(x);
    b.ubar_rbb.push_back(x);
    b.sigma.push_back(FinMap::identity(d.object(x).size()));
    b.rho.push_back(FinMap::identity(d.object(x).size()));
    b.sigma_rbb.push_back(FinMap::identity(d.object(x).size()));
  }
  for (MorIndex f = 0; f < d.num_morphisms(); ++f) b.ubar_mor.push_back(f);
  return b;
}

}  // namespace dico
