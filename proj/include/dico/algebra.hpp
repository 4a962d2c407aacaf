#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dico/finset.hpp"

namespace dico {

enum class Theory {
  Set,
  Pointed,
  Monoid,
  Semilattice,         // join-semilattice with bottom (idempotent commutative monoid)
  IdempotentSemiring,  // semilattice (join, bottom) with a monoid (mul, unit) distributing over it
};

inline std::string_view theory_name(Theory t) {
  switch (t) {
    case Theory::Set: return "set";
    case Theory::Pointed: return "pointed";
    case Theory::Monoid: return "monoid";
    case Theory::Semilattice: return "semilattice";
    case Theory::IdempotentSemiring: return "idempotent-semiring";
  }
  return "?";
}

inline Theory parse_theory(std::string_view s) {
  if (s == "set") return Theory::Set;
  if (s == "pointed") return Theory::Pointed;
  if (s == "monoid") return Theory::Monoid;
  if (s == "semilattice") return Theory::Semilattice;
  if (s == "idempotent-semiring") return Theory::IdempotentSemiring;
  throw ConfigError("unknown theory '" + std::string(s) + "'");
}

inline bool has_point(Theory t) { return t == Theory::Pointed; }
inline bool has_monoid(Theory t) { return t == Theory::Monoid || t == Theory::IdempotentSemiring; }
inline bool has_join(Theory t) { return t == Theory::Semilattice || t == Theory::IdempotentSemiring; }

/// A finite set with the operation tables of one of the supported theories.
/// Binary tables are row-major: op[x * n + y] = x op y.
struct AlgebraObj {
  FinSet carrier;
  Theory theory = Theory::Set;
  std::optional<Elem> point;
  std::optional<Elem> unit;
  Table mul;
  std::optional<Elem> bottom;
  Table join;

  std::size_t size() const noexcept { return carrier.size; }
  Elem times(Elem x, Elem y) const { return mul[x * size() + y]; }
  Elem vee(Elem x, Elem y) const { return join[x * size() + y]; }

  friend bool operator==(const AlgebraObj&, const AlgebraObj&) = default;

  /// Canonical sort key: size first, then operation tables.
  auto key() const {
    return std::tuple(carrier.size, point.value_or(0), unit.value_or(0), mul, bottom.value_or(0),
                      join);
  }
};

/// First violated equation, or nullopt when every law of the theory holds.
inline std::optional<std::string> algebra_violation(const AlgebraObj& a) {
  const std::size_t n = a.size();
  auto in_range = [n](Elem e) { return e < n; };
  auto table_ok = [&](const Table& t) {
    return t.size() == n * n && std::all_of(t.begin(), t.end(), in_range);
  };
  auto at = [](Elem x, Elem y, Elem z) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
  };

  if (has_point(a.theory) && !(a.point && in_range(*a.point))) return "point missing or out of range";
  if (has_monoid(a.theory)) {
    if (!(a.unit && in_range(*a.unit)) || !table_ok(a.mul)) return "monoid tables malformed";
    for (Elem x = 0; x < n; ++x)
      if (a.times(*a.unit, x) != x || a.times(x, *a.unit) != x)
        return "unit law fails at " + std::to_string(x);
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z)
          if (a.times(a.times(x, y), z) != a.times(x, a.times(y, z)))
            return "multiplication not associative at " + at(x, y, z);
  }
  if (has_join(a.theory)) {
    if (!(a.bottom && in_range(*a.bottom)) || !table_ok(a.join)) return "semilattice tables malformed";
    for (Elem x = 0; x < n; ++x) {
      if (a.vee(x, x) != x) return "join not idempotent at " + std::to_string(x);
      if (a.vee(*a.bottom, x) != x) return "bottom not a unit at " + std::to_string(x);
      for (Elem y = 0; y < n; ++y) {
        if (a.vee(x, y) != a.vee(y, x)) return "join not commutative";
        for (Elem z = 0; z < n; ++z)
          if (a.vee(a.vee(x, y), z) != a.vee(x, a.vee(y, z)))
            return "join not associative at " + at(x, y, z);
      }
    }
  }
  if (a.theory == Theory::IdempotentSemiring) {
    for (Elem x = 0; x < n; ++x) {
      if (a.times(x, *a.bottom) != *a.bottom || a.times(*a.bottom, x) != *a.bottom)
        return "bottom not annihilating at " + std::to_string(x);
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z) {
          if (a.times(x, a.vee(y, z)) != a.vee(a.times(x, y), a.times(x, z)))
            return "left distributivity fails at " + at(x, y, z);
          if (a.times(a.vee(x, y), z) != a.vee(a.times(x, z), a.times(y, z)))
            return "right distributivity fails at " + at(x, y, z);
        }
    }
  }
  return std::nullopt;
}

/// Constructs an algebra, rejecting any structure that violates its theory.
inline AlgebraObj make_algebra(AlgebraObj a) {
  if (auto v = algebra_violation(a)) throw LawError(std::string(theory_name(a.theory)) + ": " + *v);
  return a;
}

inline AlgebraObj plain_set(std::size_t n) {
  AlgebraObj a;
  a.carrier = FinSet(n);
  return a;
}

inline AlgebraObj pointed_set(std::size_t n, Elem pt) {
  AlgebraObj a;
  a.carrier = FinSet(n);
  a.theory = Theory::Pointed;
  a.point = pt;
  return make_algebra(std::move(a));
}

inline AlgebraObj monoid(std::size_t n, Elem unit, Table mul) {
  AlgebraObj a;
  a.carrier = FinSet(n);
  a.theory = Theory::Monoid;
  a.unit = unit;
  a.mul = std::move(mul);
  return make_algebra(std::move(a));
}

inline AlgebraObj semilattice(std::size_t n, Elem bottom, Table join) {
  AlgebraObj a;
  a.carrier = FinSet(n);
  a.theory = Theory::Semilattice;
  a.bottom = bottom;
  a.join = std::move(join);
  return make_algebra(std::move(a));
}

/// The chain 0 < 1 < ... < n-1 with join = max.
inline AlgebraObj chain_semilattice(std::size_t n) {
  Table j(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) j[x * n + y] = std::max(x, y);
  return semilattice(n, 0, std::move(j));
}

/// Whether f : a -> b preserves every operation of the (shared) theory.
inline bool is_homomorphism(const FinMap& f, const AlgebraObj& a, const AlgebraObj& b) {
  if (a.theory != b.theory) return false;
  if (f.dom() != a.size() || f.cod() != b.size()) return false;
  const std::size_t n = a.size();
  if (has_point(a.theory) && f[*a.point] != *b.point) return false;
  if (has_monoid(a.theory)) {
    if (f[*a.unit] != *b.unit) return false;
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (f[a.times(x, y)] != b.times(f[x], f[y])) return false;
  }
  if (has_join(a.theory)) {
    if (f[*a.bottom] != *b.bottom) return false;
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (f[a.vee(x, y)] != b.vee(f[x], f[y])) return false;
  }
  return true;
}

namespace detail {

// Monoid tables with the unit row and column forced; other entries free.
inline void monoid_structures(std::size_t n, const Budget& budget, std::vector<AlgebraObj>& out) {
  if (n == 0) return;
  const std::size_t free_cells = (n - 1) * (n - 1);
  budget.require(saturating_pow(n, free_cells) * n, "monoid structures");
  for (Elem u = 0; u < n; ++u) {
    std::vector<std::size_t> cells;
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (x != u && y != u) cells.push_back(x * n + y);
    Table mul(n * n, 0);
    for (Elem x = 0; x < n; ++x) {
      mul[u * n + x] = x;
      mul[x * n + u] = x;
    }
    Table choice(cells.size(), 0);
    do {
      for (std::size_t i = 0; i < cells.size(); ++i) mul[cells[i]] = choice[i];
      AlgebraObj a;
      a.carrier = FinSet(n);
      a.theory = Theory::Monoid;
      a.unit = u;
      a.mul = mul;
      if (!algebra_violation(a)) out.push_back(std::move(a));
    } while (next_table(choice, n));
  }
}

// Join tables with bottom row forced, idempotent diagonal, commutativity by mirroring.
inline void semilattice_structures(std::size_t n, const Budget& budget, std::vector<AlgebraObj>& out) {
  if (n == 0) return;
  const std::size_t free_cells = n >= 3 ? (n - 1) * (n - 2) / 2 : 0;
  budget.require(saturating_pow(n, free_cells) * n, "semilattice structures");
  for (Elem b = 0; b < n; ++b) {
    std::vector<std::pair<Elem, Elem>> cells;
    for (Elem x = 0; x < n; ++x)
      for (Elem y = x + 1; y < n; ++y)
        if (x != b && y != b) cells.emplace_back(x, y);
    Table join(n * n, 0);
    for (Elem x = 0; x < n; ++x) {
      join[x * n + x] = x;
      join[b * n + x] = x;
      join[x * n + b] = x;
    }
    Table choice(cells.size(), 0);
    do {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        auto [x, y] = cells[i];
        join[x * n + y] = choice[i];
        join[y * n + x] = choice[i];
      }
      AlgebraObj a;
      a.carrier = FinSet(n);
      a.theory = Theory::Semilattice;
      a.bottom = b;
      a.join = join;
      if (!algebra_violation(a)) out.push_back(std::move(a));
    } while (next_table(choice, n));
  }
}

}  // namespace detail

/// Every structure of the theory on the carrier {0..n-1}, in canonical order.
inline std::vector<AlgebraObj> enumerate_structures(Theory theory, std::size_t n,
                                                    const Budget& budget = {}) {
  std::vector<AlgebraObj> out;
  switch (theory) {
    case Theory::Set:
      out.push_back(plain_set(n));
      break;
    case Theory::Pointed:
      for (Elem p = 0; p < n; ++p) out.push_back(pointed_set(n, p));
      break;
    case Theory::Monoid:
      detail::monoid_structures(n, budget, out);
      break;
    case Theory::Semilattice:
      detail::semilattice_structures(n, budget, out);
      break;
    case Theory::IdempotentSemiring: {
      std::vector<AlgebraObj> mons, sls;
      detail::monoid_structures(n, budget, mons);
      detail::semilattice_structures(n, budget, sls);
      budget.require(static_cast<std::uint64_t>(mons.size()) * sls.size(), "semiring structures");
      for (const auto& s : sls)
        for (const auto& m : mons) {
          AlgebraObj a = s;
          a.theory = Theory::IdempotentSemiring;
          a.unit = m.unit;
          a.mul = m.mul;
          if (!algebra_violation(a)) out.push_back(std::move(a));
        }
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const AlgebraObj& x, const AlgebraObj& y) { return x.key() < y.key(); });
  return out;
}

}  // namespace dico
