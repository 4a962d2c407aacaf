#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dico/errors.hpp"

namespace dico {

using Elem = std::uint32_t;
using Table = std::vector<Elem>;

/// Caps every exhaustive enumeration. Exceeding it raises BudgetError.
struct Budget {
  static constexpr std::uint64_t kDefault = 10'000'000;

  std::uint64_t limit = kDefault;

  void require(std::uint64_t requested, const std::string& what) const {
    if (requested > limit) throw BudgetError(what, requested, limit);
  }
};

/// base^exp, saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base == 0) return 0;
    if (result > UINT64_MAX / base) return UINT64_MAX;
    result *= base;
  }
  return result;
}

/// base^exp, raising BudgetError when it exceeds the budget.
inline std::size_t checked_pow(std::uint64_t base, std::uint64_t exp, const Budget& budget,
                               const std::string& what) {
  const auto n = saturating_pow(base, exp);
  budget.require(n, what);
  return static_cast<std::size_t>(n);
}

/// Canonical finite set {0, ..., size-1}, optionally with display labels.
struct FinSet {
  std::size_t size = 0;
  std::vector<std::string> labels;

  FinSet() = default;
  explicit FinSet(std::size_t n) : size(n) {}
  FinSet(std::size_t n, std::vector<std::string> names) : size(n), labels(std::move(names)) {
    if (labels.size() != size) throw ShapeError("FinSet: label count differs from size");
  }

  std::string label(Elem e) const {
    return labels.empty() ? std::to_string(e) : labels.at(e);
  }

  friend bool operator==(const FinSet&, const FinSet&) = default;
};

/// Total function between canonical finite sets stored as an image table.
class FinMap {
 public:
  FinMap() = default;

  FinMap(std::size_t dom, std::size_t cod, Table table)
      : dom_(dom), cod_(cod), table_(std::move(table)) {
    if (table_.size() != dom_) throw ShapeError("FinMap: table length differs from domain size");
    for (auto v : table_)
      if (v >= cod_) throw ShapeError("FinMap: image out of codomain range");
  }

  static FinMap identity(std::size_t n) {
    Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<Elem>(i);
    return FinMap(n, n, std::move(t));
  }

  static FinMap constant(std::size_t dom, std::size_t cod, Elem value) {
    return FinMap(dom, cod, Table(dom, value));
  }

  std::size_t dom() const noexcept { return dom_; }
  std::size_t cod() const noexcept { return cod_; }
  const Table& table() const noexcept { return table_; }

  Elem operator()(Elem x) const {
    if (x >= dom_) throw IndexError("FinMap: argument out of domain");
    return table_[x];
  }
  Elem operator[](std::size_t x) const noexcept { return table_[x]; }

  bool is_identity() const {
    if (dom_ != cod_) return false;
    for (std::size_t i = 0; i < dom_; ++i)
      if (table_[i] != i) return false;
    return true;
  }

  bool is_injective() const {
    std::vector<bool> seen(cod_, false);
    for (auto v : table_) {
      if (seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  friend bool operator==(const FinMap&, const FinMap&) = default;
  friend auto operator<=>(const FinMap& a, const FinMap& b) {
    if (auto c = a.dom_ <=> b.dom_; c != 0) return c;
    if (auto c = a.cod_ <=> b.cod_; c != 0) return c;
    return a.table_ <=> b.table_;
  }

 private:
  std::size_t dom_ = 0;
  std::size_t cod_ = 0;
  Table table_;
};

/// g ∘ f.
inline FinMap compose(const FinMap& g, const FinMap& f) {
  if (f.cod() != g.dom())
    throw EndpointError("compose: codomain " + std::to_string(f.cod()) + " != domain " +
                        std::to_string(g.dom()));
  Table t(f.dom());
  for (std::size_t i = 0; i < f.dom(); ++i) t[i] = g[f[i]];
  return FinMap(f.dom(), g.cod(), std::move(t));
}

/// Position of a table in lexicographic order (entry 0 most significant).
inline std::uint64_t rank_table(std::span<const Elem> table, std::size_t cod) {
  std::uint64_t r = 0;
  for (auto v : table) r = r * cod + v;
  return r;
}

inline Table unrank_table(std::uint64_t rank, std::size_t dom, std::size_t cod) {
  Table t(dom);
  for (std::size_t i = dom; i-- > 0;) {
    t[i] = static_cast<Elem>(rank % cod);
    rank /= cod;
  }
  return t;
}

/// Digit `pos` (0 = most significant) of a rank in base `cod` with `dom` digits.
inline Elem table_digit(std::uint64_t rank, std::size_t dom, std::size_t cod, std::size_t pos) {
  for (std::size_t i = dom - 1; i > pos; --i) rank /= cod;
  return static_cast<Elem>(rank % cod);
}

/// Advance a table to its lexicographic successor. Returns false after the last one.
inline bool next_table(Table& t, std::size_t cod) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (t[i] + 1 < cod) {
      ++t[i];
      return true;
    }
    t[i] = 0;
  }
  return false;
}

/// All |cod|^|dom| maps in lexicographic table order.
inline std::vector<FinMap> all_maps(const FinSet& dom, const FinSet& cod, const Budget& budget = {}) {
  const auto count = checked_pow(cod.size, dom.size, budget, "all_maps");
  std::vector<FinMap> out;
  out.reserve(count);
  if (count == 0) return out;
  Table t(dom.size, 0);
  do {
    out.emplace_back(dom.size, cod.size, t);
  } while (next_table(t, cod.size));
  return out;
}

}  // namespace dico
