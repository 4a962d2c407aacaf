#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dico {

using json = nlohmann::json;

/// Verdict of one exhaustive check. On failure `witness` holds the first
/// counterexample in canonical order, serialized as explicit tables.
struct CheckResult {
  std::string name;
  bool passed = true;
  json witness;
  json stats = json::object();

  static CheckResult pass(std::string name) { return CheckResult{std::move(name), true, nullptr}; }
  static CheckResult fail(std::string name, json witness) {
    return CheckResult{std::move(name), false, std::move(witness)};
  }

  explicit operator bool() const noexcept { return passed; }

  json to_json() const {
    json j = {{"check", name}, {"passed", passed}};
    if (!passed) j["witness"] = witness;
    if (!stats.empty()) j["stats"] = stats;
    return j;
  }
};

/// Collects checks; the first failure in each group is retained.
struct CheckList {
  std::vector<CheckResult> items;

  CheckResult& add(CheckResult r) {
    items.push_back(std::move(r));
    return items.back();
  }
  bool all_passed() const {
    for (const auto& c : items)
      if (!c.passed) return false;
    return true;
  }
  json to_json() const {
    json arr = json::array();
    for (const auto& c : items) arr.push_back(c.to_json());
    return arr;
  }
};

inline json table_json(const std::vector<std::uint32_t>& t) { return json(t); }

}  // namespace dico
