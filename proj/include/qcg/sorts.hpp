#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcg/error.hpp"

namespace qcg {

/// A sort atom such as `human` or `event`. Equality is name equality.
class Sort {
 public:
  Sort() = default;
  explicit Sort(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  friend auto operator<=>(const Sort&, const Sort&) = default;
  friend bool operator==(const Sort&, const Sort&) = default;

 private:
  std::string name_;
};

using SortSet = std::set<Sort>;

inline SortSet make_sort_set(std::initializer_list<const char*> names) {
  SortSet out;
  for (const char* n : names) out.emplace(n);
  return out;
}

/// A finite partial order of sorts. The declared (sub, super) pairs are
/// closed reflexively and transitively at construction; cycles among
/// distinct sorts are rejected there. No top or bottom element is implied.
class SortLattice {
 public:
  using Pair = std::pair<std::string, std::string>;

  SortLattice() = default;

  SortLattice(const std::vector<std::string>& sorts,
              const std::vector<Pair>& order)
      : declared_(order) {
    std::set<std::string> names(sorts.begin(), sorts.end());
    for (const auto& [sub, super] : order) {
      if (!names.count(sub))
        throw lookup_error("order mentions undeclared sort '" + sub + "'");
      if (!names.count(super))
        throw lookup_error("order mentions undeclared sort '" + super + "'");
    }
    for (const auto& n : names) {
      if (n.empty()) throw validation_error("empty sort name");
      index_.emplace(n, sorts_.size());
      sorts_.emplace_back(n);
    }
    const std::size_t n = sorts_.size();
    closure_.assign(n * n, false);
    for (std::size_t i = 0; i < n; ++i) closure_[i * n + i] = true;
    for (const auto& [sub, super] : order)
      closure_[index_.at(sub) * n + index_.at(super)] = true;
    // Warshall
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (closure_[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (closure_[k * n + j]) closure_[i * n + j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (closure_[i * n + j] && closure_[j * n + i])
          throw validation_error("sort order is cyclic: '" +
                                 sorts_[i].name() + "' and '" +
                                 sorts_[j].name() + "' subsume each other");
  }

  bool contains(const Sort& s) const { return index_.count(s.name()) != 0; }
  bool contains(const std::string& s) const { return index_.count(s) != 0; }

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<Pair>& declared_order() const { return declared_; }

  /// True iff x is below or equal to y in the reflexive-transitive closure.
  bool leq(const Sort& x, const Sort& y) const {
    return closure_[index_of(x) * sorts_.size() + index_of(y)];
  }

  /// x if x <= y, y if y <= x, nothing when the two are incomparable.
  std::optional<Sort> unify(const Sort& x, const Sort& y) const {
    if (leq(x, y)) return x;
    if (leq(y, x)) return y;
    return std::nullopt;
  }

 private:
  std::size_t index_of(const Sort& s) const {
    auto it = index_.find(s.name());
    if (it == index_.end())
      throw lookup_error("unknown sort '" + s.name() + "'");
    return it->second;
  }

  std::vector<Sort> sorts_;
  std::map<std::string, std::size_t> index_;
  std::vector<bool> closure_;
  std::vector<Pair> declared_;
};

inline bool leq(const Sort& x, const Sort& y, const SortLattice& lattice) {
  return lattice.leq(x, y);
}

inline std::optional<Sort> unify_sorts(const Sort& x, const Sort& y,
                                       const SortLattice& lattice) {
  return lattice.unify(x, y);
}

}  // namespace qcg
