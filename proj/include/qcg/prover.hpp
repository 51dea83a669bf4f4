#pragma once

// Backward-chaining, cut-free sequent prover for the product-free Lambek
// calculus, with qualia threaded through every rule:
//
//   [L/]  U, X/Y, T, V => Z   if  T => Y  and  U, X, V => Z
//   [L\]  U, T, Y\X, V => Z   if  T => Y  and  U, X, V => Z
//   [R/]  T => X/Y            if  T, Y => X
//   [R\]  T => Y\X            if  Y, T => X
//   [Ax]  X => X              X basic, features compatible
//
// Qualia flow. A goal carries a target structure: the functor's restriction
// for the argument premise of [L/] and [L\], an unbound metavariable for a
// top-level goal. When the cancelled argument Y is basic, the argument's sorts
// are combined with the functor's restriction (coercion by selection) and
// the result replaces the restriction slot of the functor's structure;
// otherwise the argument's whole structure is placed there. An abstraction
// hypothesis takes the argument part of its goal's target, or a fresh
// metavariable, and an unbound metavariable consumed at an axiom adopts the
// target there. Qualia never block a rule: derivability depends on the
// categories alone.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcg/category.hpp"
#include "qcg/error.hpp"
#include "qcg/lambda.hpp"
#include "qcg/sign.hpp"
#include "qcg/sorts.hpp"

namespace qcg {

enum class Rule { axiom, left_over, left_under, right_over, right_under };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::axiom:
      return "Ax";
    case Rule::left_over:
      return "L/";
    case Rule::left_under:
      return "L\\";
    case Rule::right_over:
      return "R/";
    case Rule::right_under:
      return "R\\";
  }
  return "?";
}

/// One coercion at an application step with a basic argument. A missing set
/// means that side was an unbound metavariable.
struct CoercionRecord {
  std::optional<SortSet> argument;
  std::optional<SortSet> restriction;
  std::optional<SortSet> result;

  bool failed() const { return result && result->empty(); }
};

struct Sequent {
  std::vector<Sign> antecedent;
  Sign succedent;
};

struct Derivation {
  Rule rule = Rule::axiom;
  Sequent conclusion;
  std::vector<Derivation> premises;
  std::optional<CoercionRecord> coercion;
};

inline std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(p);
  return n;
}

inline void collect_coercions(const Derivation& d, std::vector<CoercionRecord>& out) {
  if (d.coercion) out.push_back(*d.coercion);
  for (const auto& p : d.premises) collect_coercions(p, out);
}

inline std::string sequent_categories(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.antecedent[i].category);
  }
  return out + " => " + to_string(s.succedent.category);
}

/// Rule names and categories only: two derivations with the same shape
/// differ at most in their labels.
inline std::string derivation_shape(const Derivation& d) {
  std::string out = std::string(rule_name(d.rule)) + "(" + sequent_categories(d.conclusion);
  for (const auto& p : d.premises) out += "; " + derivation_shape(p);
  return out + ")";
}

struct ProverOptions {
  // When false every qualia structure is replaced by a metavariable first.
  bool compute_qualia = true;
  // Reject sequents whose basic-category counts cannot balance.
  bool count_check = true;
  // Skip split choices whose premises are underivable (memoized per call).
  bool derivability_prune = true;
};

inline bool counts_balance(const std::vector<Category>& antecedent, const Category& goal) {
  std::map<std::string, int> counts;
  for (const auto& c : antecedent) add_basic_counts(c, 1, counts);
  add_basic_counts(goal, -1, counts);
  return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second == 0; });
}

class Prover {
 public:
  explicit Prover(const SortLattice& lattice, ProverOptions options = {})
      : lattice_(&lattice), options_(options) {}

  /// All cut-free derivations of `antecedent => goal`. `target` is the
  /// qualia the goal is expected to meet (a metavariable when omitted).
  std::vector<Derivation> prove(std::vector<Sign> antecedent, const Category& goal,
                                QualiaStructure target = {}) {
    if (antecedent.empty()) throw validation_error("sequent antecedent must be non-empty");
    std::size_t top = target.empty() ? 0 : max_metavar_id(target);
    for (const auto& s : antecedent) top = std::max(top, max_metavar_id(s.qualia));
    supply_ = MetaVarSupply(top + 1);
    hypotheses_ = 0;
    memo_.clear();
    if (!options_.compute_qualia) {
      for (auto& s : antecedent) {
        s.qualia = supply_.fresh_metavar();
        s.applied = 0;
      }
      target = {};
    }
    if (target.empty()) target = supply_.fresh_metavar();
    return search(antecedent, goal, target);
  }

  std::vector<Derivation> prove(const Sequent& goal) {
    return prove(goal.antecedent, goal.succedent.category, goal.succedent.qualia);
  }

  /// Category-level derivability, sharing the prover's pruning options.
  bool derivable(const std::vector<Category>& antecedent, const Category& goal) {
    memo_.clear();
    return derivable_cats(antecedent, goal);
  }

 private:
  static std::vector<Category> categories(const std::vector<Sign>& signs) {
    std::vector<Category> out;
    out.reserve(signs.size());
    for (const auto& s : signs) out.push_back(s.category);
    return out;
  }

  bool derivable_cats(const std::vector<Category>& ant, const Category& goal) {
    if (options_.count_check && !counts_balance(ant, goal)) return false;
    std::string key;
    for (const auto& c : ant) key += to_string(c) + ",";
    key += "=>" + to_string(goal);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = derivable_uncached(ant, goal);
    memo_.emplace(std::move(key), ok);
    return ok;
  }

  bool derivable_uncached(const std::vector<Category>& ant, const Category& goal) {
    const std::size_t n = ant.size();
    if (n == 1 && goal.is_basic() && match_basic(goal, ant[0])) return true;
    for (std::size_t i = 0; i < n; ++i) {
      const Category& c = ant[i];
      if (c.kind() == Category::Kind::right_slash) {
        for (std::size_t k = 1; i + k < n; ++k) {
          std::vector<Category> t(ant.begin() + i + 1, ant.begin() + i + 1 + k);
          if (!derivable_cats(t, c.argument())) continue;
          std::vector<Category> rest(ant.begin(), ant.begin() + i);
          rest.push_back(c.result());
          rest.insert(rest.end(), ant.begin() + i + 1 + k, ant.end());
          if (derivable_cats(rest, goal)) return true;
        }
      } else if (c.kind() == Category::Kind::left_slash) {
        for (std::size_t k = 1; k <= i; ++k) {
          std::vector<Category> t(ant.begin() + i - k, ant.begin() + i);
          if (!derivable_cats(t, c.argument())) continue;
          std::vector<Category> rest(ant.begin(), ant.begin() + i - k);
          rest.push_back(c.result());
          rest.insert(rest.end(), ant.begin() + i + 1, ant.end());
          if (derivable_cats(rest, goal)) return true;
        }
      }
    }
    if (goal.kind() == Category::Kind::right_slash) {
      std::vector<Category> ext = ant;
      ext.push_back(goal.argument());
      if (derivable_cats(ext, goal.result())) return true;
    } else if (goal.kind() == Category::Kind::left_slash) {
      std::vector<Category> ext{goal.argument()};
      ext.insert(ext.end(), ant.begin(), ant.end());
      if (derivable_cats(ext, goal.result())) return true;
    }
    return false;
  }

  bool worth_trying(const std::vector<Category>& ant, const Category& goal) {
    if (options_.derivability_prune) return derivable_cats(ant, goal);
    if (options_.count_check) return counts_balance(ant, goal);
    return true;
  }

  // Combines the argument's qualia with the functor's restriction at a basic
  // argument position.
  std::pair<QualiaStructure, CoercionRecord> coerce(const QualiaStructure& argument,
                                                    const QualiaStructure& restriction) const {
    using K = QualiaStructure::Kind;
    if (argument.is(K::pair) || restriction.is(K::pair))
      throw validation_error("qualia pair at a basic argument position");
    CoercionRecord rec;
    if (argument.is(K::leaf)) rec.argument = argument.sorts();
    if (restriction.is(K::leaf)) rec.restriction = restriction.sorts();
    if (rec.argument && rec.restriction) {
      rec.result = qs_combine(*rec.argument, *rec.restriction, *lattice_);
      return {QualiaStructure::leaf(*rec.result), rec};
    }
    // An unbound side adopts the other one.
    if (rec.argument) {
      rec.result = rec.argument;
      return {argument, rec};
    }
    if (rec.restriction) {
      rec.result = rec.restriction;
      return {restriction, rec};
    }
    return {argument, rec};
  }

  std::vector<Derivation> search(const std::vector<Sign>& ant, const Category& goal,
                                 const QualiaStructure& target) {
    std::vector<Derivation> out;
    const std::size_t n = ant.size();
    if (!worth_trying(categories(ant), goal)) return out;

    if (n == 1 && goal.is_basic() && match_basic(goal, ant[0].category)) {
      const Sign& s = ant[0];
      QualiaStructure record = s.qualia;
      QualiaStructure head = head_qualia(s);
      if (head.is(QualiaStructure::Kind::metavar) && !target.is(QualiaStructure::Kind::metavar))
        record = bind_metavar(record, head.id(), target);
      out.push_back(Derivation{Rule::axiom,
                               Sequent{ant, Sign{goal, s.semantics, record, s.applied}},
                               {},
                               std::nullopt});
    }

    for (std::size_t i = 0; i < n; ++i) {
      const Category& c = ant[i].category;
      if (c.kind() == Category::Kind::right_slash) {
        for (std::size_t k = 1; i + k < n; ++k)
          apply_functor(ant, goal, target, i, i + 1, i + 1 + k, Rule::left_over, out);
      } else if (c.kind() == Category::Kind::left_slash) {
        for (std::size_t k = 1; k <= i; ++k)
          apply_functor(ant, goal, target, i, i - k, i, Rule::left_under, out);
      }
    }

    if (goal.is_complex()) {
      QualiaStructure hyp_qualia, body_target;
      if (target.is(QualiaStructure::Kind::pair)) {
        hyp_qualia = target.argument();
        body_target = target.functor();
      } else {
        hyp_qualia = supply_.fresh_metavar();
        body_target = supply_.fresh_metavar();
      }
      std::string var = "h~" + std::to_string(++hypotheses_);
      Sign hyp{goal.argument(), Term::var(var), hyp_qualia, 0};
      std::vector<Sign> ext;
      Rule rule;
      if (goal.kind() == Category::Kind::right_slash) {
        rule = Rule::right_over;
        ext = ant;
        ext.push_back(hyp);
      } else {
        rule = Rule::right_under;
        ext.push_back(hyp);
        ext.insert(ext.end(), ant.begin(), ant.end());
      }
      for (auto& d : search(ext, goal.result(), body_target)) {
        Sign succ{goal, Term::abs(var, d.conclusion.succedent.semantics),
                  d.conclusion.succedent.qualia, 0};
        out.push_back(Derivation{rule, Sequent{ant, std::move(succ)}, {std::move(d)}, std::nullopt});
      }
    }
    return out;
  }

  // The functor at `f` cancels the argument span [t_begin, t_end).
  void apply_functor(const std::vector<Sign>& ant, const Category& goal,
                     const QualiaStructure& target, std::size_t f, std::size_t t_begin,
                     std::size_t t_end, Rule rule, std::vector<Derivation>& out) {
    const Sign& functor = ant[f];
    const Category& x = functor.category.result();
    const Category& y = functor.category.argument();
    std::vector<Sign> t(ant.begin() + t_begin, ant.begin() + t_end);
    std::size_t span_begin = std::min(f, t_begin);
    std::size_t span_end = std::max(f + 1, t_end);

    std::vector<Category> rest_cats;
    for (std::size_t j = 0; j < span_begin; ++j) rest_cats.push_back(ant[j].category);
    rest_cats.push_back(x);
    for (std::size_t j = span_end; j < ant.size(); ++j) rest_cats.push_back(ant[j].category);
    if (!worth_trying(categories(t), y) || !worth_trying(rest_cats, goal)) return;

    QualiaStructure record = functor.qualia;
    QualiaStructure head = head_qualia(functor);
    if (head.is(QualiaStructure::Kind::metavar)) {
      QualiaStructure expanded =
          QualiaStructure::pair(supply_.fresh_metavar(), supply_.fresh_metavar());
      record = bind_metavar(record, head.id(), expanded);
      head = expanded;
    }
    if (!head.is(QualiaStructure::Kind::pair))
      throw validation_error("qualia of " + to_string(functor.category) + " is not a pair");
    const QualiaStructure& result_part = head.functor();
    const QualiaStructure& restriction = head.argument();

    for (auto& arg : search(t, y, restriction)) {
      const Sign& a = arg.conclusion.succedent;
      std::optional<CoercionRecord> rec;
      QualiaStructure slot;
      if (y.is_basic()) {
        auto [combined, r] = coerce(head_qualia(a), restriction);
        slot = std::move(combined);
        rec = std::move(r);
      } else {
        slot = a.qualia;
      }
      Sign applied{x, apply(functor.semantics, a.semantics),
                   replace_head(record, functor.applied, QualiaStructure::pair(result_part, slot)),
                   functor.applied + 1};
      std::vector<Sign> rest(ant.begin(), ant.begin() + span_begin);
      rest.push_back(std::move(applied));
      rest.insert(rest.end(), ant.begin() + span_end, ant.end());
      for (auto& d : search(rest, goal, target)) {
        Sign succ = d.conclusion.succedent;
        std::vector<Derivation> premises;
        premises.push_back(arg);
        premises.push_back(std::move(d));
        out.push_back(Derivation{rule, Sequent{ant, std::move(succ)}, std::move(premises), rec});
      }
    }
  }

  const SortLattice* lattice_;
  ProverOptions options_;
  MetaVarSupply supply_;
  std::size_t hypotheses_ = 0;
  std::unordered_map<std::string, bool> memo_;
};

inline std::vector<Derivation> prove(const Sequent& goal, const SortLattice& lattice,
                                     ProverOptions options = {}) {
  return Prover(lattice, options).prove(goal);
}

// ---------------------------------------------------------------------------
// Readings

struct Reading {
  Term semantics;           // normalized
  QualiaStructure qualia;   // the root succedent's structure
  Derivation derivation;    // representative
  bool interpretable = true;
  std::vector<CoercionRecord> failures;  // emptied coercions, in tree order
  std::vector<std::size_t> lexical_choice;  // entry indices, when from parse()
};

/// Normalizes each derivation's semantics and collapses derivations with
/// alpha-equal semantics and equal qualia into one reading, keeping the
/// first representative.
inline std::vector<Reading> readings(const std::vector<Derivation>& derivations,
                                     const NormalizeOptions& normalize_options = {}) {
  std::vector<Reading> out;
  for (const auto& d : derivations) {
    Reading r;
    r.semantics = normalize(d.conclusion.succedent.semantics, normalize_options);
    r.qualia = d.conclusion.succedent.qualia;
    std::vector<CoercionRecord> records;
    collect_coercions(d, records);
    for (const auto& rec : records)
      if (rec.failed()) r.failures.push_back(rec);
    r.interpretable = r.failures.empty();
    bool duplicate = std::any_of(out.begin(), out.end(), [&](const Reading& seen) {
      return seen.qualia == r.qualia && alpha_equal(seen.semantics, r.semantics);
    });
    if (duplicate) continue;
    r.derivation = d;
    out.push_back(std::move(r));
  }
  return out;
}

struct ParseOptions {
  ProverOptions prover;
  NormalizeOptions normalize;
};

/// Readings of `tokens` as `goal` over every segmentation and entry choice,
/// ordered by derivation size and then by lexical choice.
inline std::vector<Reading> parse(const Lexicon& lex, const std::vector<std::string>& tokens,
                                  const Category& goal, const ParseOptions& options = {}) {
  MetaVarSupply supply;
  auto segmentations = lookup(lex, tokens, supply);

  struct Candidate {
    std::size_t size;
    std::size_t ordinal;
    std::size_t index;
    Derivation derivation;
    std::vector<std::size_t> choice;
  };
  std::vector<Candidate> candidates;
  std::size_t ordinal = 0;
  Prover prover(lex.lattice(), options.prover);

  for (const auto& seg : segmentations) {
    std::vector<std::size_t> pick(seg.size(), 0);
    auto advance = [&] {
      for (std::size_t pos = seg.size(); pos-- > 0;) {
        if (++pick[pos] < seg[pos].signs.size()) return true;
        pick[pos] = 0;
      }
      return false;
    };
    do {
      std::vector<Sign> signs;
      std::vector<std::size_t> choice;
      for (std::size_t i = 0; i < seg.size(); ++i) {
        signs.push_back(seg[i].signs[pick[i]]);
        choice.push_back(seg[i].entries[pick[i]]);
      }
      auto derivs = prover.prove(std::move(signs), goal);
      for (std::size_t i = 0; i < derivs.size(); ++i)
        candidates.push_back(
            Candidate{derivation_size(derivs[i]), ordinal, i, std::move(derivs[i]), choice});
      ++ordinal;
    } while (advance());
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.size, a.ordinal, a.index) < std::tie(b.size, b.ordinal, b.index);
  });

  std::vector<Reading> out;
  for (auto& c : candidates) {
    auto rs = readings({c.derivation}, options.normalize);
    Reading& r = rs.front();
    bool duplicate = std::any_of(out.begin(), out.end(), [&](const Reading& seen) {
      return seen.qualia == r.qualia && alpha_equal(seen.semantics, r.semantics);
    });
    if (duplicate) continue;
    r.lexical_choice = std::move(c.choice);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qcg
