#pragma once

// Text and JSON renderings of derivations and readings.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcg/prover.hpp"

namespace qcg {

inline constexpr const char* readings_schema = "qcg-readings/1";

inline std::string to_string(const Sequent& s) {
  return sequent_categories(s);
}

inline std::string optional_sorts(const std::optional<SortSet>& s) {
  return s ? to_string(*s) : "?";
}

inline std::string describe(const CoercionRecord& rec) {
  return "argument " + optional_sorts(rec.argument) + " against restriction " +
         optional_sorts(rec.restriction) + " gives " + optional_sorts(rec.result);
}

namespace detail {

inline void print_tree(const Derivation& d, std::size_t depth, std::string& out) {
  out += std::string(2 * depth, ' ') + "[" + rule_name(d.rule) + "] " + to_string(d.conclusion);
  if (d.coercion) out += "   {" + describe(*d.coercion) + "}";
  out += "\n";
  for (const auto& p : d.premises) print_tree(p, depth + 1, out);
}

}  // namespace detail

/// Indented proof tree, conclusion first, one sequent per line.
inline std::string render_tree(const Derivation& d, std::size_t indent = 0) {
  std::string out;
  detail::print_tree(d, indent, out);
  return out;
}

inline nlohmann::json to_json(const SortSet& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& sort : s) arr.push_back(sort.name());
  return arr;
}

inline nlohmann::json to_json(const std::optional<SortSet>& s) {
  return s ? to_json(*s) : nlohmann::json(nullptr);
}

/// Leaf -> array of sort names, Pair -> {functor, argument}, MetaVar -> null.
inline nlohmann::json to_json(const QualiaStructure& q) {
  switch (q.kind()) {
    case QualiaStructure::Kind::leaf:
      return to_json(q.sorts());
    case QualiaStructure::Kind::pair:
      return {{"functor", to_json(q.functor())}, {"argument", to_json(q.argument())}};
    case QualiaStructure::Kind::metavar:
      break;
  }
  return nullptr;
}

inline nlohmann::json to_json(const CoercionRecord& rec) {
  return {{"argument", to_json(rec.argument)},
          {"restriction", to_json(rec.restriction)},
          {"result", to_json(rec.result)}};
}

inline nlohmann::json to_json(const Derivation& d) {
  nlohmann::json antecedent = nlohmann::json::array();
  for (const auto& s : d.conclusion.antecedent) antecedent.push_back(to_string(s.category));
  nlohmann::json premises = nlohmann::json::array();
  for (const auto& p : d.premises) premises.push_back(to_json(p));
  return {{"rule", rule_name(d.rule)},
          {"conclusion",
           {{"antecedent", std::move(antecedent)},
            {"succedent", to_string(d.conclusion.succedent.category)}}},
          {"premises", std::move(premises)},
          {"coercion", d.coercion ? to_json(*d.coercion) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const Reading& r, bool with_derivation) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.failures) failures.push_back(to_json(f));
  nlohmann::json j = {{"semantics", to_string(r.semantics)},
                      {"qualia", to_json(r.qualia)},
                      {"qualia_text", to_string(r.qualia)},
                      {"interpretable", r.interpretable},
                      {"failures", std::move(failures)}};
  if (!r.lexical_choice.empty()) j["lexical_choice"] = r.lexical_choice;
  if (with_derivation) j["derivation"] = to_json(r.derivation);
  return j;
}

/// Multi-line text block for one reading, numbered from 1.
inline std::string render_reading(const Reading& r, std::size_t number, bool with_derivation) {
  std::string out = "reading " + std::to_string(number) +
                    (r.interpretable ? " [interpretable]\n" : " [no interpretation]\n");
  out += "  semantics: " + to_string(r.semantics) + "\n";
  out += "  qualia: " + to_string(r.qualia) + "\n";
  for (const auto& f : r.failures) out += "  coercion failed: " + describe(f) + "\n";
  if (with_derivation) {
    out += "  derivation:\n";
    out += render_tree(r.derivation, 2);
  }
  return out;
}

}  // namespace qcg
