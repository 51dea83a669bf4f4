#pragma once

// Command-line front end: configuration, batch input, and the run loop that
// maps outcomes to exit statuses.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcg/render.hpp"

namespace qcg::cli {

enum class Mode { parse, prove, check_lexicon };
enum class Output { text, structured };

/// Exit statuses.
enum Status : int {
  interpretable = 0,
  no_interpretation = 1,
  underivable = 2,
  input_error = 3,
};

struct RunConfig {
  std::string lexicon_path;  // optional in prove mode
  std::string goal = "S";
  Mode mode = Mode::parse;
  Output output = Output::text;
  std::size_t max_readings = 0;  // 0 = unlimited
  bool show_derivations = false;
};

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::parse:
      return "parse";
    case Mode::prove:
      return "prove";
    case Mode::check_lexicon:
      return "check-lexicon";
  }
  return "?";
}

inline const char* status_name(int s) {
  switch (s) {
    case interpretable:
      return "interpretable";
    case no_interpretation:
      return "no interpretation";
    case underivable:
      return "underivable";
    default:
      return "error";
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lookup_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// One input per non-blank line; lines whose first non-space character is
/// '#' are skipped.
inline std::vector<std::string> read_batch(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = qcg::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(std::move(t));
  }
  return out;
}

/// Checks that every basic name in `c` is declared.
inline void check_basic_names(const Category& c, const std::set<std::string>& declared) {
  std::set<std::string> used;
  collect_basic_names(c, used);
  for (const auto& name : used)
    if (!declared.count(name))
      throw validation_error("undeclared basic category '" + name + "' in " + to_string(c));
}

/// Parses "A, B, C => G". Commas inside braces or parentheses do not split.
/// Each antecedent category becomes a sign with constant semantics c1..cn
/// and unspecified qualia.
inline Sequent parse_sequent(std::string_view text, const std::set<std::string>& basic_names,
                             MetaVarSupply& supply) {
  std::size_t arrow = text.find("=>");
  if (arrow == std::string_view::npos) throw syntax_error("sequent: expected '=>'", text.size());
  if (text.find("=>", arrow + 2) != std::string_view::npos)
    throw syntax_error("sequent: more than one '=>'", text.find("=>", arrow + 2));

  std::vector<std::pair<std::string, std::size_t>> parts;
  std::size_t depth = 0, start = 0;
  for (std::size_t i = 0; i <= arrow; ++i) {
    char c = i < arrow ? text[i] : ',';
    if (c == '(' || c == '{') ++depth;
    if ((c == ')' || c == '}') && depth > 0) --depth;
    if (c == ',' && depth == 0) {
      std::size_t lead = start;
      while (lead < i && std::isspace(static_cast<unsigned char>(text[lead]))) ++lead;
      parts.emplace_back(qcg::detail::trim(text.substr(start, i - start)), lead);
      start = i + 1;
    }
  }

  auto category_at = [&](const std::string& s, std::size_t offset) {
    if (s.empty()) throw syntax_error("sequent: empty category", offset);
    try {
      Category c = parse_category(s);
      check_basic_names(c, basic_names);
      return c;
    } catch (const syntax_error& e) {
      std::string msg = e.what();
      msg.erase(msg.rfind(" at offset "));
      throw syntax_error("sequent: " + msg, offset + e.position);
    }
  };

  Sequent seq;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Category c = category_at(parts[i].first, parts[i].second);
    seq.antecedent.push_back(
        Sign{c, Term::constant("c" + std::to_string(i + 1)), supply.fresh_metavar(), 0});
  }
  std::size_t lead = arrow + 2;
  while (lead < text.size() && std::isspace(static_cast<unsigned char>(text[lead]))) ++lead;
  Category goal = category_at(qcg::detail::trim(text.substr(arrow + 2)), lead);
  seq.succedent = Sign{goal, Term{}, supply.fresh_metavar(), 0};
  return seq;
}

struct Outcome {
  std::string input;
  int status = input_error;
  std::string error;
  std::size_t derivations = 0;  // prove mode only
  std::vector<Reading> readings;
};

inline int status_of(const std::vector<Reading>& rs) {
  if (rs.empty()) return underivable;
  bool any = std::any_of(rs.begin(), rs.end(), [](const Reading& r) { return r.interpretable; });
  return any ? interpretable : no_interpretation;
}

inline Outcome parse_input(const Lexicon& lex, const Category& goal, const std::string& input) {
  Outcome o;
  o.input = input;
  try {
    o.readings = parse(lex, tokenize(input), goal);
    o.status = status_of(o.readings);
  } catch (const error& e) {
    o.error = e.what();
    o.status = input_error;
  }
  return o;
}

inline Outcome prove_input(const Lexicon& lex, const std::string& input) {
  Outcome o;
  o.input = input;
  try {
    MetaVarSupply supply;
    Sequent seq = parse_sequent(input, lex.basic_names(), supply);
    auto derivs = Prover(lex.lattice()).prove(seq);
    o.derivations = derivs.size();
    o.readings = readings(derivs);
    o.status = status_of(o.readings);
  } catch (const error& e) {
    o.error = e.what();
    o.status = input_error;
  }
  return o;
}

namespace detail {

inline std::size_t shown(const RunConfig& config, const Outcome& o) {
  return config.max_readings == 0 ? o.readings.size()
                                  : std::min(config.max_readings, o.readings.size());
}

inline void write_text(const RunConfig& config, const Outcome& o, std::ostream& out) {
  out << "input: " << o.input << "\n";
  if (config.mode == Mode::parse) out << "goal: " << config.goal << "\n";
  out << "status: " << status_name(o.status);
  if (o.status == input_error) {
    out << ": " << o.error << "\n\n";
    return;
  }
  if (config.mode == Mode::prove)
    out << " (" << o.derivations << (o.derivations == 1 ? " derivation, " : " derivations, ")
        << o.readings.size() << (o.readings.size() == 1 ? " reading)" : " readings)");
  else if (!o.readings.empty())
    out << " (" << o.readings.size() << (o.readings.size() == 1 ? " reading)" : " readings)");
  out << "\n";
  std::size_t n = shown(config, o);
  for (std::size_t i = 0; i < n; ++i)
    out << render_reading(o.readings[i], i + 1, config.show_derivations);
  if (n < o.readings.size()) out << "(" << o.readings.size() - n << " more not shown)\n";
  out << "\n";
}

inline nlohmann::json outcome_json(const RunConfig& config, const Outcome& o) {
  nlohmann::json j = {{"input", o.input},
                      {"status", status_name(o.status)},
                      {"exit_code", o.status}};
  if (o.status == input_error) {
    j["error"] = o.error;
    return j;
  }
  if (config.mode == Mode::prove) j["derivation_count"] = o.derivations;
  j["reading_count"] = o.readings.size();
  nlohmann::json rs = nlohmann::json::array();
  for (std::size_t i = 0; i < shown(config, o); ++i)
    rs.push_back(to_json(o.readings[i], config.show_derivations));
  j["readings"] = std::move(rs);
  return j;
}

inline int write_document(const RunConfig& config, nlohmann::json results, int status,
                          const std::string& error_text, std::ostream& out) {
  nlohmann::json doc = {{"schema", readings_schema},
                        {"mode", mode_name(config.mode)},
                        {"exit_code", status}};
  if (config.mode == Mode::parse) doc["goal"] = config.goal;
  if (!error_text.empty()) doc["error"] = error_text;
  doc["results"] = std::move(results);
  out << doc.dump(2) << "\n";
  return status;
}

}  // namespace detail

/// Runs every input under `config`. The exit status is the largest status
/// over all inputs, or input_error if the lexicon or goal is invalid.
inline int run(const RunConfig& config, const std::vector<std::string>& inputs,
               std::ostream& out, std::ostream& err) {
  const bool structured = config.output == Output::structured;
  auto fail = [&](const std::string& msg) {
    err << "qcg: " << msg << "\n";
    if (structured) return detail::write_document(config, nlohmann::json::array(), input_error, msg, out);
    return static_cast<int>(input_error);
  };

  Lexicon lex;
  Category goal;
  try {
    if (!config.lexicon_path.empty()) {
      try {
        lex = load_lexicon(read_file(config.lexicon_path));
      } catch (const error& e) {
        throw error(config.lexicon_path + ": " + e.what());
      }
    } else if (config.mode != Mode::prove) {
      throw validation_error("a lexicon is required in " + std::string(mode_name(config.mode)) +
                             " mode");
    }
    if (config.mode == Mode::parse) {
      goal = parse_category(config.goal);
      check_basic_names(goal, lex.basic_names());
    }
  } catch (const error& e) {
    return fail(e.what());
  }

  if (config.mode == Mode::check_lexicon) {
    std::size_t order_pairs = lex.lattice().declared_order().size();
    if (structured) {
      nlohmann::json j = {{"entries", lex.entries().size()},
                          {"sorts", lex.lattice().sorts().size()},
                          {"order_pairs", order_pairs},
                          {"basic", lex.basic_names()}};
      return detail::write_document(config, nlohmann::json::array({j}), interpretable, "", out);
    }
    out << "lexicon ok: " << lex.entries().size() << " entries, " << lex.lattice().sorts().size()
        << " sorts, " << order_pairs << " order pairs, basic";
    for (const auto& b : lex.basic_names()) out << " " << b;
    out << "\n";
    return interpretable;
  }

  if (inputs.empty()) return fail("no input");

  int worst = interpretable;
  nlohmann::json results = nlohmann::json::array();
  for (const auto& input : inputs) {
    Outcome o = config.mode == Mode::parse ? parse_input(lex, goal, input) : prove_input(lex, input);
    worst = std::max(worst, o.status);
    if (o.status == input_error) err << "qcg: " << o.input << ": " << o.error << "\n";
    if (structured)
      results.push_back(detail::outcome_json(config, o));
    else
      detail::write_text(config, o, out);
  }
  if (structured) detail::write_document(config, std::move(results), worst, "", out);
  return worst;
}

}  // namespace qcg::cli
