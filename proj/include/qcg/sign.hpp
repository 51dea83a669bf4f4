#pragma once

// Qualia structures, the categorial sign <C : (lambda, Q)>, and the lexicon.
//
// Lexicon file format (UTF-8, one declaration per line, `#` starts a comment):
//
//   basic: N NP S
//   sorts: read < event          read <= event
//   sorts: artifact              an order-isolated sort
//   entry "a novel" S/(NP\S) :: \P. exists z. novel(z) & P(z) :: [?, [?, {artifact, read, write}]]
//
// Qualia syntax: `{s1, s2}` is a leaf sort set, `[F, A]` pairs the functor
// and argument structures of a complex category, `?` is an unbound
// metavariable.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcg/category.hpp"
#include "qcg/error.hpp"
#include "qcg/lambda.hpp"
#include "qcg/sorts.hpp"

namespace qcg {

class QualiaStructure {
 public:
  enum class Kind { leaf, pair, metavar };

  QualiaStructure() = default;

  static QualiaStructure leaf(SortSet sorts) {
    return make(Kind::leaf, std::move(sorts), {}, {}, 0);
  }
  static QualiaStructure pair(QualiaStructure functor, QualiaStructure argument) {
    return make(Kind::pair, {}, std::move(functor), std::move(argument), 0);
  }
  static QualiaStructure metavar(std::size_t id) { return make(Kind::metavar, {}, {}, {}, id); }

  bool empty() const { return node_ == nullptr; }
  Kind kind() const;
  bool is(Kind k) const { return !empty() && kind() == k; }

  const SortSet& sorts() const;
  const QualiaStructure& functor() const;
  const QualiaStructure& argument() const;
  std::size_t id() const;

  // Structural equality; metavariables compare equal regardless of id.
  friend bool operator==(const QualiaStructure& a, const QualiaStructure& b) {
    if (a.node_ == b.node_) return true;
    if (a.empty() || b.empty()) return false;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::leaf:
        return a.sorts() == b.sorts();
      case Kind::pair:
        return a.functor() == b.functor() && a.argument() == b.argument();
      case Kind::metavar:
        return true;
    }
    return false;
  }

 private:
  struct Node;
  static QualiaStructure make(Kind k, SortSet s, QualiaStructure f, QualiaStructure a,
                              std::size_t id);

  std::shared_ptr<const Node> node_;
};

struct QualiaStructure::Node {
  Kind kind;
  SortSet sorts;
  QualiaStructure functor;
  QualiaStructure argument;
  std::size_t id;
};

inline QualiaStructure QualiaStructure::make(Kind k, SortSet s, QualiaStructure f,
                                             QualiaStructure a, std::size_t id) {
  QualiaStructure q;
  q.node_ = std::make_shared<const Node>(Node{k, std::move(s), std::move(f), std::move(a), id});
  return q;
}

inline QualiaStructure::Kind QualiaStructure::kind() const { return node_->kind; }
inline const SortSet& QualiaStructure::sorts() const { return node_->sorts; }
inline const QualiaStructure& QualiaStructure::functor() const { return node_->functor; }
inline const QualiaStructure& QualiaStructure::argument() const { return node_->argument; }
inline std::size_t QualiaStructure::id() const { return node_->id; }

/// Hands out metavariable ids. One supply per parse job keeps jobs from
/// sharing metavariables.
class MetaVarSupply {
 public:
  MetaVarSupply() = default;
  explicit MetaVarSupply(std::size_t first) : next_(first) {}

  std::size_t fresh() { return next_++; }
  QualiaStructure fresh_metavar() { return QualiaStructure::metavar(fresh()); }

 private:
  std::size_t next_ = 1;
};

inline std::string to_string(const SortSet& sorts) {
  std::string out = "{";
  bool first = true;
  for (const auto& s : sorts) {
    if (!first) out += ", ";
    first = false;
    out += s.name();
  }
  return out + "}";
}

inline std::string to_string(const QualiaStructure& q) {
  switch (q.kind()) {
    case QualiaStructure::Kind::leaf:
      return to_string(q.sorts());
    case QualiaStructure::Kind::pair:
      return "[" + to_string(q.functor()) + ", " + to_string(q.argument()) + "]";
    case QualiaStructure::Kind::metavar:
      return "?";
  }
  return {};
}

/// True iff the structure has the shape of `c`: basic categories carry a
/// leaf or a metavariable, X/Y and Y\X a pair [QS(X), QS(Y)] or a
/// metavariable.
inline bool mirrors(const QualiaStructure& q, const Category& c) {
  if (q.is(QualiaStructure::Kind::metavar)) return true;
  if (c.is_basic()) return q.is(QualiaStructure::Kind::leaf);
  return q.is(QualiaStructure::Kind::pair) && mirrors(q.functor(), c.result()) &&
         mirrors(q.argument(), c.argument());
}

inline QualiaStructure bind_metavar(const QualiaStructure& q, std::size_t id,
                                    const QualiaStructure& value) {
  switch (q.kind()) {
    case QualiaStructure::Kind::leaf:
      return q;
    case QualiaStructure::Kind::metavar:
      return q.id() == id ? value : q;
    case QualiaStructure::Kind::pair: {
      QualiaStructure f = bind_metavar(q.functor(), id, value);
      QualiaStructure a = bind_metavar(q.argument(), id, value);
      return QualiaStructure::pair(std::move(f), std::move(a));
    }
  }
  return q;
}

/// Copy of `q` with every metavariable replaced by a fresh one; metavariables
/// that shared an id keep sharing one.
inline QualiaStructure freshen(const QualiaStructure& q, MetaVarSupply& supply,
                               std::map<std::size_t, std::size_t>& renaming) {
  switch (q.kind()) {
    case QualiaStructure::Kind::leaf:
      return q;
    case QualiaStructure::Kind::metavar: {
      auto [it, inserted] = renaming.emplace(q.id(), 0);
      if (inserted) it->second = supply.fresh();
      return QualiaStructure::metavar(it->second);
    }
    case QualiaStructure::Kind::pair: {
      QualiaStructure f = freshen(q.functor(), supply, renaming);
      QualiaStructure a = freshen(q.argument(), supply, renaming);
      return QualiaStructure::pair(std::move(f), std::move(a));
    }
  }
  return q;
}

inline QualiaStructure freshen(const QualiaStructure& q, MetaVarSupply& supply) {
  std::map<std::size_t, std::size_t> renaming;
  return freshen(q, supply, renaming);
}

/// Coercion by selection: every successful pairwise unification of an
/// argument sort with a restriction sort. An empty result is a coercion
/// failure, reported as data.
inline SortSet qs_combine(const SortSet& argument, const SortSet& restriction,
                          const SortLattice& lattice) {
  SortSet out;
  for (const auto& q : argument)
    for (const auto& r : restriction)
      if (auto u = lattice.unify(q, r)) out.insert(*u);
  return out;
}

inline std::size_t max_metavar_id(const QualiaStructure& q) {
  switch (q.kind()) {
    case QualiaStructure::Kind::leaf:
      return 0;
    case QualiaStructure::Kind::metavar:
      return q.id();
    case QualiaStructure::Kind::pair:
      return std::max(max_metavar_id(q.functor()), max_metavar_id(q.argument()));
  }
  return 0;
}

inline void collect_sorts(const QualiaStructure& q, std::set<std::string>& out) {
  switch (q.kind()) {
    case QualiaStructure::Kind::leaf:
      for (const auto& s : q.sorts()) out.insert(s.name());
      return;
    case QualiaStructure::Kind::pair:
      collect_sorts(q.functor(), out);
      collect_sorts(q.argument(), out);
      return;
    case QualiaStructure::Kind::metavar:
      return;
  }
}

namespace detail {

class QualiaParser {
 public:
  QualiaParser(std::string_view text, MetaVarSupply& supply) : text_(text), supply_(supply) {}

  QualiaStructure parse() {
    QualiaStructure q = structure();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw syntax_error("qualia: " + msg, pos_);
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  QualiaStructure structure() {
    if (at('?')) {
      ++pos_;
      return supply_.fresh_metavar();
    }
    if (at('[')) {
      ++pos_;
      QualiaStructure f = structure();
      expect(',');
      QualiaStructure a = structure();
      expect(']');
      return QualiaStructure::pair(std::move(f), std::move(a));
    }
    if (at('{')) {
      ++pos_;
      SortSet sorts;
      if (!at('}')) {
        for (;;) {
          skip_space();
          std::size_t start = pos_;
          while (pos_ < text_.size() &&
                 (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                  text_[pos_] == '-'))
            ++pos_;
          if (start == pos_) fail("expected sort name");
          sorts.emplace(std::string(text_.substr(start, pos_ - start)));
          if (at(',')) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      expect('}');
      return QualiaStructure::leaf(std::move(sorts));
    }
    fail("expected '{', '[' or '?'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  MetaVarSupply& supply_;
};

}  // namespace detail

inline QualiaStructure parse_qualia(std::string_view text, MetaVarSupply& supply) {
  return detail::QualiaParser(text, supply).parse();
}

/// The categorial sign. For a lexical sign `qualia` mirrors `category`. A
/// sign built by application keeps the functor's whole structure with the
/// filled argument slot replaced by the coerced qualia; `applied` counts
/// those steps, and the part mirroring `category` sits `applied`
/// functor-steps below the root (see `head_qualia`).
struct Sign {
  Category category;
  Term semantics;
  QualiaStructure qualia;
  std::size_t applied = 0;
};

inline QualiaStructure head_qualia(const QualiaStructure& q, std::size_t depth) {
  const QualiaStructure* cur = &q;
  for (std::size_t i = 0; i < depth; ++i) {
    if (!cur->is(QualiaStructure::Kind::pair))
      throw validation_error("qualia record shallower than its application count");
    cur = &cur->functor();
  }
  return *cur;
}

inline QualiaStructure head_qualia(const Sign& s) { return head_qualia(s.qualia, s.applied); }

/// `q` with the node `depth` functor-steps below the root replaced.
inline QualiaStructure replace_head(const QualiaStructure& q, std::size_t depth,
                                    const QualiaStructure& value) {
  if (depth == 0) return value;
  if (!q.is(QualiaStructure::Kind::pair))
    throw validation_error("qualia record shallower than its application count");
  return QualiaStructure::pair(replace_head(q.functor(), depth - 1, value), q.argument());
}

inline Sign freshen(const Sign& s, MetaVarSupply& supply) {
  return Sign{s.category, s.semantics, freshen(s.qualia, supply), s.applied};
}

// ---------------------------------------------------------------------------
// Lexicon

struct LexicalEntry {
  std::vector<std::string> tokens;  // lowercased key
  std::string surface;              // as written in the file
  Sign sign;
  std::size_t line = 0;
};

class Lexicon {
 public:
  Lexicon() : basic_names_{"N", "NP", "S"} {}
  Lexicon(SortLattice lattice, std::set<std::string> basic_names,
          std::vector<LexicalEntry> entries)
      : lattice_(std::move(lattice)),
        basic_names_(std::move(basic_names)),
        entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.tokens.empty()) throw validation_error("entry with an empty key");
      index_[e.tokens].push_back(i);
      max_key_ = std::max(max_key_, e.tokens.size());
      known_tokens_.insert(e.tokens.begin(), e.tokens.end());
    }
  }

  const SortLattice& lattice() const { return lattice_; }
  const std::set<std::string>& basic_names() const { return basic_names_; }
  const std::vector<LexicalEntry>& entries() const { return entries_; }
  std::size_t max_key_length() const { return max_key_; }

  const std::vector<std::size_t>* find(const std::vector<std::string>& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &it->second;
  }

  bool knows_token(const std::string& token) const { return known_tokens_.count(token) != 0; }

 private:
  SortLattice lattice_;
  std::set<std::string> basic_names_;
  std::vector<LexicalEntry> entries_;
  std::map<std::vector<std::string>, std::vector<std::size_t>> index_;
  std::set<std::string> known_tokens_;
  std::size_t max_key_ = 0;
};

/// Whitespace split with lowercase folding; punctuation at either end of a
/// token is dropped.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string word;
  auto is_punct = [](char c) {
    return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"';
  };
  while (in >> word) {
    std::size_t b = 0, e = word.size();
    while (b < e && is_punct(word[b])) ++b;
    while (e > b && is_punct(word[e - 1])) --e;
    if (b == e) continue;
    std::string tok = word.substr(b, e - b);
    for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(std::move(tok));
  }
  return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string located(std::size_t line, std::size_t column, const std::string& msg) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace detail

/// Checks shape mirroring, declared basic names, known sorts and closed
/// semantics. Throws validation_error naming the violated invariant.
inline void validate_sign(const Sign& sign, const SortLattice& lattice,
                          const std::set<std::string>& basic_names) {
  std::set<std::string> names;
  collect_basic_names(sign.category, names);
  for (const auto& n : names)
    if (!basic_names.count(n)) throw validation_error("undeclared basic category '" + n + "'");
  if (!mirrors(sign.qualia, sign.category))
    throw validation_error("qualia shape mismatch: " + to_string(sign.qualia) +
                           " does not mirror " + to_string(sign.category));
  std::set<std::string> sorts;
  collect_sorts(sign.qualia, sorts);
  for (const auto& s : sorts)
    if (!lattice.contains(s)) throw lookup_error("unknown sort '" + s + "'");
  auto free = free_vars(sign.semantics);
  if (!free.empty()) throw validation_error("semantics has free variable '" + *free.begin() + "'");
}

inline Lexicon load_lexicon(std::string_view text) {
  std::vector<std::string> sort_names;
  std::vector<SortLattice::Pair> order;
  std::optional<std::set<std::string>> basic;
  std::vector<LexicalEntry> entries;
  MetaVarSupply supply;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    // Comments end the line unless the '#' sits inside the quoted surface.
    std::size_t cut = raw.size();
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    std::string line = detail::trim(raw.substr(0, cut));
    if (line.empty()) continue;
    std::size_t indent = raw.find_first_not_of(" \t") + 1;

    auto fail = [&](std::size_t col, const std::string& msg) -> validation_error {
      return validation_error(detail::located(line_no, col, msg));
    };

    if (line.starts_with("sorts:")) {
      std::string body = detail::trim(std::string_view(line).substr(6));
      std::size_t lt = body.find('<');
      if (lt == std::string::npos) {
        auto words = detail::split_words(body);
        if (words.size() != 1) throw fail(indent, "expected 'sorts: name' or 'sorts: a < b'");
        sort_names.push_back(words[0]);
      } else {
        auto lhs = detail::split_words(std::string_view(body).substr(0, lt));
        auto rhs = detail::split_words(std::string_view(body).substr(lt + 1));
        if (lhs.size() != 1 || rhs.size() != 1) throw fail(indent, "expected 'sorts: a < b'");
        sort_names.push_back(lhs[0]);
        sort_names.push_back(rhs[0]);
        order.emplace_back(lhs[0], rhs[0]);
      }
    } else if (line.starts_with("basic:")) {
      auto words = detail::split_words(std::string_view(line).substr(6));
      if (words.empty()) throw fail(indent, "empty basic category list");
      if (!basic) basic.emplace();
      basic->insert(words.begin(), words.end());
    } else if (line.starts_with("entry")) {
      std::size_t q1 = line.find('"');
      std::size_t q2 = q1 == std::string::npos ? q1 : line.find('"', q1 + 1);
      if (q2 == std::string::npos) throw fail(indent, "expected quoted surface form");
      LexicalEntry e;
      e.surface = line.substr(q1 + 1, q2 - q1 - 1);
      e.tokens = tokenize(e.surface);
      e.line = line_no;
      if (e.tokens.empty()) throw fail(indent + q1, "empty surface form");
      std::string rest = line.substr(q2 + 1);
      std::vector<std::string> parts;
      std::size_t from = 0;
      for (;;) {
        std::size_t sep = rest.find("::", from);
        parts.push_back(rest.substr(from, sep == std::string::npos ? sep : sep - from));
        if (sep == std::string::npos) break;
        from = sep + 2;
      }
      if (parts.size() != 3) throw fail(indent + q2, "expected 'CATEGORY :: TERM :: QUALIA'");
      std::size_t base = indent + q2 + 1;
      std::size_t offsets[3] = {base, base + parts[0].size() + 2,
                                base + parts[0].size() + parts[1].size() + 4};
      try {
        e.sign.category = parse_category(parts[0]);
      } catch (const syntax_error& err) {
        throw fail(offsets[0] + err.position, err.what());
      }
      try {
        e.sign.semantics = parse_term(parts[1]);
      } catch (const syntax_error& err) {
        throw fail(offsets[1] + err.position, err.what());
      }
      try {
        e.sign.qualia = parse_qualia(parts[2], supply);
      } catch (const syntax_error& err) {
        throw fail(offsets[2] + err.position, err.what());
      }
      entries.push_back(std::move(e));
    } else {
      throw fail(indent, "unrecognized declaration '" + line + "'");
    }
  }

  std::set<std::string> basic_names = basic.value_or(std::set<std::string>{"N", "NP", "S"});
  SortLattice lattice;
  try {
    lattice = SortLattice(sort_names, order);
  } catch (const error& err) {
    throw validation_error(std::string("sort declarations: ") + err.what());
  }
  for (const auto& e : entries) {
    try {
      validate_sign(e.sign, lattice, basic_names);
    } catch (const error& err) {
      throw validation_error(detail::located(e.line, 1, "entry \"" + e.surface + "\": " + err.what()));
    }
  }
  return Lexicon(std::move(lattice), std::move(basic_names), std::move(entries));
}

inline std::string save_lexicon(const Lexicon& lex) {
  std::string out = "basic:";
  for (const auto& b : lex.basic_names()) out += " " + b;
  out += "\n";
  std::set<std::string> in_order;
  for (const auto& [sub, super] : lex.lattice().declared_order()) {
    out += "sorts: " + sub + " < " + super + "\n";
    in_order.insert(sub);
    in_order.insert(super);
  }
  for (const auto& s : lex.lattice().sorts())
    if (!in_order.count(s.name())) out += "sorts: " + s.name() + "\n";
  for (const auto& e : lex.entries())
    out += "entry \"" + e.surface + "\" " + to_string(e.sign.category) + " :: " +
           to_string(e.sign.semantics) + " :: " + to_string(e.sign.qualia) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Lookup

struct Segment {
  std::size_t begin = 0;  // token span [begin, end)
  std::size_t end = 0;
  std::vector<std::size_t> entries;  // indices into Lexicon::entries()
  std::vector<Sign> signs;           // parallel to `entries`, fresh metavariables
};

using Segmentation = std::vector<Segment>;

/// Every way of covering `tokens` with lexicon keys. Longer keys are tried
/// first at each position, so the greedy longest-match segmentation comes
/// first.
inline std::vector<Segmentation> lookup(const Lexicon& lex, const std::vector<std::string>& tokens,
                                        MetaVarSupply& supply) {
  if (tokens.empty()) throw lookup_error("empty token sequence");
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (!lex.knows_token(tokens[i]))
      throw lookup_error("unknown token '" + tokens[i] + "' at position " + std::to_string(i));

  const std::size_t n = tokens.size();
  // reachable[i]: tokens[i..n) can be segmented.
  std::vector<bool> reachable(n + 1, false);
  reachable[n] = true;
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t len = 1; len <= lex.max_key_length() && i + len <= n; ++len)
      if (reachable[i + len] &&
          lex.find(std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + len))) {
        reachable[i] = true;
        break;
      }
  if (!reachable[0]) {
    std::size_t stuck = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!reachable[i]) {
        stuck = i;
        break;
      }
    throw lookup_error("no lexicon entry covers the tokens starting with '" + tokens[stuck] +
                       "' at position " + std::to_string(stuck));
  }

  std::vector<Segmentation> out;
  Segmentation current;
  auto walk = [&](auto&& self, std::size_t pos) -> void {
    if (pos == n) {
      out.push_back(current);
      return;
    }
    std::size_t longest = std::min(lex.max_key_length(), n - pos);
    for (std::size_t len = longest; len >= 1; --len) {
      if (!reachable[pos + len]) continue;
      const auto* hits =
          lex.find(std::vector<std::string>(tokens.begin() + pos, tokens.begin() + pos + len));
      if (!hits) continue;
      Segment seg{pos, pos + len, *hits, {}};
      for (std::size_t idx : *hits) seg.signs.push_back(freshen(lex.entries()[idx].sign, supply));
      current.push_back(std::move(seg));
      self(self, pos + len);
      current.pop_back();
    }
  };
  walk(walk, 0);
  return out;
}

}  // namespace qcg
