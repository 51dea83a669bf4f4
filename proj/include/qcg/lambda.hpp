#pragma once

// Untyped lambda terms with dedicated conjunction and existential nodes,
// capture-avoiding substitution, beta/eta normalization and a small surface
// syntax:
//
//   \x y. body          abstraction (also λ)
//   exists x. body      existential (also ∃)
//   a & b               conjunction (also ∧), right associative
//   f a b  /  f(a, b)   application
//
// Identifiers bound by an enclosing binder parse as variables; every other
// identifier is a constant.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcg/error.hpp"

namespace qcg {

class Term {
 public:
  enum class Kind { var, constant, app, abs, conj, exists };

  Term() = default;

  static Term var(std::string name) { return make(Kind::var, std::move(name), {}, {}); }
  static Term constant(std::string name) {
    return make(Kind::constant, std::move(name), {}, {});
  }
  static Term app(Term f, Term a) { return make(Kind::app, {}, std::move(f), std::move(a)); }
  static Term abs(std::string binder, Term body) {
    return make(Kind::abs, std::move(binder), std::move(body), {});
  }
  static Term conj(Term l, Term r) { return make(Kind::conj, {}, std::move(l), std::move(r)); }
  static Term exists(std::string binder, Term body) {
    return make(Kind::exists, std::move(binder), std::move(body), {});
  }

  bool empty() const { return node_ == nullptr; }
  Kind kind() const;
  // Variable or constant name, or the binder of abs/exists.
  const std::string& name() const;
  const Term& function() const;
  const Term& argument() const;
  const Term& body() const;
  const Term& left() const;
  const Term& right() const;

  bool is(Kind k) const { return !empty() && kind() == k; }
  bool is_binder() const { return is(Kind::abs) || is(Kind::exists); }
  bool is_atom() const { return is(Kind::var) || is(Kind::constant); }

  // Pointer identity; used to skip rebuilding unchanged subtrees.
  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  static Term make(Kind k, std::string name, Term a, Term b);
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind;
  std::string name;
  Term first;
  Term second;
};

inline Term Term::make(Kind k, std::string name, Term a, Term b) {
  Term t;
  t.node_ = std::make_shared<const Node>(Node{k, std::move(name), std::move(a), std::move(b)});
  return t;
}

inline Term::Kind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::function() const { return node_->first; }
inline const Term& Term::argument() const { return node_->second; }
inline const Term& Term::body() const { return node_->first; }
inline const Term& Term::left() const { return node_->first; }
inline const Term& Term::right() const { return node_->second; }

/// Builds App(f, a). No reduction happens here.
inline Term apply(Term f, Term a) { return Term::app(std::move(f), std::move(a)); }

inline std::size_t term_size(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::constant:
      return 1;
    case Term::Kind::abs:
    case Term::Kind::exists:
      return 1 + term_size(t.body());
    case Term::Kind::app:
    case Term::Kind::conj:
      return 1 + term_size(t.left()) + term_size(t.right());
  }
  return 0;
}

namespace detail {

inline void collect_free(const Term& t, std::vector<std::string>& bound,
                         std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end())
        out.insert(t.name());
      return;
    case Term::Kind::constant:
      return;
    case Term::Kind::abs:
    case Term::Kind::exists:
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
      return;
    case Term::Kind::app:
    case Term::Kind::conj:
      collect_free(t.left(), bound, out);
      collect_free(t.right(), bound, out);
      return;
  }
}

inline void collect_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::constant:
      out.insert(t.name());
      return;
    case Term::Kind::abs:
    case Term::Kind::exists:
      out.insert(t.name());
      collect_names(t.body(), out);
      return;
    case Term::Kind::app:
    case Term::Kind::conj:
      collect_names(t.left(), out);
      collect_names(t.right(), out);
      return;
  }
}

inline Term rebuild_binder(const Term& t, std::string binder, Term body) {
  if (binder == t.name() && body.same_node(t.body())) return t;
  return t.is(Term::Kind::abs) ? Term::abs(std::move(binder), std::move(body))
                               : Term::exists(std::move(binder), std::move(body));
}

inline Term rebuild_pair(const Term& t, Term l, Term r) {
  if (l.same_node(t.left()) && r.same_node(t.right())) return t;
  return t.is(Term::Kind::app) ? Term::app(std::move(l), std::move(r))
                               : Term::conj(std::move(l), std::move(r));
}

}  // namespace detail

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::collect_free(t, bound, out);
  return out;
}

inline bool is_free_in(const std::string& name, const Term& t) {
  return free_vars(t).count(name) != 0;
}

/// Returns `base~N` for the smallest N >= 1 not in `avoid`. The `~` cannot
/// occur in parsed identifiers, so generated names never collide with
/// lexicon text.
inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string root = base.substr(0, base.find('~'));
  for (std::size_t n = 1;; ++n) {
    std::string candidate = root + "~" + std::to_string(n);
    if (!avoid.count(candidate)) return candidate;
  }
}

/// Capture-avoiding t[name := value].
inline Term substitute(const Term& t, const std::string& name, const Term& value,
                       const std::set<std::string>& value_free) {
  switch (t.kind()) {
    case Term::Kind::var:
      return t.name() == name ? value : t;
    case Term::Kind::constant:
      return t;
    case Term::Kind::app:
    case Term::Kind::conj:
      return detail::rebuild_pair(t, substitute(t.left(), name, value, value_free),
                                  substitute(t.right(), name, value, value_free));
    case Term::Kind::abs:
    case Term::Kind::exists: {
      if (t.name() == name) return t;
      std::set<std::string> body_free = free_vars(t.body());
      if (!body_free.count(name)) return t;
      if (!value_free.count(t.name()))
        return detail::rebuild_binder(t, t.name(),
                                      substitute(t.body(), name, value, value_free));
      std::set<std::string> avoid = value_free;
      avoid.insert(body_free.begin(), body_free.end());
      avoid.insert(name);
      std::string renamed = fresh_name(t.name(), avoid);
      Term body = substitute(t.body(), t.name(), Term::var(renamed), {renamed});
      return detail::rebuild_binder(t, renamed, substitute(body, name, value, value_free));
    }
  }
  return t;
}

inline Term substitute(const Term& t, const std::string& name, const Term& value) {
  return substitute(t, name, value, free_vars(value));
}

struct NormalizeOptions {
  std::size_t step_budget = 10000;
  bool eta = true;
};

namespace detail {

// Leftmost-outermost beta reduction with a step counter.
class Normalizer {
 public:
  explicit Normalizer(std::size_t budget) : budget_(budget) {}

  std::size_t steps() const { return steps_; }

  Term whnf(const Term& t) {
    if (!t.is(Term::Kind::app)) return t;
    Term head = whnf(t.function());
    if (head.is(Term::Kind::abs)) {
      tick();
      return whnf(substitute(head.body(), head.name(), t.argument()));
    }
    return head.same_node(t.function()) ? t : Term::app(head, t.argument());
  }

  Term nf(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::var:
      case Term::Kind::constant:
        return t;
      case Term::Kind::abs:
      case Term::Kind::exists:
        return rebuild_binder(t, t.name(), nf(t.body()));
      case Term::Kind::conj:
        return rebuild_pair(t, nf(t.left()), nf(t.right()));
      case Term::Kind::app: {
        Term h = whnf(t);
        if (!h.is(Term::Kind::app)) return nf(h);
        return rebuild_pair(h, nf(h.function()), nf(h.argument()));
      }
    }
    return t;
  }

 private:
  void tick() {
    if (++steps_ > budget_)
      throw normalization_error("normalization exceeded " + std::to_string(budget_) +
                                " beta steps");
  }

  std::size_t budget_;
  std::size_t steps_ = 0;
};

}  // namespace detail

/// Eta-reduces every `\x. M x` with x not free in M, bottom-up.
inline Term eta_reduce(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::constant:
      return t;
    case Term::Kind::exists:
      return detail::rebuild_binder(t, t.name(), eta_reduce(t.body()));
    case Term::Kind::abs: {
      Term body = eta_reduce(t.body());
      if (body.is(Term::Kind::app) && body.argument().is(Term::Kind::var) &&
          body.argument().name() == t.name() && !is_free_in(t.name(), body.function()))
        return body.function();
      return detail::rebuild_binder(t, t.name(), std::move(body));
    }
    case Term::Kind::app:
    case Term::Kind::conj:
      return detail::rebuild_pair(t, eta_reduce(t.left()), eta_reduce(t.right()));
  }
  return t;
}

/// Beta-normal, eta-reduced form. Throws normalization_error when the beta
/// phase exceeds `options.step_budget` steps.
inline Term normalize(const Term& t, const NormalizeOptions& options = {}) {
  detail::Normalizer n(options.step_budget);
  Term out = n.nf(t);
  return options.eta ? eta_reduce(out) : out;
}

namespace detail {

inline bool alpha_equal(const Term& s, const Term& t, std::vector<std::string>& sb,
                        std::vector<std::string>& tb) {
  if (s.kind() != t.kind()) return false;
  switch (s.kind()) {
    case Term::Kind::constant:
      return s.name() == t.name();
    case Term::Kind::var: {
      auto si = std::find(sb.rbegin(), sb.rend(), s.name());
      auto ti = std::find(tb.rbegin(), tb.rend(), t.name());
      bool s_bound = si != sb.rend();
      bool t_bound = ti != tb.rend();
      if (s_bound != t_bound) return false;
      if (!s_bound) return s.name() == t.name();
      return (si - sb.rbegin()) == (ti - tb.rbegin());
    }
    case Term::Kind::abs:
    case Term::Kind::exists: {
      sb.push_back(s.name());
      tb.push_back(t.name());
      bool eq = alpha_equal(s.body(), t.body(), sb, tb);
      sb.pop_back();
      tb.pop_back();
      return eq;
    }
    case Term::Kind::app:
    case Term::Kind::conj:
      return alpha_equal(s.left(), t.left(), sb, tb) &&
             alpha_equal(s.right(), t.right(), sb, tb);
  }
  return false;
}

}  // namespace detail

inline bool alpha_equal(const Term& s, const Term& t) {
  std::vector<std::string> sb, tb;
  return detail::alpha_equal(s, t, sb, tb);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

class Printer {
 public:
  explicit Printer(const Term& t) {
    std::set<std::string> free = free_vars(t);
    avoid_ = free;
    collect_constants(t, avoid_);
  }

  std::string print(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::var: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->first == t.name()) return it->second;
        return t.name();
      }
      case Term::Kind::constant:
        return t.name();
      case Term::Kind::abs:
      case Term::Kind::exists: {
        std::string canon = next_name();
        scope_.emplace_back(t.name(), canon);
        std::string body = print(t.body());
        scope_.pop_back();
        return (t.is(Term::Kind::abs) ? "\\" : "exists ") + canon + ". " + body;
      }
      case Term::Kind::conj: {
        const Term& l = t.left();
        std::string ls = print(l);
        if (l.is_binder() || l.is(Term::Kind::conj)) ls = "(" + ls + ")";
        return ls + " & " + print(t.right());
      }
      case Term::Kind::app: {
        std::vector<const Term*> args;
        const Term* head = &t;
        while (head->is(Term::Kind::app)) {
          args.push_back(&head->argument());
          head = &head->function();
        }
        std::string out = print(*head);
        if (!head->is_atom()) out = "(" + out + ")";
        out += "(";
        for (auto it = args.rbegin(); it != args.rend(); ++it) {
          if (it != args.rbegin()) out += ", ";
          out += print(**it);
        }
        return out + ")";
      }
    }
    return {};
  }

 private:
  static void collect_constants(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
      case Term::Kind::constant:
        out.insert(t.name());
        return;
      case Term::Kind::var:
        return;
      case Term::Kind::abs:
      case Term::Kind::exists:
        collect_constants(t.body(), out);
        return;
      case Term::Kind::app:
      case Term::Kind::conj:
        collect_constants(t.left(), out);
        collect_constants(t.right(), out);
        return;
    }
  }

  // x, y, z, x1, y1, z1, x2, ...
  std::string next_name() {
    static constexpr const char* letters[] = {"x", "y", "z"};
    for (;;) {
      std::size_t round = counter_ / 3;
      std::string name = letters[counter_ % 3];
      if (round > 0) name += std::to_string(round);
      ++counter_;
      if (!avoid_.count(name)) return name;
    }
  }

  std::set<std::string> avoid_;
  std::vector<std::pair<std::string, std::string>> scope_;
  std::size_t counter_ = 0;
};

}  // namespace detail

/// Surface syntax with bound variables renamed to x, y, z, x1, ... in
/// order of appearance.
inline std::string to_string(const Term& t) {
  detail::Printer p(t);
  return p.print(t);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Term parse() {
    Term t = term();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  enum class Tok { end, ident, lambda, exists, dot, lparen, rparen, comma, amp, other };

  [[noreturn]] void fail(const std::string& msg) const {
    throw syntax_error("term: " + msg, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  // Classifies the next token without consuming it; `len` receives its length.
  Tok peek(std::size_t* len = nullptr) {
    skip_space();
    std::size_t n = 1;
    Tok t = Tok::other;
    if (pos_ >= text_.size()) {
      t = Tok::end;
      n = 0;
    } else if (starts_with("\xCE\xBB")) {
      t = Tok::lambda;
      n = 2;
    } else if (starts_with("\xE2\x88\x83")) {
      t = Tok::exists;
      n = 3;
    } else if (starts_with("\xE2\x88\xA7")) {
      t = Tok::amp;
      n = 3;
    } else {
      char c = text_[pos_];
      if (c == '\\') t = Tok::lambda;
      else if (c == '.') t = Tok::dot;
      else if (c == '(') t = Tok::lparen;
      else if (c == ')') t = Tok::rparen;
      else if (c == ',') t = Tok::comma;
      else if (c == '&') t = Tok::amp;
      else if (ident_start(c)) {
        n = 0;
        while (pos_ + n < text_.size() && ident_char(text_[pos_ + n])) ++n;
        t = text_.substr(pos_, n) == "exists" ? Tok::exists : Tok::ident;
      }
    }
    if (len) *len = n;
    return t;
  }

  void expect(Tok want, const char* what) {
    std::size_t n;
    if (peek(&n) != want) fail(std::string("expected ") + what);
    pos_ += n;
  }

  std::string ident() {
    std::size_t n;
    if (peek(&n) != Tok::ident) fail("expected identifier");
    std::string s(text_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  Term term() {
    Tok t = peek();
    if (t == Tok::lambda || t == Tok::exists) return binder();
    Term left = application();
    std::size_t n;
    if (peek(&n) == Tok::amp) {
      pos_ += n;
      return Term::conj(std::move(left), term());
    }
    return left;
  }

  Term binder() {
    std::size_t n;
    bool is_lambda = peek(&n) == Tok::lambda;
    pos_ += n;
    std::vector<std::string> names;
    names.push_back(ident());
    while (peek() == Tok::ident) names.push_back(ident());
    expect(Tok::dot, "'.' after binder");
    for (const auto& name : names) scope_.push_back(name);
    Term body = term();
    for (std::size_t i = 0; i < names.size(); ++i) scope_.pop_back();
    for (auto it = names.rbegin(); it != names.rend(); ++it)
      body = is_lambda ? Term::abs(*it, std::move(body)) : Term::exists(*it, std::move(body));
    return body;
  }

  Term atom_from(std::string name) {
    if (std::find(scope_.begin(), scope_.end(), name) != scope_.end())
      return Term::var(std::move(name));
    return Term::constant(std::move(name));
  }

  std::vector<Term> group() {
    expect(Tok::lparen, "'('");
    std::vector<Term> items;
    items.push_back(term());
    std::size_t n;
    while (peek(&n) == Tok::comma) {
      pos_ += n;
      items.push_back(term());
    }
    expect(Tok::rparen, "')'");
    return items;
  }

  Term application() {
    Term head;
    Tok t = peek();
    if (t == Tok::ident) {
      head = atom_from(ident());
    } else if (t == Tok::lparen) {
      std::size_t at = pos_;
      auto items = group();
      if (items.size() != 1) {
        pos_ = at;
        fail("argument list without a function");
      }
      head = std::move(items.front());
    } else {
      fail("expected a term");
    }
    for (;;) {
      t = peek();
      if (t == Tok::ident) {
        head = Term::app(std::move(head), atom_from(ident()));
      } else if (t == Tok::lparen) {
        for (auto& a : group()) head = Term::app(std::move(head), std::move(a));
      } else {
        return head;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace detail

inline Term parse_term(std::string_view text) { return detail::TermParser(text).parse(); }

}  // namespace qcg
