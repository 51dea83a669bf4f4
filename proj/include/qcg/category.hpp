#pragma once

// Syntactic categories: basic names with flat attribute=value features, and
// the two directional slashes. X/Y seeks a Y on its right, Y\X seeks a Y on
// its left. Surface syntax requires parentheses around every nested complex
// category, e.g. (NP\S)/NP or NP{num=sg,case=acc}.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "qcg/error.hpp"

namespace qcg {

using Features = std::map<std::string, std::string>;

class Category {
 public:
  enum class Kind { basic, right_slash, left_slash };

  Category() = default;

  static Category basic(std::string name, Features features = {}) {
    return make(Kind::basic, std::move(name), std::move(features), {}, {});
  }
  /// result/argument
  static Category right_slash(Category result, Category argument) {
    return make(Kind::right_slash, {}, {}, std::move(result), std::move(argument));
  }
  /// argument\result
  static Category left_slash(Category argument, Category result) {
    return make(Kind::left_slash, {}, {}, std::move(result), std::move(argument));
  }

  bool empty() const { return node_ == nullptr; }
  Kind kind() const;
  bool is_basic() const { return kind() == Kind::basic; }
  bool is_complex() const { return !is_basic(); }

  const std::string& name() const;
  const Features& features() const;
  const Category& result() const;
  const Category& argument() const;

  friend bool operator==(const Category& a, const Category& b) {
    if (a.node_ == b.node_) return true;
    if (a.empty() || b.empty()) return false;
    if (a.kind() != b.kind()) return false;
    if (a.is_basic()) return a.name() == b.name() && a.features() == b.features();
    return a.result() == b.result() && a.argument() == b.argument();
  }

 private:
  struct Node;
  static Category make(Kind k, std::string name, Features f, Category r, Category a);

  std::shared_ptr<const Node> node_;
};

struct Category::Node {
  Kind kind;
  std::string name;
  Features features;
  Category result;
  Category argument;
};

inline Category Category::make(Kind k, std::string name, Features f, Category r, Category a) {
  Category c;
  c.node_ = std::make_shared<const Node>(
      Node{k, std::move(name), std::move(f), std::move(r), std::move(a)});
  return c;
}

inline Category::Kind Category::kind() const { return node_->kind; }
inline const std::string& Category::name() const { return node_->name; }
inline const Features& Category::features() const { return node_->features; }
inline const Category& Category::result() const { return node_->result; }
inline const Category& Category::argument() const { return node_->argument; }

/// Number of slashes.
inline std::size_t connective_count(const Category& c) {
  if (c.is_basic()) return 0;
  return 1 + connective_count(c.result()) + connective_count(c.argument());
}

/// Nesting depth of slashes; basic categories have depth 0.
inline std::size_t category_depth(const Category& c) {
  if (c.is_basic()) return 0;
  return 1 + std::max(category_depth(c.result()), category_depth(c.argument()));
}

/// Adds the polarity-weighted occurrence count of every basic name in `c` to
/// `counts` (results count +sign, arguments -sign). A sequent is only
/// derivable if antecedent and succedent totals agree for every name.
inline void add_basic_counts(const Category& c, int sign, std::map<std::string, int>& counts) {
  if (c.is_basic()) {
    counts[c.name()] += sign;
    return;
  }
  add_basic_counts(c.result(), sign, counts);
  add_basic_counts(c.argument(), -sign, counts);
}

inline void collect_basic_names(const Category& c, std::set<std::string>& out) {
  if (c.is_basic()) {
    out.insert(c.name());
    return;
  }
  collect_basic_names(c.result(), out);
  collect_basic_names(c.argument(), out);
}

namespace detail {

inline std::string print_category(const Category& c, bool nested) {
  if (c.is_basic()) {
    std::string out = c.name();
    if (!c.features().empty()) {
      out += "{";
      bool first = true;
      for (const auto& [k, v] : c.features()) {
        if (!first) out += ",";
        first = false;
        out += k + "=" + v;
      }
      out += "}";
    }
    return out;
  }
  std::string body = c.kind() == Category::Kind::right_slash
                         ? print_category(c.result(), true) + "/" +
                               print_category(c.argument(), true)
                         : print_category(c.argument(), true) + "\\" +
                               print_category(c.result(), true);
  return nested ? "(" + body + ")" : body;
}

class CategoryParser {
 public:
  explicit CategoryParser(std::string_view text) : text_(text) {}

  Category parse() {
    Category c = category();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw syntax_error("category: " + msg, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string word(const char* what) {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  Category category() {
    Category left = primary();
    if (at('/') || at('\\')) {
      bool right = text_[pos_] == '/';
      ++pos_;
      Category arg_or_result = primary();
      if (at('/') || at('\\')) fail("ambiguous slash sequence; parenthesize nested categories");
      return right ? Category::right_slash(std::move(left), std::move(arg_or_result))
                   : Category::left_slash(std::move(left), std::move(arg_or_result));
    }
    return left;
  }

  Category primary() {
    if (at('(')) {
      ++pos_;
      Category inner = category();
      if (!at(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    std::string name = word("basic category name");
    Features features;
    if (at('{')) {
      ++pos_;
      if (!at('}')) {
        for (;;) {
          std::string key = word("feature name");
          if (!at('=')) fail("expected '=' in feature");
          ++pos_;
          std::string value = word("feature value");
          if (!features.emplace(key, value).second) fail("duplicate feature '" + key + "'");
          if (at(',')) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      if (!at('}')) fail("expected '}'");
      ++pos_;
    }
    return Category::basic(std::move(name), std::move(features));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string to_string(const Category& c) { return detail::print_category(c, false); }

inline Category parse_category(std::string_view text) {
  return detail::CategoryParser(text).parse();
}

/// Axiom-level match of two basic categories: same name, and no attribute
/// bound to different values on the two sides.
inline bool match_basic(const Category& required, const Category& given) {
  if (!required.is_basic() || !given.is_basic()) return false;
  if (required.name() != given.name()) return false;
  for (const auto& [k, v] : required.features()) {
    auto it = given.features().find(k);
    if (it != given.features().end() && it->second != v) return false;
  }
  return true;
}

}  // namespace qcg
