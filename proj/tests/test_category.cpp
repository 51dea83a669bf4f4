#include "qcg/category.hpp"

#include <gtest/gtest.h>

#include "support/generators.hpp"

namespace qcg::testing {
namespace {

Category b(const char* n, Features f = {}) { return Category::basic(n, std::move(f)); }

TEST(ParseCategoryTest, TransitiveVerb) {
  Category c = parse_category("(NP\\S)/NP");
  EXPECT_EQ(c, Category::right_slash(Category::left_slash(b("NP"), b("S")), b("NP")));
  EXPECT_EQ(c.kind(), Category::Kind::right_slash);
  EXPECT_EQ(c.argument(), b("NP"));
  EXPECT_EQ(c.result().argument(), b("NP"));
  EXPECT_EQ(c.result().result(), b("S"));
}

TEST(ParseCategoryTest, Atom) {
  Category c = parse_category("S");
  EXPECT_TRUE(c.is_basic());
  EXPECT_EQ(c.name(), "S");
  EXPECT_TRUE(c.features().empty());
}

TEST(ParseCategoryTest, QuantifiedSubject) {
  EXPECT_EQ(parse_category("S/(NP\\S)"),
            Category::right_slash(b("S"), Category::left_slash(b("NP"), b("S"))));
}

TEST(ParseCategoryTest, Features) {
  Category c = parse_category("NP{num=sg, case=acc}");
  EXPECT_EQ(c, b("NP", {{"num", "sg"}, {"case", "acc"}}));
  EXPECT_EQ(to_string(c), "NP{case=acc,num=sg}");
  EXPECT_EQ(parse_category("NP{}"), b("NP"));
}

TEST(ParseCategoryTest, RedundantOuterParentheses) {
  EXPECT_EQ(parse_category("((NP\\S))"), parse_category("NP\\S"));
}

TEST(ParseCategoryTest, RejectsUnparenthesizedChains) {
  try {
    parse_category("NP\\S/NP");
    FAIL() << "expected syntax_error";
  } catch (const syntax_error& e) {
    EXPECT_NE(std::string(e.what()).find("ambiguous"), std::string::npos);
  }
}

TEST(ParseCategoryTest, MalformedInputReportsPosition) {
  struct Case {
    const char* text;
    std::size_t position;
  };
  for (Case c : {Case{"", 0}, Case{"(NP", 3}, Case{"NP)", 2}, Case{"NP/", 3},
                 Case{"NP{num}", 6}, Case{"NP{num=sg,num=pl}", 16}}) {
    try {
      parse_category(c.text);
      ADD_FAILURE() << "accepted '" << c.text << "'";
    } catch (const syntax_error& e) {
      EXPECT_EQ(e.position, c.position) << c.text << ": " << e.what();
    }
  }
}

TEST(PrintCategoryTest, OutermostIsBare) {
  EXPECT_EQ(to_string(Category::right_slash(Category::left_slash(b("NP"), b("S")), b("NP"))),
            "(NP\\S)/NP");
  EXPECT_EQ(to_string(Category::left_slash(b("NP"), b("S"))), "NP\\S");
}

TEST(PrintCategoryTest, RoundTripsEveryShallowCategory) {
  auto all = gen::categories_up_to_depth({"N", "NP", "S"}, 2);
  ASSERT_EQ(all.size(), 885u);
  for (const auto& c : all) ASSERT_EQ(parse_category(to_string(c)), c) << to_string(c);
}

TEST(PrintCategoryTest, RoundTripsArgumentEmbeddingChainsToDepthFive) {
  const std::vector<Category> basics{b("N"), b("NP"), b("S")};
  std::vector<Category> level = basics;
  std::size_t checked = 0;
  for (int depth = 1; depth <= 5; ++depth) {
    std::vector<Category> next;
    for (const auto& inner : level)
      for (const auto& atom : basics) {
        next.push_back(Category::right_slash(atom, inner));
        next.push_back(Category::right_slash(inner, atom));
        next.push_back(Category::left_slash(inner, atom));
        next.push_back(Category::left_slash(atom, inner));
      }
    for (const auto& c : next) {
      ASSERT_EQ(category_depth(c), static_cast<std::size_t>(depth));
      ASSERT_EQ(parse_category(to_string(c)), c) << to_string(c);
      ++checked;
    }
    level = std::move(next);
  }
  EXPECT_EQ(checked, 36u + 432u + 5184u + 62208u + 746496u);
}

TEST(MatchBasicTest, FeatureCompatibility) {
  EXPECT_TRUE(match_basic(b("NP"), b("NP")));
  EXPECT_FALSE(match_basic(b("NP"), b("S")));
  EXPECT_FALSE(match_basic(b("NP", {{"num", "sg"}}), b("NP", {{"num", "pl"}})));
  EXPECT_TRUE(match_basic(b("NP", {{"num", "sg"}}), b("NP")));
  EXPECT_TRUE(match_basic(b("NP"), b("NP", {{"num", "sg"}})));
  EXPECT_TRUE(match_basic(b("NP", {{"num", "sg"}}), b("NP", {{"case", "acc"}})));
  EXPECT_FALSE(match_basic(parse_category("NP\\S"), parse_category("NP\\S")));
}

TEST(MatchBasicTest, SymmetricOverSharedVocabulary) {
  std::vector<Features> fs{{}, {{"num", "sg"}}, {{"num", "pl"}}, {{"case", "nom"}},
                           {{"num", "sg"}, {"case", "nom"}}, {{"num", "pl"}, {"case", "acc"}}};
  for (const auto& f : fs)
    for (const auto& g : fs) {
      EXPECT_EQ(match_basic(b("NP", f), b("NP", g)), match_basic(b("NP", g), b("NP", f)));
      bool conflict = false;
      for (const auto& [k, val] : f)
        if (g.count(k) && g.at(k) != val) conflict = true;
      EXPECT_EQ(match_basic(b("NP", f), b("NP", g)), !conflict);
    }
}

TEST(CategoryMeasuresTest, CountsAndDepth) {
  Category c = parse_category("(NP\\S)/(S/(NP\\S))");
  EXPECT_EQ(connective_count(c), 4u);
  EXPECT_EQ(category_depth(c), 3u);
  std::map<std::string, int> counts;
  add_basic_counts(c, 1, counts);
  EXPECT_EQ(counts["S"], 1);
  EXPECT_EQ(counts["NP"], -2);
  std::set<std::string> names;
  collect_basic_names(c, names);
  EXPECT_EQ(names, (std::set<std::string>{"NP", "S"}));
}

}  // namespace
}  // namespace qcg::testing
