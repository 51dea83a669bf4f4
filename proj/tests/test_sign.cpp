#include "qcg/sign.hpp"

#include <gtest/gtest.h>

#include <string>

#include "oracles/closure.hpp"
#include "oracles/shape.hpp"
#include "support/data.hpp"
#include "support/generators.hpp"

namespace qcg::testing {
namespace {

std::string error_of(std::string_view lexicon_text) {
  try {
    load_lexicon(lexicon_text);
  } catch (const error& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

TEST(QsCombineTest, SelectsTheEventReadings) {
  SortLattice l({"artifact", "read", "write", "event"}, {{"read", "event"}, {"write", "event"}});
  EXPECT_EQ(qs_combine(make_sort_set({"artifact", "read", "write"}), make_sort_set({"event"}), l),
            make_sort_set({"read", "write"}));
}

TEST(QsCombineTest, SelectsTheSpokespersonReading) {
  SortLattice l({"company", "spokesperson", "human"}, {{"spokesperson", "human"}});
  EXPECT_EQ(qs_combine(make_sort_set({"company", "spokesperson"}), make_sort_set({"human"}), l),
            make_sort_set({"spokesperson"}));
}

TEST(QsCombineTest, IdempotentOnSingleton) {
  SortLattice l({"s"}, {});
  EXPECT_EQ(qs_combine(make_sort_set({"s"}), make_sort_set({"s"}), l), make_sort_set({"s"}));
}

TEST(QsCombineTest, UnrelatedSortsGiveEmptySet) {
  oracle::Order order{{"address", "human", "spokesperson"}, {{"spokesperson", "human"}}};
  SortLattice l(order.sorts, order.pairs);
  SortSet got = qs_combine(make_sort_set({"address"}), make_sort_set({"human"}), l);
  EXPECT_TRUE(got.empty());
  EXPECT_TRUE(order.combine({"address"}, {"human"}).empty());
}

TEST(QsCombineTest, UnknownSortIsLookupError) {
  SortLattice l({"a"}, {});
  EXPECT_THROW(qs_combine(make_sort_set({"a"}), make_sort_set({"b"}), l), lookup_error);
}

TEST(QsCombineTest, PropertiesOnRandomLattices) {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto [order, lattice] = gen::random_lattice(rng, 15);
    for (int k = 0; k < 10; ++k) {
      auto a = gen::random_subset(rng, order.sorts);
      auto r = gen::random_subset(rng, order.sorts);
      SortSet got = qs_combine(gen::to_sort_set(a), gen::to_sort_set(r), lattice);
      EXPECT_EQ(gen::to_names(got), order.combine(a, r));
      EXPECT_EQ(got, qs_combine(gen::to_sort_set(r), gen::to_sort_set(a), lattice));
      for (const auto& s : got) {
        bool below_argument = false, below_restriction = false, unifies_with_argument = false;
        for (const auto& x : a) {
          below_argument |= order.leq(s.name(), x);
          unifies_with_argument |= order.unify(s.name(), x).has_value();
        }
        for (const auto& y : r) below_restriction |= order.leq(s.name(), y);
        EXPECT_TRUE(below_argument);
        EXPECT_TRUE(below_restriction);
        EXPECT_TRUE(unifies_with_argument);
      }
    }
  }
}

TEST(QualiaStructureTest, PrintsAndParses) {
  MetaVarSupply supply;
  QualiaStructure q = parse_qualia("[[?, {human}], {event, read}]", supply);
  EXPECT_EQ(to_string(q), "[[?, {human}], {event, read}]");
  EXPECT_TRUE(q.functor().functor().is(QualiaStructure::Kind::metavar));
  EXPECT_EQ(q.argument().sorts(), make_sort_set({"event", "read"}));
  EXPECT_EQ(to_string(parse_qualia("{}", supply)), "{}");
  EXPECT_THROW(parse_qualia("[{a}]", supply), syntax_error);
  EXPECT_THROW(parse_qualia("{a,}", supply), syntax_error);
  EXPECT_THROW(parse_qualia("x", supply), syntax_error);
}

TEST(QualiaStructureTest, MetavariablesCompareEqualRegardlessOfId) {
  EXPECT_EQ(QualiaStructure::metavar(1), QualiaStructure::metavar(2));
  EXPECT_FALSE(QualiaStructure::metavar(1) == QualiaStructure::leaf(make_sort_set({"a"})));
}

TEST(QualiaStructureTest, FreshenKeepsSharingAndLeaves) {
  QualiaStructure q = QualiaStructure::pair(
      QualiaStructure::pair(QualiaStructure::metavar(4), QualiaStructure::metavar(4)),
      QualiaStructure::leaf(make_sort_set({"a"})));
  MetaVarSupply supply(100);
  QualiaStructure f = freshen(q, supply);
  EXPECT_EQ(f.functor().functor().id(), f.functor().argument().id());
  EXPECT_GE(f.functor().functor().id(), 100u);
  EXPECT_EQ(f.argument(), q.argument());
}

TEST(QualiaStructureTest, BindReplacesOnlyTheGivenId) {
  QualiaStructure q = QualiaStructure::pair(QualiaStructure::metavar(1), QualiaStructure::metavar(2));
  QualiaStructure b = bind_metavar(q, 2, QualiaStructure::leaf(make_sort_set({"a"})));
  EXPECT_TRUE(b.functor().is(QualiaStructure::Kind::metavar));
  EXPECT_EQ(b.argument().sorts(), make_sort_set({"a"}));
}

TEST(QualiaStructureTest, HeadFollowsApplicationCount) {
  MetaVarSupply supply;
  QualiaStructure q = parse_qualia("[[{s}, {h}], {e}]", supply);
  EXPECT_EQ(to_string(head_qualia(q, 0)), "[[{s}, {h}], {e}]");
  EXPECT_EQ(to_string(head_qualia(q, 1)), "[{s}, {h}]");
  EXPECT_EQ(to_string(head_qualia(q, 2)), "{s}");
  EXPECT_THROW(head_qualia(q, 3), validation_error);
  EXPECT_EQ(to_string(replace_head(q, 1, QualiaStructure::leaf({}))), "[{}, {e}]");
}

TEST(MirrorsTest, AgreesWithShapeOracle) {
  MetaVarSupply supply;
  std::vector<std::string> qualia{"{a}", "?", "[{a}, {b}]", "[?, {a}]", "[[?, {a}], {b}]",
                                  "[{a}, [?, {b}]]", "[[{a}, {b}], [{c}, ?]]"};
  auto cats = gen::categories_up_to_depth({"N", "NP", "S"}, 2);
  for (const auto& text : qualia) {
    QualiaStructure q = parse_qualia(text, supply);
    for (const auto& c : cats) EXPECT_EQ(mirrors(q, c), oracle::shape_matches(q, c)) << text;
  }
}

TEST(TokenizeTest, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(tokenize("Downing Street denied all knowledge today."),
            (std::vector<std::string>{"downing", "street", "denied", "all", "knowledge", "today"}));
  EXPECT_EQ(tokenize("  BMW,  announced!  "), (std::vector<std::string>{"bmw", "announced"}));
  EXPECT_TRUE(tokenize(" . , ").empty());
}

TEST(LoadLexiconTest, ShippedLexicon) {
  Lexicon lex = support::paper_lexicon();
  for (const char* key : {"begin", "a novel", "bmw", "announced", "a speaker", "explained",
                          "an example", "downing street", "denied", "all knowledge", "today"})
    EXPECT_NE(lex.find(tokenize(key)), nullptr) << key;
  const auto& lat = lex.lattice();
  EXPECT_TRUE(lat.leq(Sort("read"), Sort("event")));
  EXPECT_TRUE(lat.leq(Sort("write"), Sort("event")));
  EXPECT_TRUE(lat.leq(Sort("spokesperson"), Sort("human")));
  EXPECT_FALSE(lat.leq(Sort("address"), Sort("human")));
  EXPECT_FALSE(lat.leq(Sort("human"), Sort("address")));

  const auto& explained = lex.entries()[lex.find({"explained"})->front()];
  EXPECT_EQ(to_string(explained.sign.category), "(NP{case=nom}\\S)/NP{case=acc}");
  EXPECT_EQ(to_string(explained.sign.qualia), "[[?, {human}], {information}]");

  const auto& novel = lex.entries()[lex.find({"a", "novel"})->front()];
  EXPECT_EQ(to_string(novel.sign.category), "S/(NP\\S)");
  EXPECT_EQ(to_string(novel.sign.qualia), "[?, [?, {artifact, read, write}]]");
  EXPECT_TRUE(alpha_equal(novel.sign.semantics, parse_term("\\P. exists z. novel(z) & P(z)")));

  const auto& bmw = lex.entries()[lex.find({"bmw"})->front()];
  EXPECT_EQ(to_string(bmw.sign.qualia), "{company, establish, produce, spokesperson}");
}

TEST(LoadLexiconTest, EmptyEntriesSection) {
  Lexicon lex = load_lexicon("sorts: a < b\n# nothing else\n");
  EXPECT_TRUE(lex.entries().empty());
  EXPECT_EQ(lex.lattice().sorts().size(), 2u);
  EXPECT_EQ(lex.basic_names(), (std::set<std::string>{"N", "NP", "S"}));
  EXPECT_TRUE(load_lexicon("").entries().empty());
}

TEST(LoadLexiconTest, ShapeMismatchIsValidationError) {
  std::string text = "sorts: human\nentry \"saw\" (NP\\S)/NP :: \\y x. see(x, y) :: {human}\n";
  EXPECT_THROW(load_lexicon(text), validation_error);
  std::string msg = error_of(text);
  EXPECT_TRUE(contains(msg, "qualia shape mismatch")) << msg;
  EXPECT_TRUE(contains(msg, "line 2")) << msg;
  EXPECT_TRUE(contains(msg, "saw")) << msg;
}

TEST(LoadLexiconTest, ShapeMismatchCasesMatchOracle) {
  MetaVarSupply supply;
  for (const char* cat : {"NP", "NP\\S", "(NP\\S)/NP", "S/(NP\\S)"})
    for (const char* qs : {"{h}", "?", "[{h}, {h}]", "[?, [?, {h}]]", "[[?, {h}], {h}]"}) {
      std::string text = std::string("sorts: h\nentry \"w\" ") + cat + " :: c :: " + qs + "\n";
      bool ok = oracle::shape_matches(parse_qualia(qs, supply), parse_category(cat));
      EXPECT_EQ(error_of(text).empty(), ok) << cat << " / " << qs;
    }
}

TEST(LoadLexiconTest, ValidationErrors) {
  EXPECT_TRUE(contains(error_of("entry \"x\" NP :: c :: {ghost}\n"), "unknown sort 'ghost'"));
  EXPECT_TRUE(contains(error_of("entry \"x\" VP :: c :: ?\n"), "undeclared basic category 'VP'"));
  EXPECT_TRUE(contains(error_of("basic: S\nentry \"x\" NP :: c :: ?\n"), "'NP'"));
  EXPECT_TRUE(contains(error_of("sorts: a < b\nsorts: b < a\n"), "cyclic"));
  EXPECT_TRUE(contains(error_of("frobnicate\n"), "line 1"));
  EXPECT_TRUE(contains(error_of("entry \"x\" NP :: c\n"), "CATEGORY :: TERM :: QUALIA"));
  EXPECT_TRUE(contains(error_of("entry x NP :: c :: ?\n"), "quoted"));
}

TEST(LoadLexiconTest, SyntaxErrorsCarryLineAndColumn) {
  std::string msg = error_of("basic: N NP S\n\nentry \"x\" NP/ :: c :: ?\n");
  EXPECT_TRUE(contains(msg, "line 3, column")) << msg;
  msg = error_of("entry \"x\" NP :: (f :: ?\n");
  EXPECT_TRUE(contains(msg, "line 1, column")) << msg;
  msg = error_of("entry \"x\" NP :: c :: {a\n");
  EXPECT_TRUE(contains(msg, "qualia")) << msg;
}

TEST(LoadLexiconTest, CommentInsideQuotesIsKept) {
  Lexicon lex = load_lexicon("entry \"c#\" NP :: c :: ? # trailing comment\n");
  ASSERT_EQ(lex.entries().size(), 1u);
  EXPECT_EQ(lex.entries()[0].surface, "c#");
}

TEST(SaveLexiconTest, RoundTripPreservesValidatedStructure) {
  Lexicon a = support::paper_lexicon();
  Lexicon b = load_lexicon(save_lexicon(a));
  EXPECT_EQ(a.basic_names(), b.basic_names());
  EXPECT_EQ(a.lattice().sorts(), b.lattice().sorts());
  for (const auto& x : a.lattice().sorts())
    for (const auto& y : a.lattice().sorts())
      EXPECT_EQ(a.lattice().leq(x, y), b.lattice().leq(x, y));
  ASSERT_EQ(a.entries().size(), b.entries().size());
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    const auto& ea = a.entries()[i];
    const auto& eb = b.entries()[i];
    EXPECT_EQ(ea.tokens, eb.tokens);
    EXPECT_EQ(ea.sign.category, eb.sign.category);
    EXPECT_TRUE(alpha_equal(ea.sign.semantics, eb.sign.semantics)) << ea.surface;
    EXPECT_EQ(ea.sign.qualia, eb.sign.qualia);
  }
  EXPECT_EQ(save_lexicon(a), save_lexicon(b));
}

TEST(LookupTest, MultiwordKey) {
  Lexicon lex = support::paper_lexicon();
  MetaVarSupply supply;
  auto segs = lookup(lex, {"a", "novel"}, supply);
  ASSERT_EQ(segs.size(), 1u);
  ASSERT_EQ(segs[0].size(), 1u);
  EXPECT_EQ(segs[0][0].begin, 0u);
  EXPECT_EQ(segs[0][0].end, 2u);
  EXPECT_EQ(lex.entries()[segs[0][0].entries[0]].surface, "a novel");
  EXPECT_EQ(to_string(segs[0][0].signs[0].category), "S/(NP\\S)");
}

TEST(LookupTest, SingleToken) {
  Lexicon lex = support::paper_lexicon();
  MetaVarSupply supply;
  auto segs = lookup(lex, {"bmw"}, supply);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(lex.entries()[segs[0][0].entries[0]].surface, "BMW");
  EXPECT_EQ(to_string(segs[0][0].signs[0].category), "NP");
}

TEST(LookupTest, UnknownTokenNamesTokenAndPosition) {
  Lexicon lex = support::paper_lexicon();
  MetaVarSupply supply;
  try {
    lookup(lex, {"john", "flurble"}, supply);
    FAIL() << "expected lookup_error";
  } catch (const lookup_error& e) {
    EXPECT_TRUE(contains(e.what(), "flurble"));
    EXPECT_TRUE(contains(e.what(), "position 1"));
  }
  EXPECT_THROW(lookup(lex, {"novel"}, supply), lookup_error);
}

TEST(LookupTest, EnumeratesAllSegmentationsLongestFirst) {
  Lexicon lex = load_lexicon(
      "entry \"new\" N/N :: \\x. new(x) :: ?\n"
      "entry \"york\" N :: york :: ?\n"
      "entry \"new york\" N :: new_york :: ?\n");
  MetaVarSupply supply;
  auto segs = lookup(lex, {"new", "york"}, supply);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].size(), 1u);
  EXPECT_EQ(segs[1].size(), 2u);
}

TEST(LookupTest, SignsGetFreshMetavariables) {
  Lexicon lex = support::paper_lexicon();
  MetaVarSupply supply;
  auto segs = lookup(lex, {"today", "today"}, supply);
  const auto& a = segs[0][0].signs[0].qualia;
  const auto& b = segs[0][1].signs[0].qualia;
  EXPECT_NE(a.functor().id(), b.functor().id());
}

}  // namespace
}  // namespace qcg::testing
