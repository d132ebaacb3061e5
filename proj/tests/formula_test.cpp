#include <gtest/gtest.h>

#include "fmerge/formula.hpp"
#include "fmerge/generators.hpp"
#include "fmerge/semantics.hpp"
#include "fmerge/syntax.hpp"

using namespace fmerge;

namespace {
Formula a(const char* n) { return Formula::atom(n); }
}  // namespace

TEST(Parse, Constants) {
    EXPECT_EQ(parse("true"), Formula::constant(true));
    EXPECT_EQ(parse("false"), Formula::constant(false));
}

TEST(Parse, FlatConjunction) {
    Formula f = parse("S & T & P");
    ASSERT_EQ(f.kind(), Kind::conjunction);
    ASSERT_EQ(f.children().size(), 3u);
    EXPECT_EQ(f, Formula::conjunction({a("S"), a("T"), a("P")}));
}

TEST(Parse, PoolConstraint) {
    Formula f = parse("((S&T)|(S&P)|(T&P)) -> I");
    ASSERT_EQ(f.kind(), Kind::implication);
    EXPECT_EQ(f.children()[0].kind(), Kind::disjunction);
    EXPECT_EQ(f.children()[0].children().size(), 3u);
    EXPECT_EQ(f.children()[1], a("I"));
}

TEST(Parse, Precedence) {
    EXPECT_EQ(parse("!p & q | r"), ((!a("p")) & a("q")) | a("r"));
    EXPECT_EQ(parse("p | q -> r"), Formula::implication(a("p") | a("q"), a("r")));
    EXPECT_EQ(parse("p -> q <-> r"),
              Formula::equivalence(Formula::implication(a("p"), a("q")), a("r")));
}

TEST(Parse, Associativity) {
    EXPECT_EQ(parse("p -> q -> r"),
              Formula::implication(a("p"), Formula::implication(a("q"), a("r"))));
    EXPECT_EQ(parse("p <-> q <-> r"),
              Formula::equivalence(Formula::equivalence(a("p"), a("q")), a("r")));
}

TEST(Parse, CommentsAndWhitespace) {
    EXPECT_EQ(parse("  p # trailing\n & q  "), a("p") & a("q"));
    EXPECT_EQ(parse("x_1 | _y2"), a("x_1") | a("_y2"));
}

TEST(Parse, ErrorsCarryPosition) {
    try {
        parse("p &\n  (q | )");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 8u);
        EXPECT_EQ(e.token(), ")");
    }
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("p q"), ParseError);
    EXPECT_THROW(parse("(p"), ParseError);
    EXPECT_THROW(parse("p $ q"), ParseError);
    EXPECT_THROW(parse("p -"), ParseError);
}

TEST(Print, Examples) {
    EXPECT_EQ(print(a("p") & a("q")), "p & q");
    EXPECT_EQ(print(!(a("p") & a("q"))), "!(p & q)");
    EXPECT_EQ(print(Formula::implication(a("p"), Formula::implication(a("q"), a("r")))),
              "p -> q -> r");
    EXPECT_EQ(print(Formula::implication(Formula::implication(a("p"), a("q")), a("r"))),
              "(p -> q) -> r");
    EXPECT_EQ(print(Formula::equivalence(a("p"), Formula::equivalence(a("q"), a("r")))),
              "p <-> (q <-> r)");
    EXPECT_EQ(print((a("p") | a("q")) & a("r")), "(p | q) & r");
    EXPECT_EQ(print(!!a("p")), "!!p");
}

TEST(Print, RoundTripOnRandomFormulas) {
    Rng rng(7);
    const Vocabulary v{"p", "q", "r", "s"};
    for (int i = 0; i < 2000; ++i) {
        Formula f = random_formula(rng, v, 5);
        ASSERT_EQ(parse(print(f)), f) << print(f);
    }
}

TEST(Construction, FlattensButDoesNotSimplify) {
    Formula f = Formula::conjunction({a("p") & a("q"), a("r")});
    EXPECT_EQ(f.children().size(), 3u);
    Formula g = Formula::constant(true) & a("q");
    EXPECT_EQ(g.kind(), Kind::conjunction);
    EXPECT_EQ(print(g), "true & q");
    EXPECT_THROW(Formula::atom("true"), std::invalid_argument);
    EXPECT_THROW(Formula::atom("9x"), std::invalid_argument);
}

TEST(Variables, Examples) {
    EXPECT_TRUE(variables(Formula::constant(true)).empty());
    EXPECT_EQ(variables(parse("S & T & P")), (Vocabulary{"P", "S", "T"}));
    EXPECT_EQ(variables(parse("p | !p")), Vocabulary{"p"});
}

TEST(Substitute, Examples) {
    const Formula pq = a("p") & a("q");
    EXPECT_EQ(substitute(pq, "p", false), Formula::constant(false) & a("q"));
    EXPECT_EQ(substitute(pq, "p", true), Formula::constant(true) & a("q"));
    EXPECT_EQ(substitute(a("q"), "p", true), a("q"));
}

TEST(Substitute, Properties) {
    Rng rng(11);
    const Vocabulary v{"p", "q", "r"};
    for (int i = 0; i < 500; ++i) {
        Formula f = random_formula(rng, v, 4);
        const std::string x = v[rng.below(v.size())];
        const bool b = rng.coin();
        Formula g = substitute(f, x, b);
        EXPECT_EQ(g.node_count(), f.node_count());
        EXPECT_FALSE(variables(g).contains(x));
        if (variables(f).contains(x)) {
            EXPECT_EQ(variables(g), subtract(variables(f), Vocabulary{x}));
        }
        // Semantically the substitution fixes x.
        Formula fixed = Formula::conjunction({f, b ? a(x.c_str()) : !a(x.c_str())});
        EXPECT_TRUE(equivalent(Formula::conjunction({g, b ? a(x.c_str()) : !a(x.c_str())}), fixed));
    }
}

TEST(FoldConstants, PreservesEquivalence) {
    Rng rng(3);
    const Vocabulary v{"p", "q", "r"};
    for (int i = 0; i < 1000; ++i) {
        Formula f = random_formula(rng, v, 5);
        Formula g = fold_constants(f);
        ASSERT_TRUE(equivalent(f, g)) << print(f) << "  vs  " << print(g);
        // Constants survive only as the whole formula.
        if (g.kind() != Kind::constant) {
            EXPECT_EQ(print(g).find("true"), std::string::npos);
        }
    }
    EXPECT_EQ(fold_constants(Formula::constant(true) & a("q")), a("q"));
    EXPECT_EQ(fold_constants(Formula::constant(false) | !Formula::constant(true)),
              Formula::constant(false));
}

TEST(VocabularyType, SortedUnique) {
    Vocabulary v({"b", "a", "b", "c"});
    EXPECT_EQ(v.names(), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(v.index_of("c"), 2u);
    EXPECT_FALSE(v.index_of("z"));
    EXPECT_EQ(unite(Vocabulary{"a"}, Vocabulary{"c", "b"}), v);
}
