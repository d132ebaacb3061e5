#include <gtest/gtest.h>

#include <algorithm>

#include "fmerge/forgetting.hpp"
#include "fmerge/generators.hpp"
#include "fmerge/syntax.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace fmerge;

TEST(Forget, Examples) {
    const Formula pq = parse("p & q");
    EXPECT_EQ(forget(pq, Vocabulary{}), pq);
    EXPECT_TRUE(equivalent(forget(pq, Vocabulary{"p"}), parse("q")));
    EXPECT_EQ(forget(pq, Vocabulary{"z"}), pq);
    EXPECT_EQ(forget(parse("S & T & P"), Vocabulary{"S", "T", "P"}), Formula::constant(true));
    EXPECT_EQ(forget(parse("p & !p"), Vocabulary{"p"}), Formula::constant(false));
}

TEST(Forget, ResultVariablesShrink) {
    Rng rng(21);
    const Vocabulary v{"p", "q", "r", "s"};
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, v, 4);
        Vocabulary drop({v[rng.below(4)], v[rng.below(4)]});
        EXPECT_TRUE(subtract(variables(f), drop).includes(variables(forget(f, drop))));
    }
}

TEST(Forget, MatchesModelOracle) {
    Rng rng(23);
    const Vocabulary v{"p", "q", "r", "s"};
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, v, 4);
        std::vector<std::size_t> positions;
        std::vector<std::string> names;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (rng.chance(1, 3)) {
                positions.push_back(j);
                names.push_back(v[j]);
            }
        auto expected = oracle::forget(oracle::models(f, v.names()), positions, v.size());
        EXPECT_EQ(testing_util::to_oracle(models(forget(f, Vocabulary(names)), v)), expected)
            << print(f);
    }
}

TEST(SwitchModels, Examples) {
    const Vocabulary pq{"p", "q"};
    EXPECT_TRUE(switch_models(ModelSet(pq, {}), "p").empty());
    EXPECT_EQ(switch_models(ModelSet(pq, {0b11}), "p"), ModelSet(pq, {0b11, 0b01}));
    EXPECT_THROW(switch_models(ModelSet(pq, {}), "z"), UnknownVariable);
}

TEST(Dilate, Examples) {
    const Vocabulary pq{"p", "q"};
    EXPECT_TRUE(equivalent(dilate(parse("p & q"), 0, pq), parse("p & q")));
    EXPECT_TRUE(equivalent(dilate(parse("p & q"), 1, pq), parse("p | q")));
    EXPECT_EQ(models(dilate(parse("p & q"), 3, Vocabulary{"p", "q", "r"}), Vocabulary{"p", "q", "r"})
                  .size(),
              8u);
    EXPECT_THROW(dilate(parse("p & !p"), 1, Vocabulary{"p"}), InconsistentFormula);
}

TEST(DilateViaForgetting, Examples) {
    Formula d = dilate_via_forgetting(parse("p & q"), 1);
    EXPECT_TRUE(equivalent(d, parse("p | q")));
    EXPECT_EQ(dilate_via_forgetting(parse("p & (q | r)"), 3), Formula::constant(true));
    EXPECT_EQ(dilate_via_forgetting(parse("p & (q | r)"), 7), Formula::constant(true));
    EXPECT_THROW(dilate_via_forgetting(parse("p & !p"), 1), InconsistentFormula);
    EXPECT_THROW(dilate_via_forgetting(parse("p"), 0), std::invalid_argument);
}

TEST(ForgettingNegativeExample, ConjunctionDoesNotCommuteWithForgetting) {
    const Formula phi = parse("p & q");
    const Formula phi2 = parse("!p");
    const Vocabulary v{"p"};
    Formula lhs = Formula::conjunction({forget(phi, v), phi2});
    Formula rhs = Formula::conjunction({forget(phi, v), forget(phi2, v)});
    EXPECT_TRUE(equivalent(lhs, parse("q & !p")));
    EXPECT_TRUE(equivalent(rhs, parse("q")));
    EXPECT_FALSE(equivalent(lhs, rhs));
}

TEST(Forget, OrderIndependence) {
    Rng rng(29);
    const Vocabulary v{"p", "q", "r", "s"};
    for (int i = 0; i < 200; ++i) {
        Formula f = random_formula(rng, v, 4);
        std::vector<std::string> order = v.names();
        rng.shuffle(order);
        order.resize(rng.between(1, 4));
        std::vector<std::string> reversed(order.rbegin(), order.rend());
        EXPECT_TRUE(equivalent(forget_in_order(f, order), forget_in_order(f, reversed)));
    }
}
