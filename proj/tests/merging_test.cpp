#include <gtest/gtest.h>

#include "fmerge/fmerge.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace fmerge;

namespace {

const char* pool_text =
    "constraint: (S & T) | (S & P) | (T & P) -> I\n"
    "kb: S & T & P\n"
    "kb: S & T & P\n"
    "kb: !S & !T & !P & !I\n"
    "kb: T & P & !I\n";

Profile pool() { return parse_profile_file(pool_text).to_profile(); }

std::vector<std::string> names(const Profile& p) { return p.vocabulary().names(); }

oracle::Models oracle_merge(const Profile& p, oracle::Aggregate agg) {
    return oracle::merge({p.kbs().begin(), p.kbs().end()}, p.constraint(), names(p), agg);
}

}  // namespace

TEST(Merge, PoolSigma) {
    const Profile p = pool();
    for (auto op : {Operator::sigma, Operator::sigma_forget}) {
        const MergeResult r = merge(op, p);
        EXPECT_TRUE(equivalent(r.formula, parse("S & T & P & I"))) << to_string(op);
        EXPECT_EQ(r.k, 5u);
    }
}

TEST(Merge, PoolGMax) {
    const Profile p = pool();
    for (auto op : {Operator::gmax, Operator::gmax_forget}) {
        const MergeResult r = merge(op, p);
        EXPECT_TRUE(equivalent(r.formula, parse("!S & !I & ((!T & P) | (T & !P))")));
        EXPECT_EQ(r.tuple, (std::vector<std::size_t>{2, 2, 1, 1}));
    }
}

TEST(Merge, PoolMaxFollowsOracle) {
    const Profile p = pool();
    const auto expected = oracle_merge(p, oracle::Aggregate::max);
    for (auto op : {Operator::max, Operator::max_forget}) {
        const MergeResult r = merge(op, p);
        EXPECT_EQ(testing_util::to_oracle(r.model_set), expected);
        EXPECT_EQ(r.k, 2u);
    }
    // A hand-derived rendering (with its missing conjunction restored) differs
    // from the exhaustive result in exactly two interpretations.
    const Formula printed = parse("(!S & !T & P) | (!S & T & !P) | (S & !T & P & I)");
    const ModelSet shown = models(Formula::conjunction({printed, p.constraint()}), p.vocabulary());
    const ModelSet computed = merge_max(p).model_set;
    EXPECT_FALSE(shown == computed);
    const ModelSet only_shown = models(parse("S & !T & P & I"), p.vocabulary());
    const ModelSet only_computed = models(parse("S & !T & !P & !I"), p.vocabulary());
    EXPECT_TRUE(only_shown.subset_of(shown));
    EXPECT_FALSE(only_shown.subset_of(computed));
    EXPECT_TRUE(only_computed.subset_of(computed));
    EXPECT_FALSE(only_computed.subset_of(shown));
    EXPECT_EQ((shown & computed).size() + 1, computed.size());
    EXPECT_EQ((shown & computed).size() + 1, shown.size());
}

TEST(Merge, PoolSharedForgetting) {
    const Profile p = pool();
    const Formula expected = Formula::conjunction({parse("!I"), p.constraint()});
    for (auto op : {Operator::f1, Operator::f2}) {
        const MergeResult r = merge(op, p);
        EXPECT_TRUE(equivalent(r.formula, expected)) << to_string(op);
        ASSERT_TRUE(r.family);
        EXPECT_EQ(r.family->sets, (std::vector<Vocabulary>{Vocabulary{"P", "S", "T"}}));
    }
}

TEST(Merge, SeparatingExample) {
    const Profile p({parse("!p & !q & !r & !s"), parse("((p & !q & !r) | (!p & q & r)) & !s")},
                    Formula::constant(true));
    const MergeResult r1 = merge_f1(p);
    const MergeResult r2 = merge_f2(p);
    EXPECT_TRUE(equivalent(r1.formula, parse("!q & !r & !s")));
    EXPECT_EQ(r1.family->sets, (std::vector<Vocabulary>{Vocabulary{"p"}}));
    EXPECT_EQ(r2.family->sets, (std::vector<Vocabulary>{Vocabulary{"p"}, Vocabulary{"q", "r"}}));
    EXPECT_TRUE(equivalent(r2.formula, parse("(!q & !r & !s) | (!p & !s)")));
    EXPECT_FALSE(equivalent(r1.formula, r2.formula));

    const auto o1 = oracle::shared_forgetting({p.kbs().begin(), p.kbs().end()}, p.constraint(), names(p), false);
    const auto o2 = oracle::shared_forgetting({p.kbs().begin(), p.kbs().end()}, p.constraint(), names(p), true);
    EXPECT_EQ(testing_util::to_oracle(r1.model_set), o1.result);
    EXPECT_EQ(testing_util::to_oracle(r2.model_set), o2.result);
    EXPECT_EQ(o2.family, (std::vector<std::vector<std::string>>{{"p"}, {"q", "r"}}));
}

TEST(Merge, SmallExamples) {
    const Profile contested({parse("p"), parse("!p")}, Formula::constant(true));
    const MergeResult s = merge_sigma(contested);
    EXPECT_TRUE(equivalent(s.formula, Formula::constant(true)));
    EXPECT_EQ(s.k, 1u);

    const Profile single({parse("p & q")}, Formula::constant(true));
    for (auto op : {Operator::sigma, Operator::max, Operator::gmax, Operator::sigma_forget,
                    Operator::max_forget, Operator::gmax_forget, Operator::f1, Operator::f2}) {
        const MergeResult r = merge(op, single);
        EXPECT_TRUE(equivalent(r.formula, parse("p & q"))) << to_string(op);
    }
    EXPECT_EQ(merge_f1(single).family->sets, (std::vector<Vocabulary>{Vocabulary{}}));
}

TEST(Merge, InconsistentConstraintIsDegenerate) {
    const Profile p({parse("p")}, parse("q & !q"));
    for (auto op : {Operator::sigma, Operator::max, Operator::gmax, Operator::sigma_forget,
                    Operator::max_forget, Operator::gmax_forget, Operator::f1, Operator::f2}) {
        const MergeResult r = merge(op, p);
        EXPECT_TRUE(r.degenerate) << to_string(op);
        EXPECT_TRUE(r.model_set.empty());
        EXPECT_EQ(r.formula, Formula::constant(false));
    }
}

TEST(Merge, ProfileErrors) {
    try {
        Profile({parse("p"), parse("q & !q")}, Formula::constant(true));
        FAIL() << "expected InconsistentKnowledgeBase";
    } catch (const InconsistentKnowledgeBase& e) {
        EXPECT_EQ(e.index(), 1u);
    }
    EXPECT_THROW(Profile({}, Formula::constant(true)), std::invalid_argument);
    EXPECT_THROW(Profile({parse("p")}, Formula::constant(true), standard_vocabulary(10), Limits{8}),
                 VocabularyCapExceeded);
}

TEST(Merge, MultiplicityMatters) {
    const std::vector<Formula> a{parse("p")}, b{parse("!p")};
    const Profile once(concat(a, b), Formula::constant(true));
    const Profile twice(concat(a, b, 2), Formula::constant(true));
    EXPECT_TRUE(equivalent(merge_sigma(once).formula, Formula::constant(true)));
    EXPECT_TRUE(equivalent(merge_sigma(twice).formula, parse("!p")));
    EXPECT_TRUE(equivalent(merge_max(twice).formula, Formula::constant(true)));
}

TEST(Merge, AgreesWithOracleOnRandomProfiles) {
    const oracle::Aggregate aggs[] = {oracle::Aggregate::sum, oracle::Aggregate::max, oracle::Aggregate::gmax};
    const Operator ops[] = {Operator::sigma, Operator::max, Operator::gmax};
    const Operator forget_ops[] = {Operator::sigma_forget, Operator::max_forget, Operator::gmax_forget};
    for (std::uint64_t i = 0; i < 150; ++i) {
        Rng rng(derive_seed(7, i));
        const Vocabulary v = standard_vocabulary(rng.between(1, 4));
        std::vector<Formula> kbs;
        for (std::size_t k = rng.between(1, 4); k > 0; --k) kbs.push_back(random_dnf(rng, v));
        const Formula mu = random_dnf(rng, v);
        const Profile p(kbs, mu, v);
        for (int j = 0; j < 3; ++j) {
            const auto expected = oracle::merge(kbs, mu, v.names(), aggs[j]);
            const MergeResult a = merge(ops[j], p);
            const MergeResult b = merge(forget_ops[j], p);
            EXPECT_EQ(testing_util::to_oracle(a.model_set), expected) << i;
            EXPECT_EQ(a.model_set, b.model_set) << i;
            EXPECT_TRUE(a.model_set.subset_of(p.constraint_models()));
            EXPECT_FALSE(a.model_set.empty());
        }
        for (bool minimal : {false, true}) {
            const auto o = oracle::shared_forgetting(kbs, mu, v.names(), minimal);
            const MergeResult r = minimal ? merge_f2(p) : merge_f1(p);
            EXPECT_EQ(testing_util::to_oracle(r.model_set), o.result) << i;
            std::vector<std::vector<std::string>> fam;
            for (const auto& s : r.family->sets) fam.push_back(s.names());
            std::sort(fam.begin(), fam.end());
            EXPECT_EQ(fam, o.family) << i;
        }
    }
}

TEST(Merge, SigmaDistanceMatchesOracle) {
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng(derive_seed(11, i));
        const Vocabulary v = standard_vocabulary(rng.between(1, 4));
        std::vector<Formula> kbs;
        for (std::size_t k = rng.between(1, 3); k > 0; --k) kbs.push_back(random_dnf(rng, v));
        const Profile p(kbs, Formula::constant(true), v);
        const MergeResult r = merge_sigma(p);
        std::vector<oracle::Models> kms;
        for (const auto& kb : kbs) kms.push_back(oracle::models(kb, v.names()));
        std::size_t best = 1000;
        for (const auto& w : oracle::all_models(v.size())) {
            std::size_t s = 0;
            for (const auto& km : kms) s += oracle::distance(w, km);
            best = std::min(best, s);
        }
        EXPECT_EQ(r.k, best);
    }
}

TEST(Merge, SharedForgettingRelations) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng(derive_seed(13, i));
        const Vocabulary v = standard_vocabulary(rng.between(2, 4));
        std::vector<Formula> kbs;
        for (std::size_t k = rng.between(1, 3); k > 0; --k) kbs.push_back(random_dnf(rng, v));
        // The constraint avoids v[0]; see UnanimousLiteralNeedsFreeConstraint.
        const Formula mu = rng.chance(1, 4) ? Formula::constant(true)
                                            : random_dnf(rng, subtract(v, Vocabulary{v[0]}));
        // Give every KB a shared literal so none of them should need to forget it.
        const Formula lit = literal(v[0], rng.coin());
        for (auto& kb : kbs) kb = Formula::conjunction({kb, lit});
        std::vector<Formula> usable;
        for (const auto& kb : kbs)
            if (consistent(kb)) usable.push_back(kb);
        if (usable.empty()) continue;
        const Profile p(usable, mu, v);
        const MergeResult r1 = merge_f1(p);
        const MergeResult r2 = merge_f2(p);
        EXPECT_TRUE(r1.model_set.subset_of(r2.model_set)) << i;
        EXPECT_TRUE(r1.model_set.subset_of(p.constraint_models())) << i;
        EXPECT_TRUE(r2.model_set.subset_of(p.constraint_models())) << i;
        for (const auto& s : r1.family->sets) {
            EXPECT_TRUE(r2.family->contains(s)) << i;
            EXPECT_FALSE(s.contains(v[0])) << i;
        }
        for (const auto& s : r2.family->sets) EXPECT_FALSE(s.contains(v[0])) << i;
    }
}

// With a constraint that mentions the shared variable, forgetting it can be
// the cheapest repair, so it may appear in a minimal set.
TEST(Merge, UnanimousLiteralNeedsFreeConstraint) {
    const Profile p({parse("p & q")}, parse("!p | (p & !q)"));
    const MergeResult r = merge_f1(p);
    EXPECT_EQ(r.family->sets, (std::vector<Vocabulary>{Vocabulary{"p"}, Vocabulary{"q"}}));
    EXPECT_TRUE(equivalent(r.formula, parse("(!p & q) | (p & !q)")));
    EXPECT_FALSE(entails(r.formula, parse("p")));
}

TEST(Merge, OperatorNames) {
    for (auto op : {Operator::sigma, Operator::max, Operator::gmax, Operator::sigma_forget,
                    Operator::max_forget, Operator::gmax_forget, Operator::f1, Operator::f2})
        EXPECT_EQ(parse_operator(to_string(op)), op);
    EXPECT_FALSE(parse_operator("median"));
    EXPECT_EQ(to_string(ForgettingFamily{{Vocabulary{"p"}, Vocabulary{"q", "r"}}}), "{{p}, {q,r}}");
}
