#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace vt;

namespace {

// G(X, m) straight from its definition.
StateMask brute_maximal(StateMask x, const Message& m)
{
    StateMask out = 0;
    for (StateIndex s = 0; s < m.universe_size(); ++s) {
        if (!contains(x, s))
            continue;
        bool dominated = false;
        for (StateIndex t = 0; t < m.universe_size(); ++t)
            if (contains(x, t) && m.prefers(t, s))
                dominated = true;
        if (!dominated)
            out |= bit(s);
    }
    return out;
}

} // namespace

TEST(Relations, EmptyRelationIsValid)
{
    auto u = universe(2);
    Message m = msg(u, {});
    EXPECT_TRUE(m.empty());
}

TEST(Relations, ThreeCycleIsRejectedWithWitness)
{
    auto u = universe(3);
    try {
        msg(u, {{"s1", "s2"}, {"s2", "s3"}, {"s3", "s1"}});
        FAIL() << "cycle accepted";
    } catch (const InvalidMessage& e) {
        std::vector<StateIndex> expected{0, 1, 2, 0};
        EXPECT_EQ(e.witness(), expected);
        EXPECT_NE(std::string(e.what()).find("s1->s2->s3->s1"), std::string::npos);
    }
}

TEST(Relations, ReflexivePairNamesTheState)
{
    auto u = universe(2);
    try {
        msg(u, {{"s2", "s2"}});
        FAIL();
    } catch (const InvalidMessage& e) {
        EXPECT_NE(std::string(e.what()).find("s2"), std::string::npos);
    }
}

TEST(Relations, UnknownStateIsRejected)
{
    auto u = universe(2);
    EXPECT_THROW(msg(u, {{"s1", "s9"}}), UnknownId);
}

TEST(Relations, CrossZonePairsFromZoneRankExample)
{
    auto u = universe(3);
    Message m = msg(u, {{"s2", "s3"}, {"s1", "s3"}});
    EXPECT_EQ(m.pair_count(), 2u);
    EXPECT_EQ(maximal_elements(u.all(), m), states(u, {"s1", "s2"}));
    EXPECT_FALSE(comparable(0, 1, m));
    EXPECT_TRUE(comparable(0, 2, m));
}

TEST(Relations, MaximalOfSingletonAndEmptyThrows)
{
    auto u = universe(3);
    Message m = msg(u, {{"s1", "s2"}});
    EXPECT_EQ(maximal_elements(bit(1), m), bit(1));
    EXPECT_THROW(maximal_elements(0, m), PreconditionError);
}

TEST(Relations, ComparableBasics)
{
    auto u = universe(3);
    Message empty(3);
    EXPECT_TRUE(comparable(0, 0, empty));
    EXPECT_TRUE(comparable(0, 2, msg(u, {{"s1", "s3"}})));
    EXPECT_THROW(comparable(0, 7, empty), UnknownId);
}

TEST(Relations, Truthfulness)
{
    auto u = universe(3);
    EXPECT_TRUE(is_truthful(Message(3), pref(u, {"s3", "s1", "s2"})));
    EXPECT_TRUE(is_truthful(msg(u, {{"s1", "s2"}}), pref(u, {"s1", "s2", "s3"})));
    // s3 > s2 > s1 written out against s2 > s3 > s1
    Message m = msg(u, {{"s3", "s2"}, {"s2", "s1"}});
    EXPECT_FALSE(is_truthful(m, pref(u, {"s2", "s3", "s1"})));
    EXPECT_THROW(is_truthful(Message(2), pref(u, {"s1", "s2", "s3"})), PreconditionError);
}

TEST(Relations, InformationContainment)
{
    auto u = universe(3);
    Message full = order_msg(u, {"s3", "s1", "s2"});
    Message zonal = msg(u, {{"s1", "s2"}});
    EXPECT_TRUE(contains_more_information(full, full));
    EXPECT_TRUE(contains_more_information(full, zonal));
    EXPECT_FALSE(contains_more_information(zonal, full));
}

TEST(Relations, TransitiveClosureIsNeverImplicit)
{
    auto u = universe(3);
    Message m = msg(u, {{"s1", "s2"}, {"s2", "s3"}});
    EXPECT_FALSE(m.prefers(0, 2));
    EXPECT_TRUE(transitive_closure(m).prefers(0, 2));
    EXPECT_FALSE(comparable(0, 2, m));
}

TEST(Relations, RandomMaximalMatchesDefinition)
{
    std::mt19937_64 rng(7);
    for (int round = 0; round < 2000; ++round) {
        Message m = random_message(5, rng);
        StateMask x = std::uniform_int_distribution<StateMask>(1, 31)(rng);
        StateMask g = maximal_elements(x, m);
        EXPECT_EQ(g, brute_maximal(x, m));
        EXPECT_NE(g, 0u);
        EXPECT_EQ(maximal_elements(x, Message(5)), x);
    }
}

TEST(Relations, RefinementShrinksMaximalSetsAndPreservesTruth)
{
    std::mt19937_64 rng(11);
    for (int round = 0; round < 500; ++round) {
        PreferenceOrder p = random_pref(5, rng);
        Message refined = complete_message(p);
        Message coarse(5);
        std::bernoulli_distribution keep(0.5);
        for (auto [a, b] : refined.pairs())
            if (keep(rng))
                coarse.add_unchecked(a, b);
        ASSERT_TRUE(contains_more_information(refined, coarse));
        for (StateMask x = 1; x < 32; ++x)
            EXPECT_EQ(maximal_elements(x, refined) & ~maximal_elements(x, coarse), 0u);
        EXPECT_TRUE(is_truthful(refined, p));
        EXPECT_TRUE(is_truthful(coarse, p));
    }
}

TEST(Relations, FormatIsLexicographic)
{
    auto u = universe(3);
    EXPECT_EQ(format_message(msg(u, {{"s2", "s3"}, {"s1", "s3"}}), u), "s1>s3, s2>s3");
}
