// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "support.hpp"
#include "treecert/encoder.hpp"

namespace treecert {
namespace {

using testing::q;

// Walks the tree program concretely.
Label run_tree(const TreeProgram& p, const Instance& x) {
    TreeProgram::NodeId id = p.root();
    while (const auto* c = std::get_if<TreeProgram::Cond>(&p.node(id))) {
        id = x[c->feature] <= c->threshold ? c->then_branch : c->else_branch;
    }
    return std::get<TreeProgram::ReturnLabel>(p.node(id)).label;
}

TEST(EncodeTree, MirrorsPredict) {
    testing::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const DecisionTree t = testing::random_tree(rng, {3, 4, 3, 10});
        const TreeProgram p = encode_tree(t);
        EXPECT_EQ(p.node_count(), t.node_count());
        for (int k = 0; k < 40; ++k) {
            const Instance x = testing::random_instance(rng, t);
            EXPECT_EQ(run_tree(p, x), t.predict(x));
        }
    }
}

TEST(EncodeTree, GuardsAreClosed) {
    const TreeProgram p = encode_tree(testing::example_tree());
    const auto& root = std::get<TreeProgram::Cond>(p.node(p.root()));
    EXPECT_EQ(root.guard(), LinearConstraint::le(Var::attacked(1), q(10)));
    EXPECT_EQ(root.relaxed_negation(), LinearConstraint::ge(Var::attacked(1), q(10)));
}

TEST(EncodeAttacker, ListingIsStable) {
    const AttackerProgram p = encode_attacker(testing::example_attacker(), 2);
    EXPECT_EQ(p.rule_count, 2U);
    const std::string listing = dump_ir(p);
    EXPECT_EQ(listing, dump_ir(encode_attacker(testing::example_attacker(), 2)));
    EXPECT_NE(listing.find("B := 10"), std::string::npos) << listing;
    EXPECT_NE(listing.find("xp_0 :in [xp_0 - 1, xp_0]"), std::string::npos) << listing;
    EXPECT_NE(listing.find("B >= 5"), std::string::npos) << listing;
    EXPECT_NE(listing.find("r_1 := r_1 + 1"), std::string::npos) << listing;
    const std::string tree = dump_ir(encode_tree(testing::example_tree()), testing::example_tree().label_names());
    EXPECT_NE(tree.find("if xp_1 <= 10"), std::string::npos) << tree;
    EXPECT_NE(tree.find("return +1"), std::string::npos) << tree;
}

TEST(EncodeAttacker, ConcreteRunsMatchDirectAttacks) {
    // Every concrete execution of the program ends in a state that some
    // attack sequence reaches: costs add up and counters match the budget.
    const Attacker a = testing::example_attacker();
    const AttackerProgram p = encode_attacker(a, 2);
    testing::Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        Valuation s{{Var::initial(0), q(static_cast<long>(rng() % 12))}, {Var::initial(1), q(static_cast<long>(rng() % 12))}};
        ASSERT_TRUE(testing::run_concrete(p.init, s, rng));
        StmtSeq whole{Stmt{p.loop}};
        ASSERT_TRUE(testing::run_concrete(whole, s, rng));
        EXPECT_EQ(s.at(Var::budget()), q(10) - q(5) * s.at(Var::counter(0)) - q(4) * s.at(Var::counter(1)));
        EXPECT_GE(s.at(Var::budget()), 0);
        EXPECT_LE(s.at(Var::attacked(0)), s.at(Var::initial(0)));
        EXPECT_GE(s.at(Var::attacked(1)), s.at(Var::initial(1)));
    }
}

} // namespace
} // namespace treecert
