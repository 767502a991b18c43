#include <gtest/gtest.h>

#include <random>

#include "dispersal/errors.h"
#include "dispersal/models/builders.h"
#include "dispersal/solver/reach.h"
#include "oracles.h"
#include "test_util.h"

using namespace dispersal;
using namespace dispersal::mdp;
using namespace dispersal::solver;

namespace {

/// States 0..n-1 over one variable, target proposition "goal".
Mdp blank(int n) {
    Mdp m(std::make_shared<VariableLayout>(std::vector<VariableDecl>{{"s", 0, n - 1, 0}}));
    for (int i = 0; i < n; ++i) m.intern_state({i});
    m.intern_proposition("goal");
    Distribution init;
    init.add(0, 1);
    m.set_initial(init);
    return m;
}

void choice(Mdp& m, StateId s, const std::string& action, std::vector<std::pair<StateId, Rational>> out) {
    Distribution d;
    for (auto& [t, p] : out) d.add(t, p);
    m.set_choice(s, m.intern_action(action), d);
}

Mdp random_mdp(std::mt19937_64& rng, int n, int actions) {
    Mdp m = blank(n);
    for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
        if (rng() % 5 == 0) m.add_label(s, 0);
        for (int a = 0; a < actions; ++a) {
            if (rng() % 3 == 0) continue;
            const int k = 1 + static_cast<int>(rng() % 3);
            std::vector<std::pair<StateId, Rational>> out;
            long total = 0;
            std::vector<long> w;
            for (int i = 0; i < k; ++i) total += w.emplace_back(1 + static_cast<long>(rng() % 5));
            for (int i = 0; i < k; ++i) out.emplace_back(static_cast<StateId>(rng() % n), frac(w[i], total));
            choice(m, s, "a" + std::to_string(a), out);
        }
    }
    return m;
}

}  // namespace

TEST(Qualitative, InitialTargetInProbOne) {
    Mdp m = blank(2);
    m.add_label(0, 0);
    choice(m, 0, "a", {{1, 1}});
    for (Direction d : {Direction::Min, Direction::Max}) EXPECT_TRUE(qualitative_sets(m, "goal", d).one[0]);
}

TEST(Qualitative, UnreachableTargetAllZero) {
    Mdp m = blank(3);
    m.add_label(2, 0);
    choice(m, 0, "a", {{1, 1}});
    choice(m, 1, "a", {{0, 1}});
    auto sets = qualitative_sets(m, "goal", Direction::Max);
    EXPECT_TRUE(sets.zero[0]);
    EXPECT_TRUE(sets.zero[1]);
}

TEST(Qualitative, SliceModelWithoutInterception) {
    auto p = test::params(3, 2, 3, 2, 3, {0, 0});
    Mdp m = models::build_mdp(p, models::Attacker::Slice);
    const StateId init = m.initial().outcomes.front().first;
    EXPECT_TRUE(qualitative_sets(m, models::kHacked, Direction::Max).zero[init]);
}

TEST(Qualitative, UnknownPropositionIsQueryError) {
    Mdp m = blank(1);
    EXPECT_THROW(target_states(m, "nope"), QueryError);
    EXPECT_THROW(pmax_reach(m, "nope"), QueryError);
}

TEST(Reach, SelfLoopTarget) {
    Mdp m = blank(1);
    m.add_label(0, 0);
    choice(m, 0, "a", {{0, 1}});
    EXPECT_EQ(pmin_reach(m, "goal"), 1.0);
    EXPECT_EQ(pmax_reach(m, "goal"), 1.0);
}

TEST(Reach, SchedulerExtremes) {
    Mdp m = blank(3);
    m.add_label(1, 0);
    choice(m, 0, "alpha", {{1, 1}});
    choice(m, 0, "beta", {{2, 1}});
    choice(m, 2, "stay", {{2, 1}});
    EXPECT_EQ(pmax_reach(m, "goal"), 1.0);
    EXPECT_EQ(pmin_reach(m, "goal"), 0.0);
    EXPECT_EQ(exact_reach(m, "goal", Direction::Max), 1);
    EXPECT_EQ(exact_reach(m, "goal", Direction::Min), 0);
}

TEST(Reach, EndComponentDoesNotFoolMax) {
    // 0 <-> 1 loop plus an exit to the target with mass 1/2 from 1.
    Mdp m = blank(4);
    m.add_label(2, 0);
    choice(m, 0, "a", {{1, 1}});
    choice(m, 1, "back", {{0, 1}});
    choice(m, 1, "exit", {{2, Rational(1, 2)}, {3, Rational(1, 2)}});
    EXPECT_EQ(exact_reach(m, "goal", Direction::Max), Rational(1, 2));
    EXPECT_EQ(exact_reach(m, "goal", Direction::Min), 0);
    EXPECT_NEAR(pmax_reach(m, "goal"), 0.5, 1e-12);
    EXPECT_NEAR(pmin_reach(m, "goal"), 0.0, 1e-12);
}

TEST(Reach, SliceAnchor) {
    Mdp m = models::build_mdp(test::params(2, 1, 2, 1, 1, {Rational(1, 2)}), models::Attacker::Slice);
    EXPECT_NEAR(pmin_reach(m, models::kHacked), 0.75, 1e-9);
    EXPECT_NEAR(pmax_reach(m, models::kHacked), 0.75, 1e-9);
}

TEST(Exact, MarkovChainsMatchLinearSystemOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Mdp m = random_mdp(rng, 2 + static_cast<int>(rng() % 9), 1);
        const auto expected = oracle::chain_reach(m, target_states(m, "goal"));
        for (Direction d : {Direction::Min, Direction::Max}) {
            const auto r = exact_solve(m, "goal", d);
            EXPECT_EQ(r.values, expected);
        }
    }
}

TEST(Exact, AgreesWithValueIterationOnRandomMdps) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Mdp m = random_mdp(rng, 2 + static_cast<int>(rng() % 12), 3);
        for (Direction d : {Direction::Min, Direction::Max}) {
            const auto exact = exact_solve(m, "goal", d);
            const auto vi = value_iteration(m, "goal", d, {.check_monotone = true});
            // Random cycles mix slowly, so a last change below 1e-10 can leave an error of a few
            // 1e-9; the model grid, with its short loops, is held to 1e-9 in the acceptance suite.
            for (StateId s = 0; s < m.num_states(); ++s) {
                EXPECT_NEAR(vi.values[s], exact.values[s].get_d(), 1e-7);
                EXPECT_LE(vi.values[s], exact.values[s].get_d() + 1e-12);  // approached from below
            }
        }
        EXPECT_LE(exact_reach(m, "goal", Direction::Min), exact_reach(m, "goal", Direction::Max));
    }
}

TEST(Exact, ProviderAnchor) {
    Mdp m = models::build_mdp(test::params(2, 2, 2, 2, 2, {Rational(1, 2), Rational(1, 2)}),
                              models::Attacker::Provider);
    EXPECT_EQ(exact_reach(m, models::kHacked, Direction::Min), Rational(3, 8));
    EXPECT_EQ(exact_reach(m, models::kHacked, Direction::Max), Rational(3, 8));
}

TEST(Exact, RefusesAboveCap) {
    Mdp m = blank(5);
    EXPECT_THROW(exact_solve(m, "goal", Direction::Max, {.max_states = 4}), PreconditionError);
}

TEST(ValueIteration, IterationCapRaisesWithResidual) {
    // Slow geometric convergence: stay with 0.999, reach target with 0.001, else fall out.
    Mdp m = blank(3);
    m.add_label(1, 0);
    choice(m, 0, "a", {{0, Rational(999, 1000)}, {1, Rational(1, 2000)}, {2, Rational(1, 2000)}});
    try {
        value_iteration(m, "goal", Direction::Max, {.max_iterations = 5});
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_GT(e.residual(), 0.0);
    }
    // The stopping rule bounds the last change, not the error: with a 0.999 self-loop the gap
    // can be up to a thousand times the tolerance.
    EXPECT_NEAR(pmax_reach(m, "goal"), 0.5, 1e-6);
}

TEST(Interval, PropositionOne) {
    Mdp m = models::build_mdp(test::params(2, 1, 2, 1, 1, {Rational(1, 2)}), models::Attacker::Slice);
    EXPECT_TRUE(check_pctl_interval(m, 0, 1, models::kHacked));
    EXPECT_FALSE(check_pctl_interval(m, Rational(4, 5), 1, models::kHacked));
    EXPECT_TRUE(check_pctl_interval(m, Rational(3, 4), Rational(3, 4), models::kHacked));
    EXPECT_TRUE(check_pctl_interval(m, 0, 1, models::kHacked, SolverMode::ValueIteration));

    Mdp ext = blank(3);
    ext.add_label(1, 0);
    choice(ext, 0, "alpha", {{1, 1}});
    choice(ext, 0, "beta", {{2, 1}});
    EXPECT_TRUE(check_pctl_interval(ext, 0, 1, "goal"));
    EXPECT_FALSE(check_pctl_interval(ext, Rational(1, 10), 1, "goal"));
    EXPECT_FALSE(check_pctl_interval(ext, 0, Rational(9, 10), "goal"));
    EXPECT_THROW(check_pctl_interval(ext, Rational(1, 2), Rational(1, 4), "goal"), QueryError);
}

TEST(Solve, ReportsBothDirections) {
    Mdp m = models::build_mdp(test::params(2, 1, 2, 1, 1, {Rational(1, 2)}), models::Attacker::Slice);
    auto vi = solve(m, {}, SolverMode::ValueIteration);
    auto ex = solve(m, {}, SolverMode::Exact);
    EXPECT_EQ(ex.exact_min, Rational(3, 4));
    EXPECT_EQ(ex.exact_max, Rational(3, 4));
    EXPECT_NEAR(vi.pmin, 0.75, 1e-9);
    EXPECT_LE(vi.pmin, vi.pmax + 1e-12);
    EXPECT_EQ(to_string(SolverMode::Exact), "exact");
}
