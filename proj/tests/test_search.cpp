#include "support.hpp"

#include "ff/search.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ff;
using namespace fftest;

namespace {

SearchConfig plain_ehc() {
    SearchConfig c;
    c.helpful = false;
    c.agd = false;
    c.agenda = false;
    c.fallback = false;
    return c;
}

void expect_valid(const Task &t, const SearchOutcome &out) {
    ASSERT_TRUE(out.solved());
    ASSERT_TRUE(out.plan.has_value());
    EXPECT_TRUE(validate_plan(t, *out.plan).valid);
    EXPECT_TRUE(naive_valid(t, out.plan->steps));
}

std::vector<std::string> plan_names(const Task &t, const SearchOutcome &out) {
    return out.plan ? names(t, out.plan->steps) : std::vector<std::string>{};
}

size_t position(const std::vector<std::string> &plan, const std::string &step) {
    return static_cast<size_t>(std::find(plan.begin(), plan.end(), step) -
                               plan.begin());
}

} // namespace

TEST(Config, LettersRoundTrip) {
    EXPECT_EQ(SearchConfig{}.letters(), "HEF");
    for (const char *l : {"HEF", "HE-", "H-F", "H--", "-EF", "-E-", "--F", "---"}) {
        const SearchConfig c = SearchConfig::from_letters(l);
        EXPECT_EQ(c.letters(), l);
        EXPECT_FALSE(c.agd);
        EXPECT_FALSE(c.agenda);
        EXPECT_FALSE(c.fallback);
    }
    const SearchConfig c = SearchConfig::from_letters("-E-");
    EXPECT_FALSE(c.helpful);
    EXPECT_EQ(c.strategy, Strategy::ehc);
    EXPECT_EQ(c.heuristic, HeuristicKind::add);
    EXPECT_THROW(SearchConfig::from_letters("HEX"), std::invalid_argument);
    EXPECT_THROW(SearchConfig::from_letters("HE"), std::invalid_argument);
}

TEST(Ehc, GripperTwoBallsOptimal) {
    const auto gr = ground_texts(bench::gen_gripper(2));
    SearchConfig c = plain_ehc();
    c.helpful = true;
    const SearchOutcome out = enforced_hill_climbing(gr.task, gr.graph, c);
    expect_valid(gr.task, out);
    EXPECT_EQ(out.plan->size(), 5u);
}

TEST(Ehc, HelpfulPruningCutsSolutions) {
    const Task t = helpful_cx_task();
    const ConnectivityGraph g(t);
    SearchConfig c = plain_ehc();
    c.helpful = true;
    const SearchOutcome out = enforced_hill_climbing(t, g, c);
    EXPECT_EQ(out.status, SearchStatus::ehc_failed);
    EXPECT_FALSE(out.plan.has_value());

    const SearchOutcome all = enforced_hill_climbing(t, g, plain_ehc());
    expect_valid(t, all);
}

TEST(Ehc, GoalsAlreadyTrue) {
    Task t = toy_task();
    t.initial = state(t, {"(g1)", "(g2)"});
    const ConnectivityGraph g(t);
    const SearchOutcome out = enforced_hill_climbing(t, g, SearchConfig{});
    expect_valid(t, out);
    EXPECT_TRUE(out.plan->steps.empty());
}

TEST(Ehc, AddedGoalDeletionMakesTaskUnsolvable) {
    const Task t = agd_cx_task();
    const ConnectivityGraph g(t);
    SearchConfig c = plain_ehc();
    c.agd = true;
    EXPECT_EQ(enforced_hill_climbing(t, g, c).status, SearchStatus::ehc_failed);

    const SearchOutcome off = enforced_hill_climbing(t, g, plain_ehc());
    expect_valid(t, off);
    EXPECT_EQ(off.plan->size(), 3u);
    EXPECT_EQ(off.plan->size(), bench::brute_force_optimal(t).length);
}

TEST(Ehc, DeadEndStartIsUnsolvable) {
    const Task t = make_task({"(b)", "(c)"}, {{"op-b", {}, {"(b)"}, {}}}, {"(b)"},
                             {"(b)", "(c)"});
    const ConnectivityGraph g(t);
    EXPECT_EQ(enforced_hill_climbing(t, g, plain_ehc()).status,
              SearchStatus::unsolvable);
}

TEST(Ehc, TraceRecordsPruning) {
    const auto gr = ground_texts(bench::gen_bw_para());
    SearchConfig c;
    c.agenda = false;
    c.fallback = false;
    c.trace = true;
    const SearchOutcome out = enforced_hill_climbing(gr.task, gr.graph, c);
    const ActionId stack_ab = action(gr.task, "(stack a b)");
    bool pruned = false;
    for (const TraceEntry &e : out.trace)
        if (e.action == stack_ab && e.pruned)
            pruned = true;
    EXPECT_TRUE(pruned);
}

TEST(Ehc, MaxEvaluationsExhausts) {
    const auto gr = ground_texts(bench::gen_gripper(6));
    SearchConfig c = plain_ehc();
    c.max_evaluations = 5;
    EXPECT_EQ(enforced_hill_climbing(gr.task, gr.graph, c).status,
              SearchStatus::resource_exhausted);
}

TEST(Agd, BlocksworldStackAOnBFirst) {
    const auto gr = ground_texts(bench::gen_bw_para());
    const Task &t = gr.task;
    const State parent = state(t, {"(holding a)", "(clear b)", "(clear c)",
                                   "(ontable b)", "(ontable c)"});
    const ActionId a = action(t, "(stack a b)");
    const State child = apply(parent, t.actions[a]);
    RpgWorkspace ws(gr.graph);
    ws.build(child, t.goals);
    const LayeredRelaxedPlan &p = ws.extract(t.goals);
    EXPECT_EQ(names(t, p.flatten()),
              (std::vector<std::string>{"(unstack a b)", "(pickup b)", "(stack b c)"}));
    EXPECT_TRUE(added_goal_deletion_check(gr.graph, parent, a, child, p, t.goals));

    // No goal added.
    const ActionId put = action(t, "(putdown a)");
    const State down = apply(parent, t.actions[put]);
    ws.build(down, t.goals);
    EXPECT_FALSE(added_goal_deletion_check(gr.graph, parent, put, down,
                                           ws.extract(t.goals), t.goals));
}

TEST(Agd, CounterexampleStates) {
    const Task t = agd_cx_task();
    const ConnectivityGraph g(t);
    RpgWorkspace ws(g);
    const State a = state(t, {"(a)"});
    ws.build(a, t.goals);
    EXPECT_TRUE(added_goal_deletion_check(g, State{}, action(t, "(op-a)"), a,
                                          ws.extract(t.goals), t.goals));
    const State b = state(t, {"(b)"});
    ws.build(b, t.goals);
    EXPECT_FALSE(added_goal_deletion_check(g, a, action(t, "(op-b)"), b,
                                           ws.extract(t.goals), t.goals));
    // Only target goals are protected.
    ws.build(a, t.goals);
    const std::vector<FactId> only_b{fact(t, "(b)")};
    EXPECT_FALSE(added_goal_deletion_check(g, State{}, action(t, "(op-a)"), a,
                                           ws.extract(t.goals), only_b));
}

TEST(Agenda, DeletingAchieverGoesFirst) {
    const Task t = agd_cx_task();
    const GoalAgenda ag = compute_goal_agenda(t);
    EXPECT_EQ(ag.entries, (std::vector<std::vector<FactId>>{{fact(t, "(b)")},
                                                            {fact(t, "(a)")}}));
    EXPECT_TRUE(ag.unachievable.empty());
}

TEST(Agenda, GripperSingleEntry) {
    const auto gr = ground_texts(bench::gen_gripper(4));
    const GoalAgenda ag = compute_goal_agenda(gr.task, gr.graph);
    ASSERT_EQ(ag.entries.size(), 1u);
    EXPECT_EQ(ag.entries[0], gr.task.goals);
}

TEST(Agenda, MutualConflictMerged) {
    const Task t = make_task({"(a)", "(b)"},
                             {{"op-a", {}, {"(a)"}, {"(b)"}},
                              {"op-b", {}, {"(b)"}, {"(a)"}}},
                             {}, {"(a)", "(b)"});
    const GoalAgenda ag = compute_goal_agenda(t);
    EXPECT_EQ(ag.entries, (std::vector<std::vector<FactId>>{{0, 1}}));
}

TEST(Agenda, BlocksworldTowerBottomUp) {
    const auto gr = ground_texts(bench::gen_bw_para());
    const Task &t = gr.task;
    const GoalAgenda ag = compute_goal_agenda(t, gr.graph);
    EXPECT_EQ(ag.entries, (std::vector<std::vector<FactId>>{{fact(t, "(on b c)")},
                                                            {fact(t, "(on a b)")}}));
}

TEST(Agenda, UnachievableGoalListed) {
    const Task t = make_task({"(b)", "(c)"}, {{"op-b", {}, {"(b)"}, {}}}, {},
                             {"(b)", "(c)"});
    const GoalAgenda ag = compute_goal_agenda(t);
    EXPECT_EQ(ag.unachievable, (std::vector<FactId>{1}));
}

TEST(Gbfs, HelpfulCounterexample) {
    const Task t = helpful_cx_task();
    const ConnectivityGraph g(t);
    SearchConfig c;
    c.strategy = Strategy::gbfs;
    const SearchOutcome out = greedy_best_first(t, g, c);
    expect_valid(t, out);
    EXPECT_EQ(plan_names(t, out), (std::vector<std::string>{"(op-pa)", "(op-a2)"}));
}

TEST(Gbfs, Toy) {
    const Task t = toy_task();
    const ConnectivityGraph g(t);
    const SearchOutcome out = greedy_best_first(t, g, SearchConfig{});
    expect_valid(t, out);
    EXPECT_EQ(out.plan->size(), 3u);
}

TEST(Gbfs, UnachievableGoal) {
    const Task t = make_task({"(b)", "(c)"}, {{"op-b", {}, {"(b)"}, {}}}, {},
                             {"(b)", "(c)"});
    const ConnectivityGraph g(t);
    EXPECT_EQ(greedy_best_first(t, g, SearchConfig{}).status,
              SearchStatus::unsolvable);
}

TEST(Gbfs, ExhaustedStateSpace) {
    // c needs both a and b, but producing either consumes the other.
    const Task t = make_task({"(a)", "(b)", "(c)", "(s)"},
                             {{"mk-a", {"(s)"}, {"(a)"}, {"(b)", "(s)"}},
                              {"mk-b", {"(s)"}, {"(b)"}, {"(a)", "(s)"}},
                              {"mk-c", {"(a)", "(b)"}, {"(c)"}, {}}},
                             {"(s)"}, {"(c)"});
    const ConnectivityGraph g(t);
    EXPECT_EQ(bench::brute_force_optimal(t).status, bench::OracleStatus::none);
    EXPECT_EQ(greedy_best_first(t, g, SearchConfig{}).status,
              SearchStatus::unsolvable);
}

TEST(Hc, ToyAnySeed) {
    const Task t = toy_task();
    const ConnectivityGraph g(t);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SearchConfig c = SearchConfig::from_letters("--F");
        c.seed = seed;
        const SearchOutcome out = hsp1_hill_climbing(t, g, c);
        expect_valid(t, out);
        EXPECT_EQ(out.plan->size(), 3u);
    }
}

TEST(Hc, DeterministicForSeed) {
    const auto gr = ground_texts(bench::gen_logistics(2, 3, 7));
    for (const char *letters : {"H-F", "H--", "--F", "---"}) {
        SearchConfig c = SearchConfig::from_letters(letters);
        c.seed = 42;
        c.trace = true;
        const SearchOutcome a = hsp1_hill_climbing(gr.task, gr.graph, c);
        const SearchOutcome b = hsp1_hill_climbing(gr.task, gr.graph, c);
        EXPECT_EQ(a.status, b.status);
        EXPECT_EQ(a.plan.has_value(), b.plan.has_value());
        if (a.plan && b.plan) {
            EXPECT_EQ(a.plan->steps, b.plan->steps);
        }
        EXPECT_EQ(a.stats.evaluations, b.stats.evaluations);
        EXPECT_EQ(a.stats.restarts, b.stats.restarts);
        EXPECT_EQ(a.trace, b.trace);
        if (a.solved())
            expect_valid(gr.task, a);
    }
}

TEST(Hc, UnreachableGoalNeverSolved) {
    const Task t = make_task({"(b)", "(c)"}, {{"op-b", {}, {"(b)"}, {}}}, {},
                             {"(b)", "(c)"});
    const ConnectivityGraph g(t);
    EXPECT_EQ(hsp1_hill_climbing(t, g, SearchConfig::from_letters("---")).status,
              SearchStatus::resource_exhausted);
}

TEST(Solve, HelpfulCounterexampleViaFallback) {
    const Task t = helpful_cx_task();
    const SearchOutcome out = solve(t, SearchConfig{});
    expect_valid(t, out);
    EXPECT_TRUE(out.stats.used_fallback);
    EXPECT_EQ(out.plan->size(), 2u);
    EXPECT_EQ(bench::brute_force_optimal(t).length, 2u);

    SearchConfig no_fallback;
    no_fallback.fallback = false;
    EXPECT_EQ(solve(t, no_fallback).status, SearchStatus::ehc_failed);
}

TEST(Solve, BlocksworldOrdersTowerBottomUp) {
    const auto gr = ground_texts(bench::gen_bw_para());
    const SearchOutcome out = solve(gr.task, gr.graph, SearchConfig{});
    expect_valid(gr.task, out);
    EXPECT_FALSE(out.stats.used_fallback);
    const auto plan = plan_names(gr.task, out);
    EXPECT_EQ(plan.size(), bench::brute_force_optimal(gr.task).length);
    EXPECT_EQ(plan.size(), 4u);
    EXPECT_LT(position(plan, "(stack b c)"), position(plan, "(stack a b)"));
}

TEST(Solve, GoalsAlreadyTrue) {
    Task t = agd_cx_task();
    t.initial = state(t, {"(a)", "(b)"});
    const SearchOutcome out = solve(t, SearchConfig{});
    expect_valid(t, out);
    EXPECT_TRUE(out.plan->steps.empty());
    EXPECT_EQ(out.stats.expansions, 0u);
}

TEST(Solve, UnreachableGoalFromGrounding) {
    Task t = toy_task();
    t.unreachable_goals = {0};
    EXPECT_EQ(solve(t, SearchConfig{}).status, SearchStatus::unsolvable);
}

TEST(Solve, AgendaRunsEntriesIncrementally) {
    const Task t = agd_cx_task();
    SearchConfig c;
    c.fallback = false;
    const SearchOutcome out = solve(t, c);
    expect_valid(t, out);
    EXPECT_EQ(plan_names(t, out),
              (std::vector<std::string>{"(op-a)", "(op-b)", "(op-a)"}));
}

TEST(Solve, StrategyGbfs) {
    const auto gr = ground_texts(bench::gen_gripper(3));
    SearchConfig c;
    c.strategy = Strategy::gbfs;
    expect_valid(gr.task, solve(gr.task, gr.graph, c));
}

TEST(Solve, AnchorsStrictlyDecrease) {
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto gr = ground_texts(bench::gen_blocksworld(n, n));
        SearchConfig c;
        c.agenda = false;
        c.fallback = false;
        const SearchOutcome out = solve(gr.task, gr.graph, c);
        for (size_t i = 1; i < out.stats.anchor_h.size(); ++i)
            EXPECT_LT(out.stats.anchor_h[i], out.stats.anchor_h[i - 1]);
    }
}

TEST(Solve, HelpfulPruningKeepsSolvedSet) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto gr = ground_texts(bench::gen_gripper(n));
        SearchConfig on = plain_ehc(), off = plain_ehc();
        on.helpful = true;
        expect_valid(gr.task, solve(gr.task, gr.graph, on));
        expect_valid(gr.task, solve(gr.task, gr.graph, off));
    }
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto gr = ground_texts(bench::gen_logistics(1 + seed % 2, 1 + seed % 3, seed));
        SearchConfig on = plain_ehc(), off = plain_ehc();
        on.helpful = true;
        EXPECT_EQ(solve(gr.task, gr.graph, on).solved(),
                  solve(gr.task, gr.graph, off).solved());
    }
}

TEST(Solve, DeterministicOutcome) {
    const auto gr = ground_texts(bench::gen_blocksworld(5, 3));
    SearchConfig c;
    c.trace = true;
    const SearchOutcome a = solve(gr.task, gr.graph, c);
    const SearchOutcome b = solve(gr.task, gr.graph, c);
    ASSERT_EQ(a.status, b.status);
    ASSERT_TRUE(a.plan && b.plan);
    EXPECT_EQ(a.plan->steps, b.plan->steps);
    EXPECT_EQ(a.stats.evaluations, b.stats.evaluations);
    EXPECT_EQ(a.stats.expansions, b.stats.expansions);
    EXPECT_EQ(a.trace, b.trace);
}

// Plain EHC on dead-end free domains.
TEST(Solve, EhcCompleteOnInvertibleDomains) {
    std::vector<bench::PddlTexts> suite;
    for (std::size_t n = 1; n <= 5; ++n)
        suite.push_back(bench::gen_gripper(n));
    for (std::uint64_t s = 0; s < 5; ++s)
        suite.push_back(bench::gen_blocksworld3(2 + s % 4, s));
    for (std::uint64_t s = 0; s < 5; ++s)
        suite.push_back(bench::gen_logistics(1 + s % 2, 1 + s % 3, s));
    for (const auto &texts : suite) {
        const auto gr = ground_texts(texts);
        const SearchOutcome out = solve(gr.task, gr.graph, plain_ehc());
        EXPECT_TRUE(out.solved()) << texts.name;
        if (out.solved())
            expect_valid(gr.task, out);
    }
}

class RandomSearch : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomSearch, GbfsMatchesOracle) {
    const Task t = bench::random_task(GetParam(), 10, 12);
    const ConnectivityGraph g(t);
    const auto opt = bench::brute_force_optimal(t);
    ASSERT_NE(opt.status, bench::OracleStatus::unknown);
    for (HeuristicKind h : {HeuristicKind::ff, HeuristicKind::add}) {
        SearchConfig c;
        c.heuristic = h;
        const SearchOutcome out = greedy_best_first(t, g, c);
        if (opt.status == bench::OracleStatus::found) {
            expect_valid(t, out);
            EXPECT_GE(out.plan->size(), opt.length);
        } else {
            EXPECT_EQ(out.status, SearchStatus::unsolvable);
        }
    }
}

TEST_P(RandomSearch, SolvedPlansAreValid) {
    const Task t = bench::random_task(GetParam() + 1000, 8, 10);
    const ConnectivityGraph g(t);
    for (const char *letters : {"HEF", "HE-", "H-F", "H--", "-EF", "-E-", "--F", "---"}) {
        SearchConfig c = SearchConfig::from_letters(letters);
        c.max_hc_steps = 2000;
        const SearchOutcome out = solve(t, g, c);
        if (out.solved())
            expect_valid(t, out);
        else
            EXPECT_FALSE(out.plan.has_value());
    }
    const SearchOutcome full = solve(t, g, SearchConfig{});
    const auto opt = bench::brute_force_optimal(t);
    EXPECT_EQ(full.solved(), opt.status == bench::OracleStatus::found);
}

INSTANTIATE_TEST_SUITE_P(Random, RandomSearch, ::testing::Range<std::uint64_t>(0, 100));
