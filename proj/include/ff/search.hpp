#pragma once

#include "ff/connectivity.hpp"
#include "ff/ext_nat.hpp"
#include "ff/relaxed_graphplan.hpp"
#include "ff/task.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ff {

enum class HeuristicKind { ff, add };
enum class Strategy { ehc, hc, gbfs };
enum class SearchStatus { solved, ehc_failed, unsolvable, resource_exhausted };

std::string_view to_string(HeuristicKind kind);
std::string_view to_string(Strategy strategy);
std::string_view to_string(SearchStatus status);

struct SearchConfig {
    HeuristicKind heuristic = HeuristicKind::ff;
    Strategy strategy = Strategy::ehc;
    bool helpful = true;
    bool agd = true;
    bool agenda = true;
    bool fallback = true;
    std::uint64_t seed = 0;
    // 0 disables a limit.
    std::uint64_t max_evaluations = 0;
    std::uint64_t max_seconds = 0;
    // Hill-climbing moves over all restarts; stops the hc strategy on tasks it
    // cannot solve once every reachable state is cached.
    std::uint64_t max_hc_steps = 100'000;
    // Record every generated transition of the local searches.
    bool trace = false;

    // Switch letters: H (helpful), E (ehc rather than hc), F (h_ff rather than
    // h_add), '-' for a switch that is off.
    std::string letters() const;
    // One of the eight ablation planners: agd, agenda and fallback off.
    // Throws std::invalid_argument on a malformed letter string.
    static SearchConfig from_letters(std::string_view letters);
};

struct TraceEntry {
    std::uint64_t iteration = 0; // EHC iteration or hc step
    std::uint32_t depth = 0;     // depth of the generated state in its BFS
    ActionId action = 0;
    ExtNat h;
    bool pruned = false;

    friend bool operator==(const TraceEntry &, const TraceEntry &) = default;
};

struct SearchStats {
    std::uint64_t evaluations = 0;
    std::uint64_t expansions = 0;
    std::uint64_t max_bfs_depth = 0;
    std::uint64_t ehc_iterations = 0;
    std::uint64_t restarts = 0;
    std::uint64_t elapsed_ms = 0;
    // h of every EHC anchor state, starting with the initial one.
    std::vector<ExtNat> anchor_h;
    bool used_fallback = false;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::ehc_failed;
    std::optional<Plan> plan;
    SearchStats stats;
    std::vector<TraceEntry> trace;

    bool solved() const { return status == SearchStatus::solved; }
};

struct GoalAgenda {
    std::vector<std::vector<FactId>> entries;
    // Goals false initially that no action adds.
    std::vector<FactId> unachievable;
};

// True when the transition parent --action--> child achieved a target goal
// that an effect selected in the child's relaxed plan deletes.
bool added_goal_deletion_check(const ConnectivityGraph &graph,
                               const State &parent, ActionId action,
                               const State &child,
                               const LayeredRelaxedPlan &child_plan,
                               std::span<const FactId> target_goals);

// Goal a goes after goal b when b has an achiever and either every achiever
// of b deletes a, or b is relaxed-unreachable without deleting a from the
// initial state with any achiever of a applied. Cycles are merged; entries
// are the topological layers.
GoalAgenda compute_goal_agenda(const Task &task, const ConnectivityGraph &graph);
GoalAgenda compute_goal_agenda(const Task &task);

SearchOutcome enforced_hill_climbing(const Task &task,
                                     const ConnectivityGraph &graph,
                                     const State &start,
                                     std::span<const FactId> goals,
                                     const SearchConfig &config);
SearchOutcome enforced_hill_climbing(const Task &task,
                                     const ConnectivityGraph &graph,
                                     const SearchConfig &config);

SearchOutcome greedy_best_first(const Task &task,
                                const ConnectivityGraph &graph,
                                const State &start,
                                std::span<const FactId> goals,
                                const SearchConfig &config);
SearchOutcome greedy_best_first(const Task &task,
                                const ConnectivityGraph &graph,
                                const SearchConfig &config);

SearchOutcome hsp1_hill_climbing(const Task &task,
                                 const ConnectivityGraph &graph,
                                 const State &start,
                                 std::span<const FactId> goals,
                                 const SearchConfig &config);
SearchOutcome hsp1_hill_climbing(const Task &task,
                                 const ConnectivityGraph &graph,
                                 const SearchConfig &config);

// Full strategy: agenda-driven local search, best-first fallback, validated
// result. Throws std::logic_error if a plan it is about to return is invalid.
SearchOutcome solve(const Task &task, const ConnectivityGraph &graph,
                    const SearchConfig &config);
SearchOutcome solve(const Task &task, const SearchConfig &config);

} // namespace ff
