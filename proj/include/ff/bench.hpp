#pragma once

// Benchmark generators, brute-force oracles, the switch-configuration matrix
// and the two-tailed sign test.

#include "ff/search.hpp"
#include "ff/task.hpp"

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace ff::bench {

struct PddlTexts {
    std::string name;
    std::string domain;
    std::string problem;
};

// Rooms rooma/roomb, grippers left/right, balls ball1..n all in rooma; goal
// all balls in roomb. Throws std::invalid_argument for n = 0.
PddlTexts gen_gripper(std::size_t n_balls);

// Random initial and goal states drawn uniformly over all Blocksworld states
// of n blocks (a, b, c, ...). Four operators: pickup, putdown, stack, unstack.
// Goals are the full goal configuration (on and ontable atoms).
PddlTexts gen_blocksworld(std::size_t n_blocks, std::uint64_t seed);
// Same states, three move operators and no robot arm. Every state can be
// reverted, so instances have no dead ends.
PddlTexts gen_blocksworld3(std::size_t n_blocks, std::uint64_t seed);
// a, b, c on the table; goals on(b,c) and on(a,b); four operators.
PddlTexts gen_bw_para();

// Each city: an airport and one other location, one truck; one airplane.
// Package origins and destinations drawn uniformly over all places.
PddlTexts gen_logistics(std::size_t cities, std::size_t packages,
                        std::uint64_t seed);

// Uniformly random Blocksworld state as a list of towers, bottom block first.
std::vector<std::vector<std::size_t>> random_towers(std::size_t n_blocks,
                                                    std::mt19937_64 &rng);

enum class OracleStatus { found, none, unknown };

struct OptimalResult {
    OracleStatus status = OracleStatus::unknown;
    std::size_t length = 0;
    Plan plan;
};

// Breadth-first search over real states. `none` means no plan of at most
// depth_limit steps exists; `unknown` means more than state_budget states
// were generated first.
OptimalResult brute_force_optimal(const Task &task,
                                  std::size_t depth_limit = SIZE_MAX,
                                  std::size_t state_budget = 2'000'000);

// Shortest plan length of the delete-relaxed task, by breadth-first search
// over relaxed states.
OptimalResult brute_force_relaxed_optimal(const Task &task,
                                          std::size_t state_budget = 2'000'000);

// Random STRIPS task with 3..max_facts facts (p0, p1, ...) and 1..max_actions
// actions (a0, a1, ...); pre/add/del drawn uniformly with add ∩ del = ∅.
Task random_task(std::uint64_t seed, std::size_t max_facts = 8,
                 std::size_t max_actions = 10);

// `count` random tasks that brute_force_optimal proves solvable, drawn from
// consecutive seeds starting at `seed`.
std::vector<Task> random_solvable_tasks(std::size_t count, std::uint64_t seed,
                                        std::size_t max_facts = 8,
                                        std::size_t max_actions = 10);

struct SuiteEntry {
    // gripper, blocksworld, blocksworld3, bw-para, logistics or pddl.
    std::string domain;
    std::vector<std::size_t> params;
    std::uint64_t seed = 0;
    // pddl entries only.
    std::string name;
    std::string domain_path;
    std::string problem_path;

    std::string instance_name() const;
};

using SuiteSpec = std::vector<SuiteEntry>;

// Line format, '#' or ';' comments:
//   gripper <balls>
//   blocksworld <blocks> [seed=N]
//   blocksworld3 <blocks> [seed=N]
//   bw-para
//   logistics <cities> <packages> [seed=N]
//   pddl <name> <domain-file> <problem-file>
// Relative pddl paths are resolved against `base_dir`.
// Throws InputError with the line number on malformed lines.
SuiteSpec parse_suite(std::istream &is, const std::string &base_dir = ".");

// Generator output or file contents for one entry.
PddlTexts instantiate(const SuiteEntry &entry);

struct RunRecord {
    std::string domain;
    std::string instance;
    std::string config;
    std::uint64_t seed = 0;
    bool solved = false;
    // Means over the solved trials for hc configurations; -1 when unsolved.
    double plan_length = -1;
    double evaluations = 0;
    double expansions = 0;
    double time_ms = 0;
    std::string fail_reason;
};

struct MatrixLimits {
    std::uint64_t max_seconds = 60;
    std::uint64_t max_evaluations = 0;
    // Off: time_ms is written as 0 so output is byte-reproducible.
    bool record_time = true;
    std::uint64_t base_seed = 0;
    std::size_t hc_trials = 5;
};

// The eight ablation configurations in canonical order HEF .. ---.
std::vector<SearchConfig> all_configs();
// "all8" or a comma-separated list of letter triples.
std::vector<SearchConfig> parse_configs(const std::string &list);

std::vector<RunRecord> run_matrix(const SuiteSpec &suite,
                                  const std::vector<SearchConfig> &configs,
                                  const MatrixLimits &limits);

void write_csv(std::ostream &os, const std::vector<RunRecord> &records);

// Two-tailed sign test: min(1, 2 * P[Binomial(n, 1/2) >= k]); 1 for n = 0.
double sign_test(std::size_t n_diff, std::size_t k_better);

struct SignTestRow {
    std::string domain;
    std::string config_a;
    std::string config_b;
    std::size_t n = 0;
    std::size_t a_better = 0;
    std::size_t b_better = 0;
    double p = 1.0;
    bool significant = false;
};

// For every domain and every pair of configurations: an instance counts for
// A when A solved it and B did not, or both solved it and A needed fewer
// evaluations. k is the larger of the two win counts.
std::vector<SignTestRow> sign_test_summary(const std::vector<RunRecord> &records,
                                           double alpha = 0.01);

void write_sign_test_csv(std::ostream &os, const std::vector<SignTestRow> &rows);

} // namespace ff::bench
