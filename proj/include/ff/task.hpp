#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ff {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

// Raised when an action is applied in a state that does not satisfy its
// precondition. Callers are expected to test applicability first.
class InapplicableAction : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed external input (unknown action ids, bad plan files, ...).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sorts and deduplicates a fact list in place.
void canonicalize(std::vector<FactId> &facts);

// Both ranges sorted ascending.
bool is_subset(std::span<const FactId> sub, std::span<const FactId> super);

struct ConditionalEffect {
    std::vector<FactId> condition;
    std::vector<FactId> adds;
    std::vector<FactId> deletes;

    friend bool operator==(const ConditionalEffect &,
                           const ConditionalEffect &) = default;
};

struct GroundAction {
    ActionId id = 0;
    std::string name;
    std::vector<std::string> args;
    std::vector<FactId> precondition;
    // A STRIPS action carries exactly one effect with an empty condition.
    std::vector<ConditionalEffect> effects;

    // "(name arg1 arg2)"
    std::string display() const;

    friend bool operator==(const GroundAction &, const GroundAction &) = default;
};

// Set of true facts, stored as an ascending identifier sequence.
class State {
public:
    State() = default;
    explicit State(std::vector<FactId> facts);
    State(std::initializer_list<FactId> facts);

    bool contains(FactId f) const;
    bool contains_all(std::span<const FactId> facts) const;
    std::span<const FactId> facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }
    std::size_t hash() const;

    friend bool operator==(const State &, const State &) = default;
    friend auto operator<=>(const State &, const State &) = default;

private:
    std::vector<FactId> facts_;
};

struct StateHash {
    std::size_t operator()(const State &s) const { return s.hash(); }
};

struct Task {
    std::vector<std::string> facts;
    std::vector<GroundAction> actions;
    State initial;
    std::vector<FactId> goals;
    // Goal facts with no achiever that are false initially. Non-empty means
    // the task is unsolvable.
    std::vector<FactId> unreachable_goals;

    std::size_t num_facts() const { return facts.size(); }
    std::size_t num_actions() const { return actions.size(); }

    friend bool operator==(const Task &, const Task &) = default;
};

struct Plan {
    std::vector<ActionId> steps;

    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
    friend bool operator==(const Plan &, const Plan &) = default;
};

struct ValidationReport {
    bool valid = false;
    std::optional<std::size_t> failing_step;
    State final_state;
    bool goals_satisfied = false;
};

bool applicable(const State &state, const GroundAction &action);

// Result of applying `action`: (S ∪ A(S,o)) \ D(S,o), where A and D collect the
// adds and deletes of every effect whose condition holds in S. A fact that is
// both added and deleted by appearing effects ends up false.
// Throws InapplicableAction when the precondition does not hold.
State apply(const State &state, const GroundAction &action);

// Delete relaxation: the same task with every delete list emptied.
Task relax(const Task &task);

// Throws InputError if a step references an unknown action id.
ValidationReport validate_plan(const Task &task, const Plan &plan);

// Checks the structural invariants of a task: every referenced fact id is in
// the fact table, states are canonical, adds and deletes of an effect are
// disjoint. Throws std::invalid_argument describing the first violation.
void check_task(const Task &task);

// Line-oriented text dump of every table; identical tasks give identical text.
void write_task(std::ostream &os, const Task &task);

} // namespace ff
