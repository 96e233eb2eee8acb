#pragma once

// Fixtures and naive reference implementations shared by the test binaries.
// The oracles work on std::set and the raw Task tables only; they never call
// into the connectivity graph or the relaxed planning graph code.

#include "ff/bench.hpp"
#include "ff/ext_nat.hpp"
#include "ff/pddl.hpp"
#include "ff/task.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fftest {

using FactSet = std::set<ff::FactId>;

// Builds a STRIPS task from (name, pre, add, del) rows over named facts.
struct ActionRow {
    std::string name;
    std::vector<std::string> pre, add, del;
};
ff::Task make_task(const std::vector<std::string> &facts,
                   const std::vector<ActionRow> &actions,
                   const std::vector<std::string> &init,
                   const std::vector<std::string> &goals);

// op-g1 (P | G1), op-g2 (P | G2), op-p (| P); I = {}, G = {G1, G2}.
ff::Task toy_task();
// op-a1 .. op-pb; I = {B}, G = {A, B}.
ff::Task helpful_cx_task();
// op-a (| A), op-b (A | B, del A); I = {}, G = {A, B}.
ff::Task agd_cx_task();

ff::pddl::GroundingResult ground_texts(const ff::bench::PddlTexts &texts);

ff::FactId fact(const ff::Task &task, const std::string &name);
ff::ActionId action(const ff::Task &task, const std::string &display);
std::optional<ff::ActionId> find_action(const ff::Task &task,
                                        const std::string &display);
ff::State state(const ff::Task &task, const std::vector<std::string> &facts);
std::vector<std::string> names(const ff::Task &task,
                               const std::vector<ff::ActionId> &actions);

// Naive semantics.
bool naive_applicable(const FactSet &s, const ff::GroundAction &a);
FactSet naive_apply(const FactSet &s, const ff::GroundAction &a);
// Re-executes the plan step by step; true iff every step applies and the
// goals hold at the end.
bool naive_valid(const ff::Task &task, const std::vector<ff::ActionId> &plan);
// Same, ignoring every delete list.
bool naive_relaxed_valid(const ff::Task &task,
                         const std::vector<ff::ActionId> &plan,
                         const ff::State &start,
                         const std::vector<ff::FactId> &goals);

// Level-by-level relaxed reachability: layer i holds the facts reachable by
// applying every action applicable in layer i-1. Unreached facts get ∞.
std::vector<ff::ExtNat> naive_fact_layers(const ff::Task &task,
                                          const ff::State &start);
// Additive fact weights, iterated over all actions until nothing changes.
std::vector<ff::ExtNat> naive_weights(const ff::Task &task,
                                      const ff::State &start);
ff::ExtNat naive_h_add(const ff::Task &task, const ff::State &start,
                       const std::vector<ff::FactId> &goals);

// Gripper state: robot at `robot_room`, per-ball location or gripper.
// `balls[i]` is "rooma", "roomb", "left" or "right".
ff::State gripper_state(const ff::Task &task, const std::string &robot_room,
                        const std::vector<std::string> &balls);

} // namespace fftest
