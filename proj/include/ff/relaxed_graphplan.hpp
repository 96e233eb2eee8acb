#pragma once

// Relaxed planning graph construction, relaxed plan extraction and the
// heuristics built on top of them (relaxed plan length, additive weights,
// helpful actions). Works on the connectivity graph only, so one graph can be
// shared read-only by several workspaces.

#include "ff/connectivity.hpp"
#include "ff/ext_nat.hpp"
#include "ff/task.hpp"

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace ff {

struct RpgResult {
    // First fact layer per fact; infinite if never reached before stopping.
    std::vector<ExtNat> fact_layer;
    // First layer at which an effect's precondition and condition hold, per
    // EffectIndex. Effects that would only appear at layer m or later stay
    // infinite because construction stops there.
    std::vector<ExtNat> effect_layer;
    // First fact layer containing every goal.
    ExtNat m = ExtNat::infinity();
    bool reachable = false;
    // Number of fact layers built (layer indices 0 .. num_fact_layers-1).
    std::size_t num_fact_layers = 0;
};

using WeightTable = std::vector<ExtNat>;

struct LayeredRelaxedPlan {
    // layers[i-1] holds the effects selected at plan layer i (their effect
    // layer is i-1), in selection order.
    std::vector<std::vector<EffectRef>> layers;
    // Goals placed at fact layer 1 during extraction, in insertion order,
    // followed by the top-level goals that already hold in the state (empty
    // when every goal holds).
    std::vector<FactId> g1;
    // Sum over layers of the number of distinct actions selected there.
    std::size_t total_actions = 0;

    // Action ids in execution order: ascending layers, selection order within
    // a layer, one entry per distinct action per layer.
    std::vector<ActionId> flatten() const;
};

// Reusable evaluation scratchpad bound to one connectivity graph. Not safe for
// concurrent use; give every worker its own workspace.
class RpgWorkspace {
public:
    explicit RpgWorkspace(const ConnectivityGraph &graph);

    const ConnectivityGraph &graph() const { return *graph_; }

    const RpgResult &build(const State &state, std::span<const FactId> goals);
    // Extracts from the most recent build(); throws std::logic_error when that
    // build did not reach the goals.
    const LayeredRelaxedPlan &extract(std::span<const FactId> goals);
    const WeightTable &weights(const State &state);

    const RpgResult &rpg() const { return rpg_; }
    const LayeredRelaxedPlan &plan() const { return plan_; }

private:
    const ConnectivityGraph *graph_;
    RpgResult rpg_;
    LayeredRelaxedPlan plan_;
    WeightTable weights_;

    std::vector<std::uint32_t> counters_;
    std::vector<char> goal_flag_;
    std::vector<EffectIndex> unconditional_;
    std::vector<FactId> current_;
    std::vector<FactId> next_;
    std::vector<EffectIndex> scheduled_;
};

RpgResult build_rpg(const ConnectivityGraph &graph, const State &state,
                    std::span<const FactId> goals);

// Throws std::logic_error if `rpg` is not reachable.
LayeredRelaxedPlan extract_relaxed_plan(const RpgResult &rpg,
                                        const ConnectivityGraph &graph,
                                        std::span<const FactId> goals);

// Sum of the first fact layers of the effect's precondition and condition;
// the maximum value when one of them was not reached.
std::uint64_t difficulty(const RpgResult &rpg, const ConnectivityGraph &graph,
                         EffectIndex effect);

ExtNat h_ff(const ConnectivityGraph &graph, const State &state,
            std::span<const FactId> goals);

WeightTable compute_weights(const ConnectivityGraph &graph, const State &state);

ExtNat h_add(const ConnectivityGraph &graph, const State &state,
             std::span<const FactId> goals);

// Applicable actions with an appearing effect that adds a fact of the relaxed
// plan's first-layer goal set. Ascending ids.
std::vector<ActionId> helpful_actions(const ConnectivityGraph &graph,
                                      const State &state,
                                      const LayeredRelaxedPlan &plan);

// One "<layer> <fact>" line per reached fact, ascending by layer then id.
void dump_layers(std::ostream &os, const RpgResult &rpg, const Task &task);

} // namespace ff
