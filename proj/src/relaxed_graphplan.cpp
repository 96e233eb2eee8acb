#include "ff/relaxed_graphplan.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

using namespace std;

namespace ff {

vector<ActionId> LayeredRelaxedPlan::flatten() const {
    vector<ActionId> out;
    for (const auto &layer : layers) {
        const size_t begin = out.size();
        for (const EffectRef &ref : layer)
            if (find(out.begin() + begin, out.end(), ref.action) == out.end())
                out.push_back(ref.action);
    }
    return out;
}

RpgWorkspace::RpgWorkspace(const ConnectivityGraph &graph)
    : graph_(&graph), counters_(graph.num_effects(), 0),
      goal_flag_(graph.num_facts(), 0) {
    for (EffectIndex e = 0; e < graph.num_effects(); ++e)
        if (graph.requirements(e).empty())
            unconditional_.push_back(e);
}

const RpgResult &RpgWorkspace::build(const State &state,
                                     span<const FactId> goals) {
    const ConnectivityGraph &g = *graph_;
    rpg_.fact_layer.assign(g.num_facts(), ExtNat::infinity());
    rpg_.effect_layer.assign(g.num_effects(), ExtNat::infinity());
    rpg_.m = ExtNat::infinity();
    rpg_.reachable = false;
    rpg_.num_fact_layers = 0;
    fill(counters_.begin(), counters_.end(), 0);

    size_t goals_left = 0;
    for (FactId f : goals)
        if (!goal_flag_[f]) {
            goal_flag_[f] = 1;
            ++goals_left;
        }

    current_.assign(state.facts().begin(), state.facts().end());
    for (FactId f : current_)
        rpg_.fact_layer[f] = 0;

    for (uint32_t layer = 0;; ++layer) {
        rpg_.num_fact_layers = layer + 1;
        for (FactId f : current_)
            if (goal_flag_[f])
                --goals_left;
        if (goals_left == 0) {
            rpg_.m = layer;
            rpg_.reachable = true;
            break;
        }

        scheduled_.clear();
        if (layer == 0)
            scheduled_ = unconditional_;
        for (FactId f : current_)
            for (EffectIndex e : g.required_by(f))
                if (++counters_[e] == g.requirements(e).size())
                    scheduled_.push_back(e);

        next_.clear();
        for (EffectIndex e : scheduled_) {
            rpg_.effect_layer[e] = layer;
            for (FactId f : g.adds(e))
                if (rpg_.fact_layer[f].is_infinite()) {
                    rpg_.fact_layer[f] = layer + 1;
                    next_.push_back(f);
                }
        }
        if (next_.empty())
            break;
        swap(current_, next_);
    }

    for (FactId f : goals)
        goal_flag_[f] = 0;
    return rpg_;
}

uint64_t difficulty(const RpgResult &rpg, const ConnectivityGraph &graph,
                    EffectIndex effect) {
    uint64_t sum = 0;
    for (FactId f : graph.requirements(effect)) {
        if (rpg.fact_layer[f].is_infinite())
            return numeric_limits<uint64_t>::max();
        sum += rpg.fact_layer[f].value();
    }
    return sum;
}

LayeredRelaxedPlan extract_relaxed_plan(const RpgResult &rpg,
                                        const ConnectivityGraph &graph,
                                        span<const FactId> goals) {
    if (!rpg.reachable)
        throw logic_error("relaxed plan extraction on an unreachable graph");
    constexpr uint32_t kUnmarked = numeric_limits<uint32_t>::max();
    const auto m = static_cast<uint32_t>(rpg.m.value());
    const auto layer_of = [&](FactId f) {
        return static_cast<uint32_t>(rpg.fact_layer[f].value());
    };

    vector<vector<FactId>> goal_sets(m + 1);
    vector<char> in_goal_set(graph.num_facts(), 0);
    // Smallest plan layer whose selections added the fact; a selection at
    // layer i marks its adds TRUE at times i-1 and i.
    vector<uint32_t> marked_by(graph.num_facts(), kUnmarked);
    const auto marked_at = [&](FactId f, uint32_t time) {
        return marked_by[f] == time || marked_by[f] == time + 1;
    };
    const auto mark_adds = [&](EffectIndex e, uint32_t layer) {
        for (FactId f : graph.adds(e))
            marked_by[f] = min(marked_by[f], layer);
    };
    // Set when an action selected at layer(f)+1 needed f before anything at
    // that layer added it. Such an f still needs an achiever below.
    vector<char> needed_above(graph.num_facts(), 0);
    const auto achieved = [&](FactId g, uint32_t i) {
        return marked_by[g] == i || (marked_by[g] == i + 1 && !needed_above[g]);
    };

    for (FactId g : goals) {
        const uint32_t l = layer_of(g);
        if (l != 0 && !in_goal_set[g]) {
            in_goal_set[g] = 1;
            goal_sets[l].push_back(g);
        }
    }

    LayeredRelaxedPlan plan;
    plan.layers.resize(m);
    for (uint32_t i = m; i >= 1; --i) {
        for (size_t k = 0; k < goal_sets[i].size(); ++k) {
            const FactId g = goal_sets[i][k];
            if (achieved(g, i))
                continue;

            EffectIndex best = 0;
            uint64_t best_difficulty = numeric_limits<uint64_t>::max();
            for (const EffectRef &ref : graph.achievers(g)) {
                const EffectIndex e = graph.index(ref);
                if (rpg.effect_layer[e] != ExtNat(i - 1))
                    continue;
                const uint64_t d = difficulty(rpg, graph, e);
                if (d < best_difficulty) {
                    best_difficulty = d;
                    best = e;
                }
            }
            if (best_difficulty == numeric_limits<uint64_t>::max())
                throw logic_error("no achiever at the layer below a goal");

            plan.layers[i - 1].push_back(graph.ref(best));
            for (FactId f : graph.requirements(best)) {
                const uint32_t l = layer_of(f);
                if (l == 0 || marked_at(f, i - 1))
                    continue;
                if (l == i - 1)
                    needed_above[f] = 1;
                if (!in_goal_set[f]) {
                    in_goal_set[f] = 1;
                    goal_sets[l].push_back(f);
                }
            }

            // The selected effect and every effect of the same action whose
            // condition is a subset of its condition.
            const EffectRef sel = graph.ref(best);
            const auto cond = graph.condition(best);
            for (uint32_t j = 0; j < graph.num_effects_of(sel.action); ++j) {
                const EffectIndex other = graph.index({sel.action, j});
                const auto other_cond = graph.condition(other);
                if (other == best || is_subset(other_cond, cond))
                    mark_adds(other, i);
            }
        }
    }

    if (m >= 1) {
        plan.g1 = goal_sets[1];
        // Goals already true stay wanted at time 1: they are carried there by
        // NOOPs and count for helpful actions, but need no achiever.
        for (FactId g : goals)
            if (layer_of(g) == 0 &&
                find(plan.g1.begin(), plan.g1.end(), g) == plan.g1.end())
                plan.g1.push_back(g);
    }
    for (const auto &layer : plan.layers) {
        vector<ActionId> actions;
        for (const EffectRef &ref : layer)
            actions.push_back(ref.action);
        sort(actions.begin(), actions.end());
        plan.total_actions +=
            static_cast<size_t>(unique(actions.begin(), actions.end()) -
                                actions.begin());
    }
    return plan;
}

const LayeredRelaxedPlan &RpgWorkspace::extract(span<const FactId> goals) {
    plan_ = extract_relaxed_plan(rpg_, *graph_, goals);
    return plan_;
}

const WeightTable &RpgWorkspace::weights(const State &state) {
    const ConnectivityGraph &g = *graph_;
    weights_.assign(g.num_facts(), ExtNat::infinity());
    for (FactId f : state.facts())
        weights_[f] = 0;

    // Layered propagation: each round re-evaluates the effects touched by the
    // facts whose weight changed in the previous round.
    vector<EffectIndex> touched = unconditional_;
    for (FactId f : state.facts())
        for (EffectIndex e : g.required_by(f))
            touched.push_back(e);
    vector<char> seen(g.num_effects(), 0);
    vector<FactId> changed;
    while (!touched.empty()) {
        changed.clear();
        for (EffectIndex e : touched) {
            ExtNat cost = 0;
            for (FactId f : g.requirements(e))
                cost += weights_[f];
            if (cost.is_infinite())
                continue;
            const ExtNat reached = cost + 1;
            for (FactId f : g.adds(e))
                if (reached < weights_[f]) {
                    weights_[f] = reached;
                    changed.push_back(f);
                }
        }
        for (EffectIndex e : touched)
            seen[e] = 0;
        touched.clear();
        for (FactId f : changed)
            for (EffectIndex e : g.required_by(f))
                if (!seen[e]) {
                    seen[e] = 1;
                    touched.push_back(e);
                }
        sort(touched.begin(), touched.end());
    }
    return weights_;
}

RpgResult build_rpg(const ConnectivityGraph &graph, const State &state,
                    span<const FactId> goals) {
    RpgWorkspace ws(graph);
    return ws.build(state, goals);
}

ExtNat h_ff(const ConnectivityGraph &graph, const State &state,
            span<const FactId> goals) {
    RpgWorkspace ws(graph);
    if (!ws.build(state, goals).reachable)
        return ExtNat::infinity();
    return ws.extract(goals).total_actions;
}

WeightTable compute_weights(const ConnectivityGraph &graph, const State &state) {
    RpgWorkspace ws(graph);
    return ws.weights(state);
}

ExtNat h_add(const ConnectivityGraph &graph, const State &state,
             span<const FactId> goals) {
    const WeightTable w = compute_weights(graph, state);
    ExtNat sum = 0;
    for (FactId g : goals)
        sum += w[g];
    return sum;
}

vector<ActionId> helpful_actions(const ConnectivityGraph &graph,
                                 const State &state,
                                 const LayeredRelaxedPlan &plan) {
    vector<ActionId> out;
    for (FactId g : plan.g1)
        for (const EffectRef &ref : graph.achievers(g)) {
            const EffectIndex e = graph.index(ref);
            if (state.contains_all(graph.precondition(ref.action)) &&
                state.contains_all(graph.condition(e)))
                out.push_back(ref.action);
        }
    sort(out.begin(), out.end());
    out.erase(unique(out.begin(), out.end()), out.end());
    return out;
}

void dump_layers(ostream &os, const RpgResult &rpg, const Task &task) {
    vector<pair<uint64_t, FactId>> entries;
    for (FactId f = 0; f < rpg.fact_layer.size(); ++f)
        if (rpg.fact_layer[f].is_finite())
            entries.emplace_back(rpg.fact_layer[f].value(), f);
    sort(entries.begin(), entries.end());
    for (const auto &[layer, f] : entries)
        os << layer << " " << task.facts[f] << "\n";
}

} // namespace ff
