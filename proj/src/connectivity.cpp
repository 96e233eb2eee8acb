#include "ff/connectivity.hpp"

#include <algorithm>

using namespace std;

namespace ff {

ConnectivityGraph::ConnectivityGraph(const Task &task) {
    const size_t num_facts = task.num_facts();
    vector<vector<EffectRef>> achievers(num_facts);
    vector<vector<ActionId>> precondition_of(num_facts);
    vector<vector<EffectRef>> condition_of(num_facts);
    vector<vector<EffectIndex>> required_by(num_facts);

    effect_begin_.reserve(task.num_actions() + 1);
    effect_begin_.push_back(0);
    // Actions are visited in ascending id order, so every per-fact list is
    // filled in ascending order as well.
    for (const GroundAction &a : task.actions) {
        precondition_.push_back(a.precondition);
        for (FactId f : a.precondition)
            precondition_of[f].push_back(a.id);
        for (uint32_t i = 0; i < a.effects.size(); ++i) {
            const ConditionalEffect &eff = a.effects[i];
            const EffectRef ref{a.id, i};
            const auto index = static_cast<EffectIndex>(effect_refs_.size());
            effect_refs_.push_back(ref);
            condition_.push_back(eff.condition);
            adds_.push_back(eff.adds);
            deletes_.push_back(eff.deletes);

            vector<FactId> req(a.precondition);
            req.insert(req.end(), eff.condition.begin(), eff.condition.end());
            canonicalize(req);
            requirements_.push_back(req);

            for (FactId f : eff.adds)
                achievers[f].push_back(ref);
            for (FactId f : eff.condition)
                condition_of[f].push_back(ref);
            for (FactId f : req)
                required_by[f].push_back(index);
        }
        effect_begin_.push_back(static_cast<EffectIndex>(effect_refs_.size()));
    }
    for (auto &lists : achievers)
        lists.erase(unique(lists.begin(), lists.end()), lists.end());

    achievers_ = FlatLists<EffectRef>::from_nested(achievers);
    precondition_of_ = FlatLists<ActionId>::from_nested(precondition_of);
    condition_of_ = FlatLists<EffectRef>::from_nested(condition_of);
    required_by_ = FlatLists<EffectIndex>::from_nested(required_by);
}

} // namespace ff
