#pragma once

#include "ff/task.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace ff {

struct EffectRef {
    ActionId action = 0;
    std::uint32_t effect = 0;

    friend auto operator<=>(const EffectRef &, const EffectRef &) = default;
};

// Dense index of an effect over all actions, ordered by (action, effect).
using EffectIndex = std::uint32_t;

// Compressed list-of-lists: entry i is the span values[offsets[i], offsets[i+1]).
template <typename T>
class FlatLists {
public:
    FlatLists() : offsets_{0} {}

    void push_back(std::span<const T> items) {
        values_.insert(values_.end(), items.begin(), items.end());
        offsets_.push_back(static_cast<std::uint32_t>(values_.size()));
    }

    static FlatLists from_nested(const std::vector<std::vector<T>> &nested) {
        FlatLists out;
        for (const auto &items : nested)
            out.push_back(items);
        return out;
    }

    std::span<const T> operator[](std::size_t i) const {
        return std::span<const T>(values_.data() + offsets_[i],
                                  offsets_[i + 1] - offsets_[i]);
    }
    std::size_t size() const { return offsets_.size() - 1; }

    friend bool operator==(const FlatLists &, const FlatLists &) = default;

private:
    std::vector<T> values_;
    std::vector<std::uint32_t> offsets_;
};

// Bidirectional fact/action incidence index of a grounded task. Every list is
// ascending. Holds copies of the task's pre/add/del/condition sets, so it
// stays valid independently of the Task it was built from.
class ConnectivityGraph {
public:
    ConnectivityGraph() = default;
    explicit ConnectivityGraph(const Task &task);

    std::size_t num_facts() const { return achievers_.size(); }
    std::size_t num_actions() const { return precondition_.size(); }
    std::size_t num_effects() const { return effect_refs_.size(); }

    // Facts.
    std::span<const EffectRef> achievers(FactId f) const { return achievers_[f]; }
    std::span<const ActionId> precondition_of(FactId f) const {
        return precondition_of_[f];
    }
    std::span<const EffectRef> condition_of(FactId f) const {
        return condition_of_[f];
    }
    // Effects whose precondition or condition contains f.
    std::span<const EffectIndex> required_by(FactId f) const {
        return required_by_[f];
    }

    // Actions.
    std::span<const FactId> precondition(ActionId a) const {
        return precondition_[a];
    }
    std::size_t precondition_size(ActionId a) const {
        return precondition_[a].size();
    }
    std::size_t num_effects_of(ActionId a) const {
        return effect_begin_[a + 1] - effect_begin_[a];
    }

    // Effects.
    EffectIndex index(EffectRef ref) const {
        return effect_begin_[ref.action] + ref.effect;
    }
    EffectRef ref(EffectIndex e) const { return effect_refs_[e]; }
    std::span<const FactId> condition(EffectIndex e) const { return condition_[e]; }
    std::size_t condition_size(EffectIndex e) const { return condition_[e].size(); }
    std::span<const FactId> adds(EffectIndex e) const { return adds_[e]; }
    std::span<const FactId> deletes(EffectIndex e) const { return deletes_[e]; }
    // Sorted union of the owning action's precondition and the condition.
    std::span<const FactId> requirements(EffectIndex e) const {
        return requirements_[e];
    }

    friend bool operator==(const ConnectivityGraph &,
                           const ConnectivityGraph &) = default;

private:
    FlatLists<EffectRef> achievers_;
    FlatLists<ActionId> precondition_of_;
    FlatLists<EffectRef> condition_of_;
    FlatLists<EffectIndex> required_by_;

    FlatLists<FactId> precondition_;
    std::vector<EffectIndex> effect_begin_;

    std::vector<EffectRef> effect_refs_;
    FlatLists<FactId> condition_;
    FlatLists<FactId> adds_;
    FlatLists<FactId> deletes_;
    FlatLists<FactId> requirements_;
};

} // namespace ff
