#include "ff/task.hpp"

#include <algorithm>
#include <sstream>

using namespace std;

namespace ff {

void canonicalize(vector<FactId> &facts) {
    sort(facts.begin(), facts.end());
    facts.erase(unique(facts.begin(), facts.end()), facts.end());
}

bool is_subset(span<const FactId> sub, span<const FactId> super) {
    return includes(super.begin(), super.end(), sub.begin(), sub.end());
}

string GroundAction::display() const {
    string out = "(" + name;
    for (const string &a : args)
        out += " " + a;
    out += ")";
    return out;
}

State::State(vector<FactId> facts) : facts_(std::move(facts)) {
    canonicalize(facts_);
}

State::State(initializer_list<FactId> facts) : facts_(facts) {
    canonicalize(facts_);
}

bool State::contains(FactId f) const {
    return binary_search(facts_.begin(), facts_.end(), f);
}

bool State::contains_all(span<const FactId> facts) const {
    // Inputs are not required to be sorted here.
    return all_of(facts.begin(), facts.end(),
                  [this](FactId f) { return contains(f); });
}

size_t State::hash() const {
    // FNV-1a over the identifier sequence.
    size_t h = 1469598103934665603ull;
    for (FactId f : facts_) {
        h ^= f;
        h *= 1099511628211ull;
    }
    return h;
}

bool applicable(const State &state, const GroundAction &action) {
    return state.contains_all(action.precondition);
}

State apply(const State &state, const GroundAction &action) {
    if (!applicable(state, action))
        throw InapplicableAction("action " + action.display() +
                                 " is not applicable");
    vector<FactId> added;
    vector<FactId> deleted;
    for (const ConditionalEffect &eff : action.effects) {
        if (!state.contains_all(eff.condition))
            continue;
        added.insert(added.end(), eff.adds.begin(), eff.adds.end());
        deleted.insert(deleted.end(), eff.deletes.begin(), eff.deletes.end());
    }
    canonicalize(added);
    canonicalize(deleted);

    vector<FactId> with_adds;
    with_adds.reserve(state.size() + added.size());
    set_union(state.facts().begin(), state.facts().end(), added.begin(),
              added.end(), back_inserter(with_adds));
    vector<FactId> result;
    result.reserve(with_adds.size());
    set_difference(with_adds.begin(), with_adds.end(), deleted.begin(),
                   deleted.end(), back_inserter(result));
    return State(std::move(result));
}

Task relax(const Task &task) {
    Task relaxed = task;
    for (GroundAction &a : relaxed.actions)
        for (ConditionalEffect &eff : a.effects)
            eff.deletes.clear();
    return relaxed;
}

ValidationReport validate_plan(const Task &task, const Plan &plan) {
    for (ActionId id : plan.steps)
        if (id >= task.actions.size())
            throw InputError("plan references unknown action id " +
                             to_string(id));
    ValidationReport report;
    State current = task.initial;
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        const GroundAction &a = task.actions[plan.steps[i]];
        if (!applicable(current, a)) {
            report.valid = false;
            report.failing_step = i;
            report.final_state = std::move(current);
            report.goals_satisfied =
                report.final_state.contains_all(task.goals);
            return report;
        }
        current = apply(current, a);
    }
    report.goals_satisfied = current.contains_all(task.goals);
    report.valid = report.goals_satisfied;
    report.final_state = std::move(current);
    return report;
}

namespace {
void write_ids(ostream &os, span<const FactId> ids) {
    os << "[";
    for (size_t i = 0; i < ids.size(); ++i)
        os << (i ? " " : "") << ids[i];
    os << "]";
}
} // namespace

void write_task(ostream &os, const Task &task) {
    os << "facts " << task.facts.size() << "\n";
    for (size_t f = 0; f < task.facts.size(); ++f)
        os << f << " " << task.facts[f] << "\n";
    os << "actions " << task.actions.size() << "\n";
    for (const GroundAction &a : task.actions) {
        os << a.id << " " << a.display() << " pre ";
        write_ids(os, a.precondition);
        for (const ConditionalEffect &eff : a.effects) {
            os << " eff ";
            write_ids(os, eff.condition);
            write_ids(os, eff.adds);
            write_ids(os, eff.deletes);
        }
        os << "\n";
    }
    os << "init ";
    write_ids(os, task.initial.facts());
    os << "\ngoal ";
    write_ids(os, task.goals);
    os << "\nunreachable ";
    write_ids(os, task.unreachable_goals);
    os << "\n";
}

namespace {
void check_ids(span<const FactId> ids, size_t num_facts, const string &where) {
    for (FactId f : ids)
        if (f >= num_facts)
            throw invalid_argument(where + " references fact " + to_string(f) +
                                   " outside the fact table");
}

void check_sorted(span<const FactId> ids, const string &where) {
    if (!is_sorted(ids.begin(), ids.end()) ||
        adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw invalid_argument(where + " is not a sorted set");
}
} // namespace

void check_task(const Task &task) {
    const size_t n = task.num_facts();
    check_ids(task.initial.facts(), n, "initial state");
    check_ids(task.goals, n, "goal set");
    check_sorted(task.goals, "goal set");
    check_ids(task.unreachable_goals, n, "unreachable goal set");
    for (size_t i = 0; i < task.actions.size(); ++i) {
        const GroundAction &a = task.actions[i];
        const string where = "action " + a.display();
        if (a.id != i)
            throw invalid_argument(where + " has id " + to_string(a.id) +
                                   " at index " + to_string(i));
        check_ids(a.precondition, n, where);
        check_sorted(a.precondition, where + " precondition");
        for (const ConditionalEffect &eff : a.effects) {
            check_ids(eff.condition, n, where);
            check_ids(eff.adds, n, where);
            check_ids(eff.deletes, n, where);
            check_sorted(eff.condition, where + " effect condition");
            check_sorted(eff.adds, where + " add list");
            check_sorted(eff.deletes, where + " delete list");
            vector<FactId> both;
            set_intersection(eff.adds.begin(), eff.adds.end(),
                             eff.deletes.begin(), eff.deletes.end(),
                             back_inserter(both));
            if (!both.empty())
                throw invalid_argument(where +
                                       " adds and deletes the same fact");
        }
    }
}

} // namespace ff
