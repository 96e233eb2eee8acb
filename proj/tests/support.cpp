#include "support.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

using namespace std;
using ff::ExtNat;
using ff::FactId;

namespace fftest {

ff::Task make_task(const vector<string> &facts, const vector<ActionRow> &actions,
                   const vector<string> &init, const vector<string> &goals) {
    ff::Task t;
    t.facts = facts;
    const auto ids = [&](const vector<string> &names) {
        vector<FactId> out;
        for (const string &n : names) {
            const auto it = find(facts.begin(), facts.end(), n);
            if (it == facts.end())
                throw invalid_argument("unknown fact " + n);
            out.push_back(static_cast<FactId>(it - facts.begin()));
        }
        ff::canonicalize(out);
        return out;
    };
    for (const ActionRow &row : actions) {
        ff::GroundAction a;
        a.id = static_cast<ff::ActionId>(t.actions.size());
        a.name = row.name;
        a.precondition = ids(row.pre);
        a.effects.push_back({{}, ids(row.add), ids(row.del)});
        t.actions.push_back(std::move(a));
    }
    t.initial = ff::State(ids(init));
    t.goals = ids(goals);
    ff::check_task(t);
    return t;
}

ff::Task toy_task() {
    return make_task({"(p)", "(g1)", "(g2)"},
                     {{"op-g1", {"(p)"}, {"(g1)"}, {}},
                      {"op-g2", {"(p)"}, {"(g2)"}, {}},
                      {"op-p", {}, {"(p)"}, {}}},
                     {}, {"(g1)", "(g2)"});
}

ff::Task helpful_cx_task() {
    return make_task({"(a)", "(b)", "(pa)", "(pb)"},
                     {{"op-a1", {}, {"(a)"}, {"(b)"}},
                      {"op-a2", {"(pa)"}, {"(a)"}, {}},
                      {"op-pa", {}, {"(pa)"}, {}},
                      {"op-b1", {}, {"(b)"}, {"(a)"}},
                      {"op-b2", {"(pb)"}, {"(b)"}, {}},
                      {"op-pb", {}, {"(pb)"}, {}}},
                     {"(b)"}, {"(a)", "(b)"});
}

ff::Task agd_cx_task() {
    return make_task({"(a)", "(b)"},
                     {{"op-a", {}, {"(a)"}, {}},
                      {"op-b", {"(a)"}, {"(b)"}, {"(a)"}}},
                     {}, {"(a)", "(b)"});
}

ff::pddl::GroundingResult ground_texts(const ff::bench::PddlTexts &texts) {
    return ff::pddl::ground(ff::pddl::parse(texts.domain, texts.problem));
}

FactId fact(const ff::Task &task, const string &name) {
    const auto it = find(task.facts.begin(), task.facts.end(), name);
    if (it == task.facts.end())
        throw invalid_argument("no fact " + name);
    return static_cast<FactId>(it - task.facts.begin());
}

optional<ff::ActionId> find_action(const ff::Task &task, const string &display) {
    for (const ff::GroundAction &a : task.actions)
        if (a.display() == display)
            return a.id;
    return nullopt;
}

ff::ActionId action(const ff::Task &task, const string &display) {
    if (const auto a = find_action(task, display))
        return *a;
    throw invalid_argument("no action " + display);
}

ff::State state(const ff::Task &task, const vector<string> &facts) {
    vector<FactId> ids;
    for (const string &f : facts)
        ids.push_back(fact(task, f));
    return ff::State(std::move(ids));
}

vector<string> names(const ff::Task &task, const vector<ff::ActionId> &actions) {
    vector<string> out;
    for (ff::ActionId a : actions)
        out.push_back(task.actions.at(a).display());
    return out;
}

bool naive_applicable(const FactSet &s, const ff::GroundAction &a) {
    for (FactId f : a.precondition)
        if (!s.count(f))
            return false;
    return true;
}

FactSet naive_apply(const FactSet &s, const ff::GroundAction &a) {
    FactSet adds, dels;
    for (const ff::ConditionalEffect &e : a.effects) {
        bool appears = true;
        for (FactId f : e.condition)
            appears = appears && s.count(f);
        if (!appears)
            continue;
        adds.insert(e.adds.begin(), e.adds.end());
        dels.insert(e.deletes.begin(), e.deletes.end());
    }
    FactSet out = s;
    out.insert(adds.begin(), adds.end());
    for (FactId f : dels)
        out.erase(f);
    return out;
}

namespace {

bool run(const ff::Task &task, const vector<ff::ActionId> &plan, FactSet s,
         const vector<FactId> &goals, bool relaxed) {
    for (ff::ActionId id : plan) {
        if (id >= task.actions.size())
            return false;
        ff::GroundAction a = task.actions[id];
        if (relaxed)
            for (auto &e : a.effects)
                e.deletes.clear();
        if (!naive_applicable(s, a))
            return false;
        s = naive_apply(s, a);
    }
    for (FactId g : goals)
        if (!s.count(g))
            return false;
    return true;
}

} // namespace

bool naive_valid(const ff::Task &task, const vector<ff::ActionId> &plan) {
    const auto f = task.initial.facts();
    return run(task, plan, FactSet(f.begin(), f.end()), task.goals, false);
}

bool naive_relaxed_valid(const ff::Task &task, const vector<ff::ActionId> &plan,
                         const ff::State &start, const vector<FactId> &goals) {
    const auto f = start.facts();
    return run(task, plan, FactSet(f.begin(), f.end()), goals, true);
}

vector<ExtNat> naive_fact_layers(const ff::Task &task, const ff::State &start) {
    vector<ExtNat> layer(task.num_facts(), ExtNat::infinity());
    FactSet current(start.facts().begin(), start.facts().end());
    for (FactId f : current)
        layer[f] = 0;
    for (uint64_t i = 1;; ++i) {
        FactSet next = current;
        for (const ff::GroundAction &a : task.actions) {
            if (!naive_applicable(current, a))
                continue;
            for (const ff::ConditionalEffect &e : a.effects) {
                bool appears = true;
                for (FactId f : e.condition)
                    appears = appears && current.count(f);
                if (appears)
                    next.insert(e.adds.begin(), e.adds.end());
            }
        }
        if (next == current)
            return layer;
        for (FactId f : next)
            if (!current.count(f))
                layer[f] = i;
        current = std::move(next);
    }
}

vector<ExtNat> naive_weights(const ff::Task &task, const ff::State &start) {
    vector<ExtNat> w(task.num_facts(), ExtNat::infinity());
    for (FactId f : start.facts())
        w[f] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const ff::GroundAction &a : task.actions)
            for (const ff::ConditionalEffect &e : a.effects) {
                FactSet req(a.precondition.begin(), a.precondition.end());
                req.insert(e.condition.begin(), e.condition.end());
                ExtNat cost = 0;
                for (FactId f : req)
                    cost += w[f];
                if (cost.is_infinite())
                    continue;
                for (FactId f : e.adds)
                    if (cost + 1 < w[f]) {
                        w[f] = cost + 1;
                        changed = true;
                    }
            }
    }
    return w;
}

ExtNat naive_h_add(const ff::Task &task, const ff::State &start,
                   const vector<FactId> &goals) {
    const vector<ExtNat> w = naive_weights(task, start);
    ExtNat sum = 0;
    for (FactId g : goals)
        sum += w[g];
    return sum;
}

ff::State gripper_state(const ff::Task &task, const string &robot_room,
                        const vector<string> &balls) {
    vector<string> facts{"(at-robby " + robot_room + ")"};
    bool left_free = true, right_free = true;
    for (size_t i = 0; i < balls.size(); ++i) {
        const string ball = "ball" + to_string(i + 1);
        if (balls[i] == "left" || balls[i] == "right") {
            facts.push_back("(carry " + ball + " " + balls[i] + ")");
            (balls[i] == "left" ? left_free : right_free) = false;
        } else {
            facts.push_back("(at " + ball + " " + balls[i] + ")");
        }
    }
    if (left_free)
        facts.push_back("(free left)");
    if (right_free)
        facts.push_back("(free right)");
    return state(task, facts);
}

} // namespace fftest
