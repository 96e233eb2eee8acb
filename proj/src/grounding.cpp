#include "ff/pddl.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

using namespace std;

namespace ff::pddl {

namespace {

using AtomId = uint32_t;

class AtomTable {
public:
    AtomId intern(const string &key) {
        auto [it, inserted] = ids_.emplace(key, static_cast<AtomId>(names_.size()));
        if (inserted)
            names_.push_back(key);
        return it->second;
    }
    size_t size() const { return names_.size(); }
    const string &name(AtomId id) const { return names_[id]; }

private:
    unordered_map<string, AtomId> ids_;
    vector<string> names_;
};

string atom_key(const string &predicate, const vector<string> &args) {
    string key = "(" + predicate;
    for (const string &a : args)
        key += " " + a;
    return key + ")";
}

// A term is either a slot in the binding vector or a constant name.
struct Term {
    int slot = -1;
    string constant;
};

struct CompiledAtom {
    string predicate;
    vector<Term> terms;
    bool is_static = false;
    // Highest binding slot used, -1 if ground.
    int last_slot = -1;
};

CompiledAtom compile(const Atom &a, const unordered_map<string, int> &slots,
                     const StaticPredicateSet &statics) {
    CompiledAtom out;
    out.predicate = a.predicate;
    out.is_static = statics.count(a.predicate) > 0;
    for (const string &t : a.terms) {
        Term term;
        if (t.front() == '?') {
            term.slot = slots.at(t);
            out.last_slot = max(out.last_slot, term.slot);
        } else {
            term.constant = t;
        }
        out.terms.push_back(std::move(term));
    }
    return out;
}

string instantiate(const CompiledAtom &a, const vector<int> &binding,
                   const vector<TypedName> &objects) {
    vector<string> args;
    args.reserve(a.terms.size());
    for (const Term &t : a.terms)
        args.push_back(t.slot >= 0 ? objects[binding[t.slot]].name : t.constant);
    return atom_key(a.predicate, args);
}

struct GroundEffect {
    vector<AtomId> condition;
    vector<AtomId> adds;
    vector<AtomId> deletes;
    bool fired = false;
};

struct Candidate {
    size_t schema = 0;
    vector<int> args;
    vector<AtomId> precondition;
    vector<GroundEffect> effects;
    bool kept = false;
};

class Grounder {
public:
    explicit Grounder(const LiftedTask &lifted)
        : lifted_(lifted), statics_(detect_statics(lifted)) {
        for (const Atom &a : lifted.init) {
            string key = atom_key(a.predicate, a.terms);
            if (statics_.count(a.predicate))
                static_true_.insert(key);
            else
                init_.push_back(atoms_.intern(key));
        }
    }

    GroundingResult run() {
        for (size_t s = 0; s < lifted_.schemata.size(); ++s)
            instantiate_schema(s);
        relaxed_fixpoint();
        return build();
    }

private:
    vector<int> objects_of(const string &type) const {
        vector<int> out;
        for (size_t i = 0; i < lifted_.objects.size(); ++i)
            if (lifted_.is_subtype(lifted_.objects[i].type, type))
                out.push_back(static_cast<int>(i));
        return out;
    }

    bool statics_hold(const vector<const CompiledAtom *> &atoms,
                      const vector<int> &binding) const {
        for (const CompiledAtom *a : atoms)
            if (!static_true_.count(instantiate(*a, binding, lifted_.objects)))
                return false;
        return true;
    }

    // Enumerates bindings of slots [first, domains.size()) in lexicographic
    // order of object index, pruning on static atoms as soon as they are ground.
    template <typename Visit>
    void enumerate(vector<int> &binding, size_t slot,
                   const vector<vector<int>> &domains,
                   const vector<vector<const CompiledAtom *>> &checks_at,
                   Visit &&visit) const {
        if (slot == domains.size()) {
            visit(binding);
            return;
        }
        for (int obj : domains[slot]) {
            binding[slot] = obj;
            if (!statics_hold(checks_at[slot], binding))
                continue;
            enumerate(binding, slot + 1, domains, checks_at, visit);
        }
    }

    void instantiate_schema(size_t schema_index) {
        const Schema &schema = lifted_.schemata[schema_index];
        unordered_map<string, int> slots;
        vector<vector<int>> domains;
        for (const TypedName &p : schema.parameters) {
            slots[p.name] = static_cast<int>(domains.size());
            domains.push_back(objects_of(p.type));
        }

        vector<CompiledAtom> pre;
        for (const Atom &a : schema.precondition)
            pre.push_back(compile(a, slots, statics_));
        vector<vector<const CompiledAtom *>> checks_at(domains.size());
        vector<const CompiledAtom *> ground_checks;
        for (const CompiledAtom &a : pre) {
            if (!a.is_static)
                continue;
            if (a.last_slot < 0)
                ground_checks.push_back(&a);
            else
                checks_at[a.last_slot].push_back(&a);
        }
        if (!statics_hold(ground_checks, {}))
            return;

        struct CompiledEffect {
            vector<vector<int>> forall_domains;
            vector<CompiledAtom> condition, adds, deletes;
        };
        vector<CompiledEffect> effects;
        for (const LiftedEffect &e : schema.effects) {
            CompiledEffect ce;
            unordered_map<string, int> inner = slots;
            for (const TypedName &v : e.forall) {
                inner[v.name] = static_cast<int>(domains.size() +
                                                 ce.forall_domains.size());
                ce.forall_domains.push_back(objects_of(v.type));
            }
            for (const Atom &a : e.condition)
                ce.condition.push_back(compile(a, inner, statics_));
            for (const Atom &a : e.adds)
                ce.adds.push_back(compile(a, inner, statics_));
            for (const Atom &a : e.deletes)
                ce.deletes.push_back(compile(a, inner, statics_));
            effects.push_back(std::move(ce));
        }

        vector<int> binding(domains.size());
        enumerate(binding, 0, domains, checks_at, [&](const vector<int> &args) {
            Candidate c;
            c.schema = schema_index;
            c.args = args;
            for (const CompiledAtom &a : pre)
                if (!a.is_static)
                    c.precondition.push_back(
                        atoms_.intern(instantiate(a, args, lifted_.objects)));
            for (const CompiledEffect &ce : effects) {
                vector<int> full = args;
                full.resize(args.size() + ce.forall_domains.size());
                ground_effect(ce.forall_domains, 0, full, args.size(), ce, c);
            }
            candidates_.push_back(std::move(c));
        });
    }

    template <typename CompiledEffect>
    void ground_effect(const vector<vector<int>> &forall_domains, size_t k,
                       vector<int> &binding, size_t offset,
                       const CompiledEffect &ce, Candidate &c) {
        if (k < forall_domains.size()) {
            for (int obj : forall_domains[k]) {
                binding[offset + k] = obj;
                ground_effect(forall_domains, k + 1, binding, offset, ce, c);
            }
            return;
        }
        GroundEffect ge;
        for (const CompiledAtom &a : ce.condition) {
            string key = instantiate(a, binding, lifted_.objects);
            if (a.is_static) {
                if (!static_true_.count(key))
                    return; // condition can never hold
                continue;
            }
            ge.condition.push_back(atoms_.intern(key));
        }
        for (const CompiledAtom &a : ce.adds)
            ge.adds.push_back(atoms_.intern(instantiate(a, binding, lifted_.objects)));
        for (const CompiledAtom &a : ce.deletes)
            ge.deletes.push_back(
                atoms_.intern(instantiate(a, binding, lifted_.objects)));
        c.effects.push_back(std::move(ge));
    }

    void relaxed_fixpoint() {
        reached_.assign(atoms_.size(), false);
        for (AtomId a : init_)
            reached_[a] = true;
        auto all_reached = [&](const vector<AtomId> &atoms) {
            return all_of(atoms.begin(), atoms.end(),
                          [&](AtomId a) { return reached_[a]; });
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (Candidate &c : candidates_) {
                if (!c.kept) {
                    if (!all_reached(c.precondition))
                        continue;
                    c.kept = true;
                    changed = true;
                }
                for (GroundEffect &e : c.effects) {
                    if (e.fired || !all_reached(e.condition))
                        continue;
                    e.fired = true;
                    changed = true;
                    for (AtomId a : e.adds)
                        reached_[a] = true;
                }
            }
        }
    }

    GroundingResult build() {
        Task task;
        vector<int64_t> fact_of(atoms_.size(), -1);
        auto assign = [&](AtomId a) {
            if (fact_of[a] < 0) {
                fact_of[a] = static_cast<int64_t>(task.facts.size());
                task.facts.push_back(atoms_.name(a));
            }
            return static_cast<FactId>(fact_of[a]);
        };

        for (AtomId a : init_)
            assign(a);
        for (const Candidate &c : candidates_)
            if (c.kept)
                for (const GroundEffect &e : c.effects)
                    if (e.fired)
                        for (AtomId a : e.adds)
                            assign(a);

        vector<FactId> initial;
        for (AtomId a : init_)
            initial.push_back(static_cast<FactId>(fact_of[a]));
        task.initial = State(std::move(initial));

        for (const Candidate &c : candidates_) {
            if (!c.kept)
                continue;
            GroundAction action;
            action.id = static_cast<ActionId>(task.actions.size());
            action.name = lifted_.schemata[c.schema].name;
            for (int obj : c.args)
                action.args.push_back(lifted_.objects[obj].name);
            for (AtomId a : c.precondition)
                action.precondition.push_back(static_cast<FactId>(fact_of[a]));
            canonicalize(action.precondition);

            action.effects.emplace_back();
            for (size_t i = 0; i < c.effects.size(); ++i) {
                const GroundEffect &ge = c.effects[i];
                if (!ge.fired)
                    continue;
                ConditionalEffect eff;
                for (AtomId a : ge.condition)
                    eff.condition.push_back(static_cast<FactId>(fact_of[a]));
                canonicalize(eff.condition);
                vector<FactId> cond;
                set_difference(eff.condition.begin(), eff.condition.end(),
                               action.precondition.begin(),
                               action.precondition.end(), back_inserter(cond));
                eff.condition = std::move(cond);
                for (AtomId a : ge.adds)
                    eff.adds.push_back(static_cast<FactId>(fact_of[a]));
                // Deleting a fact that can never be true is a no-op.
                for (AtomId a : ge.deletes)
                    if (fact_of[a] >= 0)
                        eff.deletes.push_back(static_cast<FactId>(fact_of[a]));

                if (eff.condition.empty()) {
                    ConditionalEffect &base = action.effects.front();
                    base.adds.insert(base.adds.end(), eff.adds.begin(),
                                     eff.adds.end());
                    base.deletes.insert(base.deletes.end(), eff.deletes.begin(),
                                        eff.deletes.end());
                    continue;
                }
                normalize(eff);
                if (!eff.adds.empty() || !eff.deletes.empty())
                    action.effects.push_back(std::move(eff));
            }
            normalize(action.effects.front());
            task.actions.push_back(std::move(action));
        }

        for (const Atom &g : lifted_.goal) {
            string key = atom_key(g.predicate, g.terms);
            const bool is_static = statics_.count(g.predicate) > 0;
            if (is_static && static_true_.count(key))
                continue;
            AtomId id = atoms_.intern(key);
            fact_of.resize(atoms_.size(), -1);
            const bool reachable =
                !is_static && id < reached_.size() && reached_[id];
            FactId f = assign(id);
            task.goals.push_back(f);
            if (!reachable)
                task.unreachable_goals.push_back(f);
        }
        canonicalize(task.goals);
        canonicalize(task.unreachable_goals);

        check_task(task);
        ConnectivityGraph graph(task);
        return {std::move(task), std::move(graph)};
    }

    // Deletes win within an effect, so a fact both added and deleted by the
    // same effect is dropped from its add list.
    static void normalize(ConditionalEffect &eff) {
        canonicalize(eff.adds);
        canonicalize(eff.deletes);
        vector<FactId> adds;
        set_difference(eff.adds.begin(), eff.adds.end(), eff.deletes.begin(),
                       eff.deletes.end(), back_inserter(adds));
        eff.adds = std::move(adds);
    }

    const LiftedTask &lifted_;
    StaticPredicateSet statics_;
    unordered_set<string> static_true_;
    vector<AtomId> init_;
    AtomTable atoms_;
    vector<Candidate> candidates_;
    vector<char> reached_;
};

} // namespace

GroundingResult ground(const LiftedTask &lifted) {
    return Grounder(lifted).run();
}

} // namespace ff::pddl
