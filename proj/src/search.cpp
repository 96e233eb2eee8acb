#include "ff/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

using namespace std;

namespace ff {

string_view to_string(HeuristicKind kind) {
    return kind == HeuristicKind::ff ? "ff" : "add";
}

string_view to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::ehc:
        return "ehc";
    case Strategy::hc:
        return "hc";
    case Strategy::gbfs:
        return "gbfs";
    }
    return "?";
}

string_view to_string(SearchStatus status) {
    switch (status) {
    case SearchStatus::solved:
        return "solved";
    case SearchStatus::ehc_failed:
        return "ehc_failed";
    case SearchStatus::unsolvable:
        return "unsolvable";
    case SearchStatus::resource_exhausted:
        return "resource_exhausted";
    }
    return "?";
}

string SearchConfig::letters() const {
    string s;
    s += helpful ? 'H' : '-';
    s += strategy == Strategy::ehc ? 'E' : '-';
    s += heuristic == HeuristicKind::ff ? 'F' : '-';
    return s;
}

SearchConfig SearchConfig::from_letters(string_view letters) {
    const auto bad = [&] {
        return invalid_argument("bad configuration letters '" +
                                string(letters) + "'");
    };
    if (letters.size() != 3)
        throw bad();
    const auto flag = [&](size_t i, char on) {
        if (letters[i] == on)
            return true;
        if (letters[i] == '-')
            return false;
        throw bad();
    };
    SearchConfig c;
    c.helpful = flag(0, 'H');
    c.strategy = flag(1, 'E') ? Strategy::ehc : Strategy::hc;
    c.heuristic = flag(2, 'F') ? HeuristicKind::ff : HeuristicKind::add;
    c.agd = c.agenda = c.fallback = false;
    return c;
}

bool added_goal_deletion_check(const ConnectivityGraph &graph,
                               const State &parent, ActionId action,
                               const State &child,
                               const LayeredRelaxedPlan &child_plan,
                               span<const FactId> target_goals) {
    const auto contains = [](span<const FactId> list, FactId f) {
        return binary_search(list.begin(), list.end(), f);
    };
    const EffectIndex first = graph.index({action, 0});
    const auto num_effects = static_cast<EffectIndex>(graph.num_effects_of(action));
    for (FactId g : target_goals) {
        if (parent.contains(g) || !child.contains(g))
            continue;
        bool added = false;
        for (EffectIndex e = first; e < first + num_effects && !added; ++e)
            added = parent.contains_all(graph.condition(e)) &&
                    contains(graph.adds(e), g);
        if (!added)
            continue;
        for (const auto &layer : child_plan.layers)
            for (const EffectRef &ref : layer)
                if (contains(graph.deletes(graph.index(ref)), g))
                    return true;
    }
    return false;
}

GoalAgenda compute_goal_agenda(const Task &task, const ConnectivityGraph &graph) {
    GoalAgenda agenda;
    const vector<FactId> &goals = task.goals;
    const size_t n = goals.size();
    if (n == 0)
        return agenda;

    const auto deletes = [&](EffectRef ref, FactId f) {
        const auto own = graph.deletes(graph.index(ref));
        const auto base = graph.deletes(graph.index({ref.action, 0}));
        return binary_search(own.begin(), own.end(), f) ||
               binary_search(base.begin(), base.end(), f);
    };

    // Facts reachable under delete relaxation from `start` using only effects
    // that leave `kept` true.
    vector<uint32_t> counters(graph.num_effects());
    const auto reachable_keeping = [&](vector<FactId> start, FactId kept) {
        vector<char> reached(graph.num_facts(), 0);
        fill(counters.begin(), counters.end(), 0);
        vector<FactId> frontier;
        const auto reach = [&](FactId f) {
            if (!reached[f]) {
                reached[f] = 1;
                frontier.push_back(f);
            }
        };
        const auto fire = [&](EffectIndex e) {
            if (!deletes(graph.ref(e), kept))
                for (FactId f : graph.adds(e))
                    reach(f);
        };
        for (EffectIndex e = 0; e < graph.num_effects(); ++e)
            if (graph.requirements(e).empty())
                fire(e);
        for (FactId f : start)
            reach(f);
        while (!frontier.empty()) {
            const FactId f = frontier.back();
            frontier.pop_back();
            for (EffectIndex e : graph.required_by(f))
                if (++counters[e] == graph.requirements(e).size())
                    fire(e);
        }
        return reached;
    };

    // before[b] lists the goals that must come after b. b goes first when
    // every achiever of b deletes a, or when, for every achiever of a, b
    // cannot be reached without deleting a again from the initial state
    // with that achiever's effect applied.
    vector<vector<char>> order(n, vector<char>(n, 0));
    for (size_t b = 0; b < n; ++b) {
        const auto achievers = graph.achievers(goals[b]);
        if (achievers.empty()) {
            if (!task.initial.contains(goals[b]))
                agenda.unachievable.push_back(goals[b]);
            continue;
        }
        for (size_t a = 0; a < n; ++a)
            if (a != b &&
                all_of(achievers.begin(), achievers.end(),
                       [&](EffectRef ref) { return deletes(ref, goals[a]); }))
                order[b][a] = 1;
    }
    for (size_t a = 0; a < n; ++a) {
        const auto achievers = graph.achievers(goals[a]);
        if (achievers.empty())
            continue;
        vector<char> blocked(n, 1);
        for (EffectRef ref : achievers) {
            vector<EffectIndex> applied{graph.index({ref.action, 0})};
            if (ref.effect != 0)
                applied.push_back(graph.index(ref));
            vector<FactId> start;
            for (FactId f : task.initial.facts()) {
                bool deleted = false;
                for (EffectIndex e : applied) {
                    const auto del = graph.deletes(e);
                    deleted = deleted || binary_search(del.begin(), del.end(), f);
                }
                if (!deleted)
                    start.push_back(f);
            }
            for (EffectIndex e : applied)
                start.insert(start.end(), graph.adds(e).begin(), graph.adds(e).end());
            const vector<char> reached = reachable_keeping(std::move(start), goals[a]);
            for (size_t b = 0; b < n; ++b)
                blocked[b] = blocked[b] && !reached[goals[b]];
        }
        for (size_t b = 0; b < n; ++b)
            if (b != a && blocked[b] && !graph.achievers(goals[b]).empty())
                order[b][a] = 1;
    }
    vector<vector<size_t>> before(n);
    for (size_t b = 0; b < n; ++b)
        for (size_t a = 0; a < n; ++a)
            if (order[b][a])
                before[b].push_back(a);

    // Tarjan's strongly connected components.
    constexpr size_t kNone = numeric_limits<size_t>::max();
    vector<size_t> index(n, kNone), low(n, 0), comp(n, kNone);
    vector<char> on_stack(n, 0);
    vector<size_t> stack;
    size_t counter = 0, num_comps = 0;
    function<void(size_t)> visit = [&](size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (size_t w : before[v]) {
            if (index[w] == kNone) {
                visit(w);
                low[v] = min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = num_comps;
            } while (w != v);
            ++num_comps;
        }
    };
    for (size_t v = 0; v < n; ++v)
        if (index[v] == kNone)
            visit(v);

    vector<vector<size_t>> succ(num_comps);
    vector<size_t> indegree(num_comps, 0);
    for (size_t b = 0; b < n; ++b)
        for (size_t a : before[b])
            if (comp[a] != comp[b]) {
                succ[comp[b]].push_back(comp[a]);
                ++indegree[comp[a]];
            }

    vector<size_t> level;
    for (size_t c = 0; c < num_comps; ++c)
        if (indegree[c] == 0)
            level.push_back(c);
    while (!level.empty()) {
        vector<FactId> entry;
        vector<size_t> next;
        for (size_t c : level) {
            for (size_t v = 0; v < n; ++v)
                if (comp[v] == c)
                    entry.push_back(goals[v]);
            for (size_t d : succ[c])
                if (--indegree[d] == 0)
                    next.push_back(d);
        }
        sort(entry.begin(), entry.end());
        agenda.entries.push_back(std::move(entry));
        level = std::move(next);
    }
    return agenda;
}

GoalAgenda compute_goal_agenda(const Task &task) {
    return compute_goal_agenda(task, ConnectivityGraph(task));
}

namespace {

struct LimitReached {};

using Clock = chrono::steady_clock;

// Shared state of one search run: heuristic workspace, budget and counters.
class Context {
public:
    Context(const Task &task, const ConnectivityGraph &graph,
            const SearchConfig &config)
        : task(task), graph(graph), config(config), workspace_(graph),
          counts_(graph.num_actions(), 0), start_(Clock::now()) {
        for (ActionId a = 0; a < graph.num_actions(); ++a)
            if (graph.precondition_size(a) == 0)
                no_precondition_.push_back(a);
    }

    const Task &task;
    const ConnectivityGraph &graph;
    const SearchConfig &config;
    SearchStats stats;
    vector<TraceEntry> trace;
    bool budget_hit = false;

    // Heuristic value of `state`; when `want_plan` (or under h_ff) the relaxed
    // plan of the same state is available through plan() afterwards.
    ExtNat evaluate(const State &state, span<const FactId> goals,
                    bool want_plan) {
        check_budget();
        ++stats.evaluations;
        has_plan_ = false;
        if (config.heuristic == HeuristicKind::add) {
            const WeightTable &w = workspace_.weights(state);
            ExtNat h = 0;
            for (FactId g : goals)
                h += w[g];
            if (want_plan && h.is_finite())
                extract(state, goals);
            return h;
        }
        if (!extract(state, goals))
            return ExtNat::infinity();
        return workspace_.plan().total_actions;
    }

    const LayeredRelaxedPlan &plan() const {
        if (!has_plan_)
            throw logic_error("no relaxed plan for the last evaluation");
        return workspace_.plan();
    }

    vector<ActionId> helpful(const State &state) const {
        return helpful_actions(graph, state, plan());
    }

    vector<ActionId> applicable_actions(const State &state) {
        vector<ActionId> out = no_precondition_;
        for (FactId f : state.facts())
            for (ActionId a : graph.precondition_of(f))
                if (++counts_[a] == graph.precondition_size(a))
                    out.push_back(a);
        for (FactId f : state.facts())
            for (ActionId a : graph.precondition_of(f))
                counts_[a] = 0;
        sort(out.begin(), out.end());
        return out;
    }

    State successor(const State &state, ActionId a) const {
        return apply(state, task.actions[a]);
    }

    void finish() {
        stats.elapsed_ms = static_cast<uint64_t>(
            chrono::duration_cast<chrono::milliseconds>(Clock::now() - start_)
                .count());
    }

private:
    bool extract(const State &state, span<const FactId> goals) {
        if (!workspace_.build(state, goals).reachable)
            return false;
        workspace_.extract(goals);
        has_plan_ = true;
        return true;
    }

    void check_budget() {
        if (config.max_evaluations != 0 &&
            stats.evaluations >= config.max_evaluations) {
            budget_hit = true;
            throw LimitReached{};
        }
        if (config.max_seconds != 0 &&
            Clock::now() - start_ >= chrono::seconds(config.max_seconds)) {
            budget_hit = true;
            throw LimitReached{};
        }
    }

    RpgWorkspace workspace_;
    bool has_plan_ = false;
    vector<uint32_t> counts_;
    vector<ActionId> no_precondition_;
    Clock::time_point start_;
};

SearchOutcome make_outcome(SearchStatus status, optional<Plan> plan = nullopt) {
    SearchOutcome out;
    out.status = status;
    out.plan = std::move(plan);
    return out;
}

SearchOutcome run_ehc(Context &ctx, const State &start,
                      span<const FactId> goals) {
    const SearchConfig &cfg = ctx.config;
    const bool want_plan = cfg.helpful || cfg.agd;

    ExtNat h = ctx.evaluate(start, goals, want_plan);
    if (h.is_infinite())
        return make_outcome(SearchStatus::unsolvable);
    vector<ActionId> current_helpful;
    if (cfg.helpful && h != ExtNat(0))
        current_helpful = ctx.helpful(start);

    struct Node {
        State state;
        uint32_t parent;
        ActionId action;
        uint32_t depth;
        vector<ActionId> helpful;
    };
    constexpr uint32_t kRoot = numeric_limits<uint32_t>::max();

    State current = start;
    Plan plan;
    ctx.stats.anchor_h.push_back(h);
    while (h != ExtNat(0)) {
        const uint64_t iteration = ++ctx.stats.ehc_iterations;
        vector<Node> nodes;
        nodes.push_back({current, kRoot, 0, 0, std::move(current_helpful)});
        deque<uint32_t> queue{0};
        unordered_set<State, StateHash> visited{current};
        uint32_t found = kRoot;
        ExtNat found_h;

        while (!queue.empty() && found == kRoot) {
            const uint32_t idx = queue.front();
            queue.pop_front();
            ++ctx.stats.expansions;
            const State state = nodes[idx].state;
            const uint32_t depth = nodes[idx].depth + 1;
            const vector<ActionId> candidates =
                cfg.helpful ? nodes[idx].helpful : ctx.applicable_actions(state);
            for (ActionId a : candidates) {
                State child = ctx.successor(state, a);
                if (!visited.insert(child).second)
                    continue;
                ctx.stats.max_bfs_depth =
                    max<uint64_t>(ctx.stats.max_bfs_depth, depth);
                const ExtNat hc = ctx.evaluate(child, goals, want_plan);
                bool pruned = hc.is_infinite();
                if (!pruned && cfg.agd && hc != ExtNat(0))
                    pruned = added_goal_deletion_check(ctx.graph, state, a,
                                                       child, ctx.plan(), goals);
                if (cfg.trace)
                    ctx.trace.push_back({iteration, depth, a, hc, pruned});
                if (pruned)
                    continue;
                vector<ActionId> child_helpful;
                if (cfg.helpful && hc != ExtNat(0))
                    child_helpful = ctx.helpful(child);
                nodes.push_back(
                    {std::move(child), idx, a, depth, std::move(child_helpful)});
                const auto child_idx = static_cast<uint32_t>(nodes.size() - 1);
                if (hc < h) {
                    found = child_idx;
                    found_h = hc;
                    break;
                }
                queue.push_back(child_idx);
            }
        }
        if (found == kRoot)
            return make_outcome(SearchStatus::ehc_failed);

        vector<ActionId> segment;
        for (uint32_t i = found; nodes[i].parent != kRoot; i = nodes[i].parent)
            segment.push_back(nodes[i].action);
        plan.steps.insert(plan.steps.end(), segment.rbegin(), segment.rend());
        current = std::move(nodes[found].state);
        current_helpful = std::move(nodes[found].helpful);
        h = found_h;
        ctx.stats.anchor_h.push_back(h);
    }
    return make_outcome(SearchStatus::solved, std::move(plan));
}

SearchOutcome run_gbfs(Context &ctx, const State &start,
                       span<const FactId> goals) {
    struct Node {
        State state;
        uint32_t parent;
        ActionId action;
    };
    constexpr uint32_t kRoot = numeric_limits<uint32_t>::max();
    const auto reconstruct = [](const vector<Node> &nodes, uint32_t i) {
        Plan plan;
        for (; nodes[i].parent != kRoot; i = nodes[i].parent)
            plan.steps.push_back(nodes[i].action);
        reverse(plan.steps.begin(), plan.steps.end());
        return plan;
    };

    const ExtNat h0 = ctx.evaluate(start, goals, false);
    if (h0.is_infinite())
        return make_outcome(SearchStatus::unsolvable);
    if (h0 == ExtNat(0))
        return make_outcome(SearchStatus::solved, Plan{});

    using Entry = tuple<uint64_t, uint64_t, uint32_t>; // h, FIFO counter, node
    priority_queue<Entry, vector<Entry>, greater<>> open;
    vector<Node> nodes{{start, kRoot, 0}};
    unordered_set<State, StateHash> seen{start};
    uint64_t counter = 0;
    open.emplace(h0.value(), counter++, 0);

    while (!open.empty()) {
        const uint32_t idx = get<2>(open.top());
        open.pop();
        ++ctx.stats.expansions;
        const State state = nodes[idx].state;
        for (ActionId a : ctx.applicable_actions(state)) {
            State child = ctx.successor(state, a);
            if (!seen.insert(child).second)
                continue;
            const ExtNat h = ctx.evaluate(child, goals, false);
            if (h.is_infinite())
                continue;
            nodes.push_back({std::move(child), idx, a});
            const auto child_idx = static_cast<uint32_t>(nodes.size() - 1);
            if (h == ExtNat(0))
                return make_outcome(SearchStatus::solved,
                                    reconstruct(nodes, child_idx));
            open.emplace(h.value(), counter++, child_idx);
        }
    }
    return make_outcome(SearchStatus::unsolvable);
}

SearchOutcome run_hc(Context &ctx, const State &start,
                     span<const FactId> goals) {
    const SearchConfig &cfg = ctx.config;
    struct Entry {
        ExtNat h;
        vector<ActionId> helpful;
    };
    unordered_map<State, Entry, StateHash> cache;
    const auto lookup = [&](const State &s) -> const Entry & {
        auto it = cache.find(s);
        if (it != cache.end())
            return it->second;
        Entry e;
        e.h = ctx.evaluate(s, goals, cfg.helpful);
        if (cfg.helpful && e.h.is_finite() && e.h != ExtNat(0))
            e.helpful = ctx.helpful(s);
        return cache.emplace(s, std::move(e)).first->second;
    };

    const ExtNat h0 = lookup(start).h;
    if (h0.is_infinite())
        return make_outcome(SearchStatus::resource_exhausted);
    if (h0 == ExtNat(0))
        return make_outcome(SearchStatus::solved, Plan{});
    const uint64_t threshold = 2 * h0.value();

    mt19937_64 rng(cfg.seed);
    uint64_t steps = 0;
    for (;;) {
        Plan path;
        unordered_set<State, StateHash> on_path{start};
        State current = start;
        ExtNat h = h0;
        uint64_t non_improving = 0;
        for (;;) {
            if (++steps > cfg.max_hc_steps)
                return make_outcome(SearchStatus::resource_exhausted);
            ++ctx.stats.expansions;
            const vector<ActionId> candidates =
                cfg.helpful ? lookup(current).helpful
                            : ctx.applicable_actions(current);
            vector<pair<ActionId, State>> best;
            ExtNat best_h = ExtNat::infinity();
            for (ActionId a : candidates) {
                State child = ctx.successor(current, a);
                if (on_path.contains(child))
                    continue;
                const ExtNat hc = lookup(child).h;
                if (hc.is_infinite())
                    continue;
                if (hc < best_h) {
                    best_h = hc;
                    best.clear();
                }
                if (hc == best_h)
                    best.emplace_back(a, std::move(child));
            }
            if (best.empty())
                break;
            auto &[action, next] = best[rng() % best.size()];
            if (cfg.trace)
                ctx.trace.push_back({steps, 0, action, best_h, false});
            non_improving = best_h < h ? 0 : non_improving + 1;
            path.steps.push_back(action);
            on_path.insert(next);
            current = std::move(next);
            h = best_h;
            if (h == ExtNat(0))
                return make_outcome(SearchStatus::solved, std::move(path));
            if (non_improving > threshold)
                break;
        }
        ++ctx.stats.restarts;
    }
}

using Runner = SearchOutcome (*)(Context &, const State &, span<const FactId>);

SearchOutcome run_guarded(Context &ctx, Runner runner, const State &start,
                          span<const FactId> goals) {
    SearchOutcome out;
    try {
        out = runner(ctx, start, goals);
    } catch (const LimitReached &) {
        out = make_outcome(SearchStatus::resource_exhausted);
    }
    ctx.finish();
    out.stats = ctx.stats;
    out.trace = std::move(ctx.trace);
    return out;
}

State execute(const Task &task, State state, const Plan &plan) {
    for (ActionId a : plan.steps)
        state = apply(state, task.actions[a]);
    return state;
}

} // namespace

SearchOutcome enforced_hill_climbing(const Task &task,
                                     const ConnectivityGraph &graph,
                                     const State &start,
                                     span<const FactId> goals,
                                     const SearchConfig &config) {
    Context ctx(task, graph, config);
    return run_guarded(ctx, run_ehc, start, goals);
}

SearchOutcome enforced_hill_climbing(const Task &task,
                                     const ConnectivityGraph &graph,
                                     const SearchConfig &config) {
    return enforced_hill_climbing(task, graph, task.initial, task.goals, config);
}

SearchOutcome greedy_best_first(const Task &task,
                                const ConnectivityGraph &graph,
                                const State &start, span<const FactId> goals,
                                const SearchConfig &config) {
    Context ctx(task, graph, config);
    return run_guarded(ctx, run_gbfs, start, goals);
}

SearchOutcome greedy_best_first(const Task &task,
                                const ConnectivityGraph &graph,
                                const SearchConfig &config) {
    return greedy_best_first(task, graph, task.initial, task.goals, config);
}

SearchOutcome hsp1_hill_climbing(const Task &task,
                                 const ConnectivityGraph &graph,
                                 const State &start, span<const FactId> goals,
                                 const SearchConfig &config) {
    Context ctx(task, graph, config);
    return run_guarded(ctx, run_hc, start, goals);
}

SearchOutcome hsp1_hill_climbing(const Task &task,
                                 const ConnectivityGraph &graph,
                                 const SearchConfig &config) {
    return hsp1_hill_climbing(task, graph, task.initial, task.goals, config);
}

namespace {

SearchOutcome run_solve(Context &ctx, const State &, span<const FactId>) {
    const Task &task = ctx.task;
    const SearchConfig &cfg = ctx.config;
    if (task.initial.contains_all(task.goals))
        return make_outcome(SearchStatus::solved, Plan{});
    if (!task.unreachable_goals.empty())
        return make_outcome(SearchStatus::unsolvable);
    if (cfg.strategy == Strategy::gbfs)
        return run_gbfs(ctx, task.initial, task.goals);

    vector<vector<FactId>> entries;
    if (cfg.agenda)
        entries = compute_goal_agenda(task, ctx.graph).entries;
    else
        entries.push_back(task.goals);

    const Runner local = cfg.strategy == Strategy::ehc ? run_ehc : run_hc;
    vector<FactId> target;
    State state = task.initial;
    Plan plan;
    optional<SearchStatus> failure;
    for (size_t k = 0; k < entries.size(); ++k) {
        target.insert(target.end(), entries[k].begin(), entries[k].end());
        canonicalize(target);
        SearchOutcome sub = local(ctx, state, target);
        if (!sub.solved()) {
            // Only the first entry starts from I, where a dead end proves
            // the whole task unsolvable.
            failure = sub.status == SearchStatus::unsolvable && k > 0
                          ? SearchStatus::ehc_failed
                          : sub.status;
            break;
        }
        state = execute(task, std::move(state), *sub.plan);
        plan.steps.insert(plan.steps.end(), sub.plan->steps.begin(),
                          sub.plan->steps.end());
    }
    if (!failure)
        return make_outcome(SearchStatus::solved, std::move(plan));
    if (!cfg.fallback || *failure == SearchStatus::unsolvable)
        return make_outcome(*failure);

    ctx.stats.used_fallback = true;
    return run_gbfs(ctx, task.initial, task.goals);
}

} // namespace

SearchOutcome solve(const Task &task, const ConnectivityGraph &graph,
                    const SearchConfig &config) {
    Context ctx(task, graph, config);
    SearchOutcome out = run_guarded(ctx, run_solve, task.initial, task.goals);
    if (out.solved()) {
        const ValidationReport report = validate_plan(task, *out.plan);
        if (!report.valid)
            throw logic_error("search produced an invalid plan");
    } else {
        out.plan.reset();
    }
    return out;
}

SearchOutcome solve(const Task &task, const SearchConfig &config) {
    return solve(task, ConnectivityGraph(task), config);
}

} // namespace ff
