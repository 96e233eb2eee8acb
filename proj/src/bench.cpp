#include "ff/bench.hpp"

#include "ff/pddl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

using namespace std;

namespace ff::bench {

namespace {

// rng() % bound; the slight modulo bias is irrelevant at these sizes and keeps
// instances identical across standard libraries.
size_t draw(mt19937_64 &rng, size_t bound) {
    return static_cast<size_t>(rng() % bound);
}

string block_name(size_t i) {
    string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + i % 26));
        i /= 26;
    } while (i-- > 0);
    return s;
}

const char *const kGripperDomain = R"((define (domain gripper-strips)
  (:predicates (room ?r) (ball ?b) (gripper ?g) (at-robby ?r)
               (at ?b ?r) (free ?g) (carry ?o ?g))
  (:action move
    :parameters (?from ?to)
    :precondition (and (room ?from) (room ?to) (at-robby ?from))
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action pick
    :parameters (?obj ?room ?gripper)
    :precondition (and (ball ?obj) (room ?room) (gripper ?gripper)
                       (at ?obj ?room) (at-robby ?room) (free ?gripper))
    :effect (and (carry ?obj ?gripper) (not (at ?obj ?room))
                 (not (free ?gripper))))
  (:action drop
    :parameters (?obj ?room ?gripper)
    :precondition (and (ball ?obj) (room ?room) (gripper ?gripper)
                       (carry ?obj ?gripper) (at-robby ?room))
    :effect (and (at ?obj ?room) (free ?gripper)
                 (not (carry ?obj ?gripper)))))
)";

const char *const kBlocksworldDomain = R"((define (domain blocksworld)
  (:requirements :strips)
  (:predicates (on ?x ?y) (ontable ?x) (clear ?x) (handempty) (holding ?x))
  (:action pickup
    :parameters (?x)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x))
                 (not (handempty))))
  (:action putdown
    :parameters (?x)
    :precondition (holding ?x)
    :effect (and (ontable ?x) (clear ?x) (handempty) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x))
                 (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x))
                 (not (handempty)))))
)";

const char *const kBlocksworld3Domain = R"((define (domain blocksworld3)
  (:requirements :strips)
  (:predicates (on ?x ?y) (ontable ?x) (clear ?x) (different ?x ?y))
  (:action move-b-to-b
    :parameters (?x ?from ?to)
    :precondition (and (different ?x ?from) (different ?x ?to)
                       (different ?from ?to) (clear ?x) (clear ?to)
                       (on ?x ?from))
    :effect (and (on ?x ?to) (clear ?from) (not (on ?x ?from))
                 (not (clear ?to))))
  (:action move-t-to-b
    :parameters (?x ?to)
    :precondition (and (different ?x ?to) (clear ?x) (clear ?to) (ontable ?x))
    :effect (and (on ?x ?to) (not (ontable ?x)) (not (clear ?to))))
  (:action move-b-to-t
    :parameters (?x ?from)
    :precondition (and (different ?x ?from) (clear ?x) (on ?x ?from))
    :effect (and (ontable ?x) (clear ?from) (not (on ?x ?from)))))
)";

const char *const kLogisticsDomain = R"((define (domain logistics)
  (:requirements :strips :typing)
  (:types truck airplane - vehicle
          package vehicle - physobj
          airport location - place
          city place physobj - object)
  (:predicates (in-city ?loc - place ?city - city)
               (at ?obj - physobj ?loc - place)
               (in ?pkg - package ?veh - vehicle))
  (:action load-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (at ?pkg ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?truck)))
  (:action load-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (at ?pkg ?loc) (at ?airplane ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?airplane)))
  (:action unload-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (in ?pkg ?truck))
    :effect (and (not (in ?pkg ?truck)) (at ?pkg ?loc)))
  (:action unload-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (in ?pkg ?airplane) (at ?airplane ?loc))
    :effect (and (not (in ?pkg ?airplane)) (at ?pkg ?loc)))
  (:action drive-truck
    :parameters (?truck - truck ?from - place ?to - place ?city - city)
    :precondition (and (at ?truck ?from) (in-city ?from ?city)
                       (in-city ?to ?city))
    :effect (and (not (at ?truck ?from)) (at ?truck ?to)))
  (:action fly-airplane
    :parameters (?airplane - airplane ?from - airport ?to - airport)
    :precondition (at ?airplane ?from)
    :effect (and (not (at ?airplane ?from)) (at ?airplane ?to))))
)";

using Towers = vector<vector<size_t>>;

void write_towers(ostream &os, const Towers &towers, bool with_clear) {
    for (const auto &tower : towers) {
        os << "    (ontable " << block_name(tower.front()) << ")\n";
        for (size_t i = 1; i < tower.size(); ++i)
            os << "    (on " << block_name(tower[i]) << " "
               << block_name(tower[i - 1]) << ")\n";
        if (with_clear)
            os << "    (clear " << block_name(tower.back()) << ")\n";
    }
}

PddlTexts blocksworld_instance(const string &name, const char *domain,
                               size_t n, uint64_t seed, bool three_op) {
    if (n < 2)
        throw invalid_argument("blocksworld needs at least 2 blocks");
    mt19937_64 rng(seed);
    const Towers init = random_towers(n, rng);
    const Towers goal = random_towers(n, rng);

    ostringstream p;
    p << "(define (problem " << name << ")\n  (:domain "
      << (three_op ? "blocksworld3" : "blocksworld") << ")\n  (:objects";
    for (size_t i = 0; i < n; ++i)
        p << " " << block_name(i);
    p << ")\n  (:init\n";
    if (!three_op)
        p << "    (handempty)\n";
    write_towers(p, init, true);
    if (three_op)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (i != j)
                    p << "    (different " << block_name(i) << " "
                      << block_name(j) << ")\n";
    p << "  )\n  (:goal (and\n";
    write_towers(p, goal, false);
    p << "  )))\n";
    return {name, domain, p.str()};
}

} // namespace

Towers random_towers(size_t n, mt19937_64 &rng) {
    // Number of states with k towers is the Lah number L(n,k) =
    // C(n-1,k-1) n!/k!; every state with k towers arises from k! orderings of
    // a permutation cut at k-1 of the n-1 gaps.
    vector<long double> weight(n + 1, 0);
    long double total = 0;
    for (size_t k = 1; k <= n; ++k) {
        long double lah = 1; // C(n-1,k-1) * n! / k!
        for (size_t i = 1; i <= k - 1; ++i)
            lah = lah * static_cast<long double>(n - i) / i;
        for (size_t i = k + 1; i <= n; ++i)
            lah *= i;
        weight[k] = lah;
        total += lah;
    }
    // Exact integer draw over the total when it fits; n stays small.
    const auto total_int = static_cast<uint64_t>(llroundl(total));
    uint64_t r = rng() % total_int;
    size_t k = 1;
    for (; k < n; ++k) {
        const auto w = static_cast<uint64_t>(llroundl(weight[k]));
        if (r < w)
            break;
        r -= w;
    }

    vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i)
        perm[i] = i;
    for (size_t i = n - 1; i > 0; --i)
        swap(perm[i], perm[draw(rng, i + 1)]);

    // k-1 distinct cut positions among the n-1 gaps.
    vector<size_t> gaps(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
        gaps[i] = i + 1;
    for (size_t i = 0; i + 1 < k; ++i)
        swap(gaps[i], gaps[i + draw(rng, gaps.size() - i)]);
    vector<size_t> cuts(gaps.begin(), gaps.begin() + static_cast<long>(k - 1));
    sort(cuts.begin(), cuts.end());
    cuts.push_back(n);

    Towers towers;
    size_t begin = 0;
    for (size_t cut : cuts) {
        towers.emplace_back(perm.begin() + static_cast<long>(begin),
                            perm.begin() + static_cast<long>(cut));
        begin = cut;
    }
    sort(towers.begin(), towers.end());
    return towers;
}

PddlTexts gen_gripper(size_t n) {
    if (n == 0)
        throw invalid_argument("gripper needs at least 1 ball");
    const string name = "gripper-" + std::to_string(n);
    ostringstream p;
    p << "(define (problem " << name << ")\n  (:domain gripper-strips)\n"
      << "  (:objects rooma roomb left right";
    for (size_t i = 1; i <= n; ++i)
        p << " ball" << i;
    p << ")\n  (:init (room rooma) (room roomb) (gripper left) (gripper right)\n"
      << "         (at-robby rooma) (free left) (free right)";
    for (size_t i = 1; i <= n; ++i)
        p << "\n         (ball ball" << i << ") (at ball" << i << " rooma)";
    p << ")\n  (:goal (and";
    for (size_t i = 1; i <= n; ++i)
        p << " (at ball" << i << " roomb)";
    p << ")))\n";
    return {name, kGripperDomain, p.str()};
}

PddlTexts gen_blocksworld(size_t n, uint64_t seed) {
    return blocksworld_instance(
        "blocksworld-" + std::to_string(n) + "-s" + std::to_string(seed),
        kBlocksworldDomain, n, seed, false);
}

PddlTexts gen_blocksworld3(size_t n, uint64_t seed) {
    return blocksworld_instance(
        "blocksworld3-" + std::to_string(n) + "-s" + std::to_string(seed),
        kBlocksworld3Domain, n, seed, true);
}

PddlTexts gen_bw_para() {
    return {"bw-para", kBlocksworldDomain,
            "(define (problem bw-para)\n  (:domain blocksworld)\n"
            "  (:objects a b c)\n"
            "  (:init (handempty) (ontable a) (ontable b) (ontable c)\n"
            "         (clear a) (clear b) (clear c))\n"
            "  (:goal (and (on b c) (on a b))))\n"};
}

PddlTexts gen_logistics(size_t cities, size_t packages, uint64_t seed) {
    if (cities == 0 || packages == 0)
        throw invalid_argument("logistics needs at least 1 city and 1 package");
    mt19937_64 rng(seed);
    const string name = "logistics-" + std::to_string(cities) + "-" +
                        std::to_string(packages) + "-s" + std::to_string(seed);
    // Place 2c is the airport of city c+1, place 2c+1 its other location.
    const auto place = [](size_t i) {
        return (i % 2 == 0 ? "apt" : "loc") + std::to_string(i / 2 + 1);
    };
    const size_t places = 2 * cities;

    ostringstream p;
    p << "(define (problem " << name << ")\n  (:domain logistics)\n  (:objects";
    for (size_t c = 1; c <= cities; ++c)
        p << " city" << c;
    p << " - city\n   ";
    for (size_t c = 1; c <= cities; ++c)
        p << " apt" << c;
    p << " - airport\n   ";
    for (size_t c = 1; c <= cities; ++c)
        p << " loc" << c;
    p << " - location\n   ";
    for (size_t c = 1; c <= cities; ++c)
        p << " truck" << c;
    p << " - truck\n    plane1 - airplane\n   ";
    for (size_t k = 1; k <= packages; ++k)
        p << " pkg" << k;
    p << " - package)\n  (:init\n";
    for (size_t c = 1; c <= cities; ++c)
        p << "    (in-city apt" << c << " city" << c << ") (in-city loc" << c
          << " city" << c << ")\n";
    for (size_t c = 0; c < cities; ++c)
        p << "    (at truck" << c + 1 << " " << place(2 * c + draw(rng, 2))
          << ")\n";
    p << "    (at plane1 " << place(2 * draw(rng, cities)) << ")\n";
    vector<size_t> goal(packages);
    for (size_t k = 0; k < packages; ++k) {
        p << "    (at pkg" << k + 1 << " " << place(draw(rng, places)) << ")\n";
        goal[k] = draw(rng, places);
    }
    p << "  )\n  (:goal (and";
    for (size_t k = 0; k < packages; ++k)
        p << " (at pkg" << k + 1 << " " << place(goal[k]) << ")";
    p << ")))\n";
    return {name, kLogisticsDomain, p.str()};
}

namespace {

OptimalResult breadth_first(const Task &task, size_t depth_limit,
                            size_t state_budget) {
    OptimalResult result;
    if (task.initial.contains_all(task.goals)) {
        result.status = OracleStatus::found;
        return result;
    }
    struct Node {
        State state;
        size_t parent;
        ActionId action;
        size_t depth;
    };
    vector<Node> nodes{{task.initial, SIZE_MAX, 0, 0}};
    unordered_map<State, size_t, StateHash> seen{{task.initial, 0}};
    for (size_t head = 0; head < nodes.size(); ++head) {
        if (nodes[head].depth >= depth_limit)
            continue;
        for (const GroundAction &a : task.actions) {
            if (!applicable(nodes[head].state, a))
                continue;
            State child = apply(nodes[head].state, a);
            if (seen.contains(child))
                continue;
            if (nodes.size() >= state_budget) {
                result.status = OracleStatus::unknown;
                return result;
            }
            const bool goal = child.contains_all(task.goals);
            seen.emplace(child, nodes.size());
            nodes.push_back({std::move(child), head, a.id, nodes[head].depth + 1});
            if (goal) {
                for (size_t i = nodes.size() - 1; i != 0; i = nodes[i].parent)
                    result.plan.steps.push_back(nodes[i].action);
                reverse(result.plan.steps.begin(), result.plan.steps.end());
                result.length = result.plan.size();
                result.status = OracleStatus::found;
                return result;
            }
        }
    }
    result.status = OracleStatus::none;
    return result;
}

} // namespace

OptimalResult brute_force_optimal(const Task &task, size_t depth_limit,
                                  size_t state_budget) {
    return breadth_first(task, depth_limit, state_budget);
}

OptimalResult brute_force_relaxed_optimal(const Task &task, size_t state_budget) {
    return breadth_first(relax(task), SIZE_MAX, state_budget);
}

Task random_task(uint64_t seed, size_t max_facts, size_t max_actions) {
    mt19937_64 rng(seed);
    const auto chance = [&](unsigned percent) { return draw(rng, 100) < percent; };
    const size_t num_facts = 3 + draw(rng, max_facts - 2);
    const size_t num_actions = 1 + draw(rng, max_actions);

    Task task;
    for (size_t f = 0; f < num_facts; ++f)
        task.facts.push_back("(p" + std::to_string(f) + ")");
    for (size_t i = 0; i < num_actions; ++i) {
        GroundAction a;
        a.id = static_cast<ActionId>(i);
        a.name = "a" + std::to_string(i);
        ConditionalEffect eff;
        for (FactId f = 0; f < num_facts; ++f) {
            if (chance(25))
                a.precondition.push_back(f);
            if (chance(30))
                eff.adds.push_back(f);
            else if (chance(20))
                eff.deletes.push_back(f);
        }
        if (eff.adds.empty()) {
            const auto f = static_cast<FactId>(draw(rng, num_facts));
            eff.adds.push_back(f);
            erase(eff.deletes, f);
        }
        a.effects.push_back(std::move(eff));
        task.actions.push_back(std::move(a));
    }
    vector<FactId> init;
    for (FactId f = 0; f < num_facts; ++f)
        if (chance(40))
            init.push_back(f);
    task.initial = State(std::move(init));
    const size_t num_goals = 1 + draw(rng, 3);
    for (size_t i = 0; i < num_goals; ++i)
        task.goals.push_back(static_cast<FactId>(draw(rng, num_facts)));
    canonicalize(task.goals);
    for (FactId g : task.goals) {
        if (task.initial.contains(g))
            continue;
        const bool achievable = any_of(
            task.actions.begin(), task.actions.end(), [&](const GroundAction &a) {
                return binary_search(a.effects[0].adds.begin(),
                                     a.effects[0].adds.end(), g);
            });
        if (!achievable)
            task.unreachable_goals.push_back(g);
    }
    check_task(task);
    return task;
}

vector<Task> random_solvable_tasks(size_t count, uint64_t seed,
                                   size_t max_facts, size_t max_actions) {
    vector<Task> out;
    for (uint64_t s = seed; out.size() < count; ++s) {
        Task t = random_task(s, max_facts, max_actions);
        if (brute_force_optimal(t).status == OracleStatus::found)
            out.push_back(std::move(t));
    }
    return out;
}

string SuiteEntry::instance_name() const {
    const auto param = [&](size_t i) { return std::to_string(params.at(i)); };
    const string s = "-s" + std::to_string(seed);
    if (domain == "gripper")
        return "gripper-" + param(0);
    if (domain == "blocksworld" || domain == "blocksworld3")
        return domain + "-" + param(0) + s;
    if (domain == "logistics")
        return "logistics-" + param(0) + "-" + param(1) + s;
    if (domain == "bw-para")
        return "bw-para";
    return name;
}

SuiteSpec parse_suite(istream &is, const string &base_dir) {
    SuiteSpec suite;
    string line;
    for (size_t number = 1; getline(is, line); ++number) {
        const auto fail = [&](const string &msg) {
            return InputError("suite line " + std::to_string(number) + ": " + msg);
        };
        if (const size_t c = line.find_first_of("#;"); c != string::npos)
            line.erase(c);
        istringstream in(line);
        vector<string> words;
        for (string w; in >> w;)
            words.push_back(w);
        if (words.empty())
            continue;

        SuiteEntry e;
        e.domain = words[0];
        if (e.domain == "pddl") {
            if (words.size() != 4)
                throw fail("expected: pddl <name> <domain-file> <problem-file>");
            const auto resolve = [&](const string &p) {
                const filesystem::path path(p);
                return (path.is_absolute() ? path : filesystem::path(base_dir) / path)
                    .string();
            };
            e.name = words[1];
            e.domain_path = resolve(words[2]);
            e.problem_path = resolve(words[3]);
            suite.push_back(std::move(e));
            continue;
        }

        size_t arity, minimum;
        if (e.domain == "gripper")
            arity = 1, minimum = 1;
        else if (e.domain == "blocksworld" || e.domain == "blocksworld3")
            arity = 1, minimum = 2;
        else if (e.domain == "logistics")
            arity = 2, minimum = 1;
        else if (e.domain == "bw-para")
            arity = 0, minimum = 0;
        else
            throw fail("unknown domain '" + e.domain + "'");

        for (size_t i = 1; i < words.size(); ++i) {
            const string &w = words[i];
            try {
                size_t used = 0;
                if (w.rfind("seed=", 0) == 0) {
                    e.seed = stoull(w.substr(5), &used);
                    if (used != w.size() - 5)
                        throw invalid_argument(w);
                } else {
                    const unsigned long long v = stoull(w, &used);
                    if (used != w.size() || w[0] == '-')
                        throw invalid_argument(w);
                    e.params.push_back(static_cast<size_t>(v));
                }
            } catch (const logic_error &) {
                throw fail("bad parameter '" + w + "'");
            }
        }
        if (e.params.size() != arity)
            throw fail(e.domain + " takes " + std::to_string(arity) + " parameter(s)");
        for (size_t v : e.params)
            if (v < minimum)
                throw fail("parameter below " + std::to_string(minimum));
        suite.push_back(std::move(e));
    }
    return suite;
}

PddlTexts instantiate(const SuiteEntry &e) {
    if (e.domain == "gripper")
        return gen_gripper(e.params.at(0));
    if (e.domain == "blocksworld")
        return gen_blocksworld(e.params.at(0), e.seed);
    if (e.domain == "blocksworld3")
        return gen_blocksworld3(e.params.at(0), e.seed);
    if (e.domain == "logistics")
        return gen_logistics(e.params.at(0), e.params.at(1), e.seed);
    if (e.domain == "bw-para")
        return gen_bw_para();
    const auto slurp = [](const string &path) {
        ifstream in(path, ios::binary);
        if (!in)
            throw InputError("cannot read " + path);
        ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    return {e.name, slurp(e.domain_path), slurp(e.problem_path)};
}

vector<SearchConfig> all_configs() {
    vector<SearchConfig> out;
    for (const char *l : {"HEF", "HE-", "H-F", "H--", "-EF", "-E-", "--F", "---"})
        out.push_back(SearchConfig::from_letters(l));
    return out;
}

vector<SearchConfig> parse_configs(const string &list) {
    if (list == "all8")
        return all_configs();
    vector<SearchConfig> out;
    istringstream in(list);
    for (string item; getline(in, item, ',');) {
        try {
            out.push_back(SearchConfig::from_letters(item));
        } catch (const invalid_argument &err) {
            throw InputError(err.what());
        }
    }
    if (out.empty())
        throw InputError("no configurations given");
    return out;
}

namespace {

RunRecord run_one(const Task &task, const ConnectivityGraph &graph,
                  SearchConfig config, const MatrixLimits &limits,
                  uint64_t seed) {
    config.seed = seed;
    config.max_seconds = limits.max_seconds;
    config.max_evaluations = limits.max_evaluations;
    const auto start = chrono::steady_clock::now();
    const SearchOutcome out = solve(task, graph, config);
    const chrono::duration<double, milli> elapsed =
        chrono::steady_clock::now() - start;

    RunRecord r;
    r.config = config.letters();
    r.seed = seed;
    r.solved = out.solved();
    r.plan_length = r.solved ? static_cast<double>(out.plan->size()) : -1;
    r.evaluations = static_cast<double>(out.stats.evaluations);
    r.expansions = static_cast<double>(out.stats.expansions);
    if (limits.record_time)
        r.time_ms = r.solved ? elapsed.count()
                             : static_cast<double>(limits.max_seconds) * 1000;
    if (!r.solved)
        r.fail_reason = string(ff::to_string(out.status));
    return r;
}

RunRecord aggregate(const vector<RunRecord> &trials) {
    RunRecord r = trials.front();
    size_t solved = 0;
    double length = 0, evals = 0, expansions = 0, time = 0;
    map<string, size_t> reasons;
    for (const RunRecord &t : trials) {
        if (t.solved) {
            ++solved;
            length += t.plan_length;
        } else {
            ++reasons[t.fail_reason];
        }
        evals += t.evaluations;
        expansions += t.expansions;
        time += t.time_ms;
    }
    const auto n = static_cast<double>(trials.size());
    r.solved = 2 * solved > trials.size();
    r.plan_length = r.solved ? length / static_cast<double>(solved) : -1;
    r.evaluations = evals / n;
    r.expansions = expansions / n;
    r.time_ms = time / n;
    r.fail_reason.clear();
    if (!r.solved) {
        const auto most = max_element(
            reasons.begin(), reasons.end(),
            [](const auto &a, const auto &b) { return a.second < b.second; });
        r.fail_reason = most->first + " (" + std::to_string(trials.size() - solved) +
                        "/" + std::to_string(trials.size()) + " trials)";
    }
    return r;
}

string format_number(double v) {
    if (v == floor(v) && fabs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[64];
    snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

string csv_field(string s) {
    for (char &c : s)
        if (c == ',' || c == '\n' || c == '\r' || c == '"')
            c = ';';
    return s;
}

} // namespace

vector<RunRecord> run_matrix(const SuiteSpec &suite,
                             const vector<SearchConfig> &configs,
                             const MatrixLimits &limits) {
    vector<RunRecord> records;
    for (const SuiteEntry &entry : suite) {
        const string instance = entry.instance_name();
        optional<pddl::GroundingResult> grounded;
        string error;
        try {
            const PddlTexts texts = instantiate(entry);
            grounded = pddl::ground(pddl::parse(texts.domain, texts.problem,
                                                instance + ".domain",
                                                instance + ".problem"));
        } catch (const exception &err) {
            error = string("input error: ") + err.what();
        }
        for (const SearchConfig &config : configs) {
            RunRecord r;
            if (!grounded) {
                r.config = config.letters();
                r.seed = limits.base_seed;
                r.fail_reason = error;
            } else if (config.strategy == Strategy::hc) {
                vector<RunRecord> trials;
                for (size_t t = 0; t < limits.hc_trials; ++t)
                    trials.push_back(run_one(grounded->task, grounded->graph,
                                             config, limits, limits.base_seed + t));
                r = aggregate(trials);
                r.seed = limits.base_seed;
            } else {
                r = run_one(grounded->task, grounded->graph, config, limits,
                            limits.base_seed);
            }
            r.domain = entry.domain;
            r.instance = instance;
            records.push_back(std::move(r));
        }
    }
    return records;
}

void write_csv(ostream &os, const vector<RunRecord> &records) {
    os << "domain,instance,config,seed,solved,plan_length,evaluations,"
          "expansions,time_ms,fail_reason\n";
    for (const RunRecord &r : records)
        os << csv_field(r.domain) << ',' << csv_field(r.instance) << ','
           << r.config << ',' << r.seed << ',' << (r.solved ? 1 : 0) << ','
           << format_number(r.plan_length) << ',' << format_number(r.evaluations)
           << ',' << format_number(r.expansions) << ','
           << format_number(r.time_ms) << ',' << csv_field(r.fail_reason)
           << '\n';
}

double sign_test(size_t n, size_t k) {
    if (n == 0 || k == 0)
        return 1.0;
    if (k > n)
        throw invalid_argument("sign_test: k exceeds n");
    long double tail;
    if (n <= 62) {
        uint64_t sum = 0, c = 1; // c = C(n, i)
        for (size_t i = 0; i <= n; ++i) {
            if (i >= k)
                sum += c;
            c = c * (n - i) / (i + 1);
        }
        tail = ldexpl(static_cast<long double>(sum), -static_cast<int>(n));
    } else {
        long double pmf = ldexpl(1.0L, -static_cast<int>(n));
        tail = 0;
        for (size_t i = 0; i <= n; ++i) {
            if (i >= k)
                tail += pmf;
            pmf = pmf * static_cast<long double>(n - i) / (i + 1);
        }
    }
    return static_cast<double>(min<long double>(1.0L, 2 * tail));
}

vector<SignTestRow> sign_test_summary(const vector<RunRecord> &records,
                                      double alpha) {
    vector<string> domains, configs;
    map<tuple<string, string, string>, const RunRecord *> by_key;
    map<string, vector<string>> instances;
    for (const RunRecord &r : records) {
        if (find(domains.begin(), domains.end(), r.domain) == domains.end())
            domains.push_back(r.domain);
        if (find(configs.begin(), configs.end(), r.config) == configs.end())
            configs.push_back(r.config);
        auto &list = instances[r.domain];
        if (find(list.begin(), list.end(), r.instance) == list.end())
            list.push_back(r.instance);
        by_key[{r.domain, r.instance, r.config}] = &r;
    }

    vector<SignTestRow> rows;
    for (const string &d : domains)
        for (size_t i = 0; i < configs.size(); ++i)
            for (size_t j = i + 1; j < configs.size(); ++j) {
                SignTestRow row{d, configs[i], configs[j]};
                for (const string &inst : instances[d]) {
                    const auto a = by_key.find({d, inst, configs[i]});
                    const auto b = by_key.find({d, inst, configs[j]});
                    if (a == by_key.end() || b == by_key.end())
                        continue;
                    const RunRecord &ra = *a->second, &rb = *b->second;
                    if (ra.solved != rb.solved) {
                        ++(ra.solved ? row.a_better : row.b_better);
                    } else if (ra.solved && ra.evaluations != rb.evaluations) {
                        ++(ra.evaluations < rb.evaluations ? row.a_better
                                                           : row.b_better);
                    }
                }
                row.n = row.a_better + row.b_better;
                row.p = sign_test(row.n, max(row.a_better, row.b_better));
                row.significant = row.n > 0 && row.p <= alpha;
                rows.push_back(row);
            }
    return rows;
}

void write_sign_test_csv(ostream &os, const vector<SignTestRow> &rows) {
    os << "domain,config_a,config_b,n,a_better,b_better,p,significant\n";
    for (const SignTestRow &r : rows) {
        char p[32];
        snprintf(p, sizeof p, "%.6g", r.p);
        os << r.domain << ',' << r.config_a << ',' << r.config_b << ',' << r.n
           << ',' << r.a_better << ',' << r.b_better << ',' << p << ','
           << (r.significant ? 1 : 0) << '\n';
    }
}

} // namespace ff::bench
