// ffplan: plan, validate and benchmark from the command line.
//
// Exit codes: 0 solved / valid, 1 proven unsolvable / invalid plan,
// 2 search failure or limits, 3 input error.

#include "ff/bench.hpp"
#include "ff/pddl.hpp"
#include "ff/plan_io.hpp"
#include "ff/relaxed_graphplan.hpp"
#include "ff/search.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kSolved = 0, kUnsolvable = 1, kFailed = 2, kInputError = 3 };

struct PlanOptions {
    std::string domain, problem;
    std::string heuristic = "ff", search = "ehc";
    std::string helpful = "on", agd = "on", agenda = "on", fallback = "on";
    std::uint64_t seed = 0, max_seconds = 0, max_evals = 0;
    std::string plan_out, stats_format = "line", dump_rpg, trace_out;
    bool no_timing = false;
};

struct ValidateOptions {
    std::string domain, problem, plan;
};

struct BenchOptions {
    std::string suite, configs = "all8", out, summary;
    std::uint64_t seed = 0, max_seconds = 60, max_evals = 0;
    bool no_timing = false;
};

ff::pddl::GroundingResult load(const std::string &domain,
                               const std::string &problem) {
    return ff::pddl::ground(ff::pddl::parse_files(domain, problem));
}

int run_plan(const PlanOptions &o) {
    const ff::pddl::GroundingResult g = load(o.domain, o.problem);
    const ff::Task &task = g.task;

    if (!o.dump_rpg.empty()) {
        std::ofstream out(o.dump_rpg);
        ff::dump_layers(out, ff::build_rpg(g.graph, task.initial, task.goals),
                        task);
    }

    ff::SearchConfig config;
    config.heuristic =
        o.heuristic == "ff" ? ff::HeuristicKind::ff : ff::HeuristicKind::add;
    config.strategy = o.search == "ehc"  ? ff::Strategy::ehc
                      : o.search == "hc" ? ff::Strategy::hc
                                         : ff::Strategy::gbfs;
    config.helpful = o.helpful == "on";
    config.agd = o.agd == "on";
    config.agenda = o.agenda == "on";
    config.fallback = o.fallback == "on";
    config.seed = o.seed;
    config.max_seconds = o.max_seconds;
    config.max_evaluations = o.max_evals;
    config.trace = !o.trace_out.empty();

    const ff::SearchOutcome out = ff::solve(task, g.graph, config);

    if (config.trace) {
        std::ofstream trace(o.trace_out);
        for (const ff::TraceEntry &t : out.trace)
            trace << t.iteration << ' ' << t.depth << ' '
                  << task.actions[t.action].display() << ' ' << t.h << ' '
                  << (t.pruned ? "pruned" : "kept") << '\n';
    }

    if (out.solved()) {
        std::ostringstream text;
        ff::write_plan(text, task, *out.plan);
        // Self-check: the emitted text must read back as a valid plan.
        std::istringstream reread(text.str());
        if (!ff::validate_plan(task, ff::read_plan(reread, task)).valid)
            throw std::logic_error("emitted plan does not validate");
        if (o.plan_out.empty()) {
            std::cout << text.str();
        } else {
            std::ofstream file(o.plan_out, std::ios::binary);
            file << text.str();
            if (!file)
                throw ff::InputError("cannot write " + o.plan_out);
        }
    }

    const std::uint64_t time_ms = o.no_timing ? 0 : out.stats.elapsed_ms;
    const std::size_t length = out.solved() ? out.plan->size() : 0;
    std::ostream &stats = o.plan_out.empty() ? std::cerr : std::cout;
    if (o.stats_format == "csv")
        stats << "solved,length,evals,expansions,time_ms\n"
              << out.solved() << ',' << length << ',' << out.stats.evaluations
              << ',' << out.stats.expansions << ',' << time_ms << '\n';
    else
        stats << "solved=" << out.solved() << " length=" << length
              << " evals=" << out.stats.evaluations
              << " expansions=" << out.stats.expansions
              << " time_ms=" << time_ms << '\n';

    switch (out.status) {
    case ff::SearchStatus::solved:
        return kSolved;
    case ff::SearchStatus::unsolvable:
        std::cerr << "task is unsolvable\n";
        return kUnsolvable;
    default:
        std::cerr << "search failed: " << ff::to_string(out.status) << '\n';
        return kFailed;
    }
}

int run_validate(const ValidateOptions &o) {
    const ff::pddl::GroundingResult g = load(o.domain, o.problem);
    std::ifstream in(o.plan);
    if (!in)
        throw ff::InputError("cannot read " + o.plan);
    const ff::Plan plan = ff::read_plan(in, g.task);
    const ff::ValidationReport report = ff::validate_plan(g.task, plan);
    if (report.valid) {
        std::cout << "valid length=" << plan.size() << '\n';
        return kSolved;
    }
    if (report.failing_step)
        std::cout << "invalid: step " << *report.failing_step + 1
                  << " is not applicable\n";
    else
        std::cout << "invalid: goals not satisfied\n";
    return kUnsolvable;
}

int run_bench(const BenchOptions &o) {
    std::ifstream in(o.suite);
    if (!in)
        throw ff::InputError("cannot read " + o.suite);
    const std::string base =
        std::filesystem::path(o.suite).parent_path().string();
    const ff::bench::SuiteSpec suite =
        ff::bench::parse_suite(in, base.empty() ? "." : base);
    const std::vector<ff::SearchConfig> configs =
        ff::bench::parse_configs(o.configs);

    ff::bench::MatrixLimits limits;
    limits.max_seconds = o.max_seconds;
    limits.max_evaluations = o.max_evals;
    limits.base_seed = o.seed;
    limits.record_time = !o.no_timing;
    const auto records = ff::bench::run_matrix(suite, configs, limits);

    if (o.out.empty()) {
        ff::bench::write_csv(std::cout, records);
    } else {
        std::ofstream out(o.out, std::ios::binary);
        ff::bench::write_csv(out, records);
        if (!out)
            throw ff::InputError("cannot write " + o.out);
    }
    if (!o.summary.empty()) {
        std::ofstream out(o.summary, std::ios::binary);
        ff::bench::write_sign_test_csv(out,
                                       ff::bench::sign_test_summary(records));
        if (!out)
            throw ff::InputError("cannot write " + o.summary);
    }
    return kSolved;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Forward-chaining heuristic planner"};
    app.require_subcommand(1);
    const auto on_off = CLI::IsMember({"on", "off"});

    PlanOptions po;
    CLI::App *plan = app.add_subcommand("plan", "Solve a PDDL task");
    plan->add_option("-o,--domain", po.domain, "Domain file")->required();
    plan->add_option("-f,--problem", po.problem, "Problem file")->required();
    plan->add_option("--heuristic", po.heuristic, "ff or add")
        ->check(CLI::IsMember({"ff", "add"}));
    plan->add_option("--search", po.search, "ehc, hc or gbfs")
        ->check(CLI::IsMember({"ehc", "hc", "gbfs"}));
    plan->add_option("--helpful", po.helpful, "Helpful actions pruning")
        ->check(on_off);
    plan->add_option("--agd", po.agd, "Added goal deletion pruning")
        ->check(on_off);
    plan->add_option("--agenda", po.agenda, "Goal agenda")->check(on_off);
    plan->add_option("--fallback", po.fallback, "Best-first fallback")
        ->check(on_off);
    plan->add_option("--seed", po.seed, "Random seed (hc)");
    plan->add_option("--max-seconds", po.max_seconds, "Time limit, 0 = none");
    plan->add_option("--max-evals", po.max_evals, "Evaluation limit, 0 = none");
    plan->add_option("--plan-out", po.plan_out,
                     "Plan file; without it the plan goes to stdout and the "
                     "stats line to stderr");
    plan->add_option("--stats-format", po.stats_format, "line or csv")
        ->check(CLI::IsMember({"line", "csv"}));
    plan->add_option("--dump-rpg", po.dump_rpg,
                     "Write initial-state layer memberships to a file");
    plan->add_option("--trace", po.trace_out,
                     "Write generated transitions of the local search");
    plan->add_flag("--no-timing", po.no_timing, "Report time_ms=0");

    ValidateOptions vo;
    CLI::App *validate =
        app.add_subcommand("validate", "Check a plan file against a task");
    validate->add_option("-o,--domain", vo.domain, "Domain file")->required();
    validate->add_option("-f,--problem", vo.problem, "Problem file")->required();
    validate->add_option("-p,--plan", vo.plan, "Plan file")->required();

    BenchOptions bo;
    CLI::App *bench = app.add_subcommand("bench", "Run a configuration matrix");
    bench->add_option("--suite", bo.suite, "Suite file")->required();
    bench->add_option("--configs", bo.configs,
                      "all8 or comma-separated letters, e.g. HEF,---");
    bench->add_option("--out", bo.out, "CSV output file (default stdout)");
    bench->add_option("--summary", bo.summary, "Sign-test summary CSV file");
    bench->add_option("--seed", bo.seed, "Base seed");
    bench->add_option("--max-seconds", bo.max_seconds, "Per-run time limit");
    bench->add_option("--max-evals", bo.max_evals, "Per-run evaluation limit");
    bench->add_flag("--no-timing", bo.no_timing, "Write time_ms as 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*plan)
            return run_plan(po);
        if (*validate)
            return run_validate(vo);
        return run_bench(bo);
    } catch (const ff::InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
}
