// simplel: test problems, parameter-choice rules and benchmark runs from the command line.
//
// Exit status: 0 success, 2 usage or parameter error, 1 numerical failure.
// Standard output carries results and output paths only; progress goes to stderr.

#include "simplel/bench/csv.hpp"
#include "simplel/bench/rate.hpp"
#include "simplel/bench/report.hpp"
#include "simplel/problem_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace simplel;
using namespace simplel::bench;

namespace
{

const char* const kProblemHelp = R"(Problem spec, inline or from a file:
  diag:s=2,mu=0.25,n=1000[,margin=0.1]   diagonal, sigma_i = i^-s, source exponent mu
  heat:n=64[,solution=standard|blocky]    inverse heat equation
  radon:img=8[,angles=12,rays=12]         small ray-driven tomography analogue
  file:PATH                               problem written by `simplel gen`)";

struct Common
{
    std::string problem;
    std::optional<std::uint64_t> seed;
    std::string grid;
    std::string metric;
    std::string rules;
    std::string out;
    std::optional<double> noise;
    std::optional<double> noise_decay;
    std::string penalty;
};

class Outputs
{
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

    // Opens dir/name for writing and echoes the path once.
    std::ofstream open(const std::string& name)
    {
        fs::create_directories(dir_);
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        std::cout << path.string() << "\n";
        return out;
    }

private:
    fs::path dir_;
};

ExperimentConfig single_config(const Common& c)
{
    ExperimentConfig cfg;
    cfg.name = "cli";
    cfg.problem = parse_problem_spec(c.problem);
    if (c.noise)
        cfg.levels = {*c.noise};
    cfg.runs = 1;
    cfg.seed_base = c.seed.value_or(0);
    cfg.grid = parse_grid_spec(c.grid);
    if (!c.metric.empty())
        cfg.metric = parse_metric(c.metric);
    if (!c.penalty.empty()) {
        const auto p = convex::parse_penalty(c.penalty);
        if (!p)
            throw ParameterError("unknown penalty '" + c.penalty + "' (expected l1, l1.5 or tv)");
        cfg.penalty = *p;
    }
    cfg.noise_decay = c.noise_decay;
    cfg.rules = c.rules.empty() ? default_rules(cfg.is_convex()) : split_list(c.rules);
    cfg.validate();
    return cfg;
}

int cmd_gen(const Common& c)
{
    const auto problem = build_problem(parse_problem_spec(c.problem));
    const fs::path path = c.out;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    save_problem(path.string(), *problem);
    std::cout << path.string() << "\n";
    return 0;
}

int cmd_curve(const Common& c)
{
    const auto cfg = single_config(c);
    if (cfg.is_convex())
        throw ParameterError("curve: Tikhonov curves only; drop --penalty");
    const auto problem = build_problem(cfg.problem);
    const auto grid = build_grid(cfg.grid, *problem);
    const auto data = add_noise(problem, cfg.levels.front(), cfg.effective_noise_decay(), cfg.seed_base);
    const auto path = path_quantities(data, grid);

    std::vector<RuleCurve<double>> curves;
    for (const auto& name : cfg.rules)
        curves.push_back(rule_curve(*parse_rule(name), data, path, grid));
    std::vector<ConditionReport<double>> conditions;
    for (auto v : {Condition::MC1, Condition::MC2})
        conditions.push_back(condition_constant(data.noise_coeffs, problem->lambdas(), grid.values(), v));
    for (auto v : {Condition::REG1, Condition::REG2})
        conditions.push_back(condition_constant(problem->xdag_coeffs(), problem->lambdas(), grid.values(), v));

    Outputs out(c.out);
    {
        auto f = out.open("path.csv");
        write_path_csv(f, path);
    }
    {
        auto f = out.open("error.csv");
        write_error_csv(f, error_curve(data, grid));
    }
    {
        auto f = out.open("rules.csv");
        write_rule_csv(f, curves);
    }
    {
        auto f = out.open("conditions.csv");
        write_condition_csv(f, conditions);
    }
    return 0;
}

int cmd_select(const Common& c)
{
    const auto cfg = single_config(c);
    const auto outcome = run_cell(cfg, build_problem(cfg.problem), cfg.levels.front(), cfg.seed_base);
    int status = 0;
    for (const auto& r : outcome.records) {
        if (!r.failure.empty() && std::isnan(r.alpha_star)) {
            std::cerr << r.rule << ": " << r.failure << "\n";
            status = 1;
        }
        std::cout << "rule=" << r.rule << " alpha_star=" << format_number(r.alpha_star)
                  << " J=" << format_number(r.J) << " interior=" << (r.interior ? 1 : 0)
                  << " selected_error=" << format_number(r.selected_error)
                  << " min_error=" << format_number(r.min_error) << "\n";
    }
    return status;
}

int cmd_diagnose(const Common& c)
{
    const auto cfg = single_config(c);
    const auto problem = build_problem(cfg.problem);
    const auto grid = build_grid(cfg.grid, *problem);
    const auto data = add_noise(problem, cfg.levels.front(), cfg.effective_noise_decay(), cfg.seed_base);
    std::vector<ConditionReport<double>> reports;
    for (auto v : {Condition::MC1, Condition::MC2})
        reports.push_back(condition_constant(data.noise_coeffs, problem->lambdas(), grid.values(), v));
    for (auto v : {Condition::REG1, Condition::REG2})
        reports.push_back(condition_constant(problem->xdag_coeffs(), problem->lambdas(), grid.values(), v));
    for (const auto& r : reports)
        std::cout << condition_name(r.variant) << " constant=" << format_number(r.constant)
                  << " argmax_alpha=" << format_number(r.argmax_alpha) << " bounded=" << (r.bounded() ? 1 : 0)
                  << "\n";
    if (!c.out.empty()) {
        Outputs out(c.out);
        auto f = out.open("conditions.csv");
        write_condition_csv(f, reports);
    }
    return 0;
}

struct BenchArgs
{
    std::string config;
    int jobs = 1;
    std::string levels;
    int runs = 0;
};

void write_experiment(const ExperimentReport& report, const fs::path& dir)
{
    Outputs out(dir);
    {
        auto f = out.open("raw.csv");
        write_raw_csv(f, report.records);
    }
    {
        auto f = out.open("conditions.csv");
        write_cell_csv(f, report.cells);
    }
    {
        auto f = out.open("report.md");
        f << render_report(report, ReportFormat::Markdown);
    }
    {
        auto f = out.open("report.svg");
        f << render_report(report, ReportFormat::Svg);
    }
}

int cmd_bench(const Common& c, const BenchArgs& b)
{
    std::vector<ExperimentConfig> configs;
    if (!b.config.empty()) {
        configs = load_config(b.config);
    } else {
        if (c.problem.empty())
            throw ParameterError("bench: give --config or --problem");
        ExperimentConfig cfg = single_config(c);
        cfg.name = "bench";
        cfg.levels = ExperimentConfig{}.levels;
        cfg.runs = ExperimentConfig{}.runs;
        configs.push_back(cfg);
    }
    for (auto& cfg : configs) {
        cfg.seed_base = *c.seed;
        if (!c.rules.empty())
            cfg.rules = split_list(c.rules);
        if (!c.metric.empty())
            cfg.metric = parse_metric(c.metric);
        if (!c.grid.empty())
            cfg.grid = parse_grid_spec(c.grid);
        if (c.noise_decay)
            cfg.noise_decay = c.noise_decay;
        if (!b.levels.empty()) {
            cfg.levels.clear();
            for (const auto& l : split_list(b.levels))
                cfg.levels.push_back(std::stod(l));
        }
        if (b.runs > 0)
            cfg.runs = b.runs;
        cfg.validate();
    }

    for (const auto& cfg : configs) {
        RunOptions opts;
        opts.jobs = b.jobs;
        opts.progress = [&](std::size_t done, std::size_t total) {
            std::cerr << "\r[" << cfg.name << "] " << done << "/" << total << " datasets" << std::flush;
            if (done == total)
                std::cerr << "\n";
        };
        const auto report = run_experiment(cfg, opts);
        const fs::path dir = configs.size() == 1 ? fs::path(c.out) : fs::path(c.out) / cfg.name;
        write_experiment(report, dir);
    }
    return 0;
}

struct RateArgs
{
    std::string levels = "1e-5,1e-4,1e-3,1e-2";
    int runs = 10;
    std::string rule = "simple-l";
};

int cmd_rate(const Common& c, const RateArgs& r)
{
    RateSpec spec;
    spec.problem = parse_problem_spec(c.problem);
    spec.levels.clear();
    for (const auto& l : split_list(r.levels))
        spec.levels.push_back(std::stod(l));
    spec.runs = r.runs;
    if (r.rule != "oracle")
        spec.rule = r.rule;
    spec.grid = parse_grid_spec(c.grid);
    spec.seed_base = *c.seed;
    spec.noise_decay = c.noise_decay;
    const auto result = rate_regression(spec);
    for (std::size_t i = 0; i < result.levels.size(); ++i)
        std::cout << "level=" << format_number(result.levels[i])
                  << " mean_log_error=" << format_number(result.mean_log_error[i]) << "\n";
    std::cout << "slope=" << format_number(result.slope) << " intercept=" << format_number(result.intercept)
              << " boundary_selections=" << result.boundary_selections << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heuristic parameter choice for Tikhonov-type regularization: test problems, rules, benchmarks."};
    app.require_subcommand(1);
    app.footer(kProblemHelp);

    Common c;
    BenchArgs bench_args;
    RateArgs rate_args;

    auto add_problem = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--problem", c.problem, "problem spec (see below)");
        if (required)
            o->required();
        sub->footer(kProblemHelp);
    };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", c.seed, "seed for all noise draws")->required(); };
    auto add_noise = [&](CLI::App* sub) {
        sub->add_option("--noise", c.noise, "relative noise level in (0, 1]")->required();
        sub->add_option("--noise-decay", c.noise_decay,
                        "noise coefficients decay like i^-q (default 0.6 diagonal, 0 matrix problems)");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid", c.grid, "alpha grid: min,max,count or count (default: problem range)");
    };

    auto* gen = app.add_subcommand("gen", "write a test problem to a file");
    add_problem(gen, true);
    gen->add_option("--out", c.out, "output file")->required();

    auto* curve = app.add_subcommand("curve", "path, error, rule and condition curves of one noisy dataset");
    add_problem(curve, true);
    add_noise(curve);
    add_seed(curve);
    add_grid(curve);
    curve->add_option("--rules", c.rules, "comma-separated rules (default: all)");
    curve->add_option("--out", c.out, "output directory")->required();

    auto* select = app.add_subcommand("select", "selected alpha and efficiency ratio of one noisy dataset");
    add_problem(select, true);
    add_noise(select);
    add_seed(select);
    add_grid(select);
    select->add_option("--rules,--rule", c.rules, "comma-separated rules (default: all)");
    select->add_option("--metric", c.metric, "error metric: l2, l1 or strict")
        ->check(CLI::IsMember({"l2", "l1", "strict"}));
    select->add_option("--penalty", c.penalty, "convex penalty: l1, l1.5 or tv (default: Tikhonov)");

    auto* bench = app.add_subcommand("bench", "run an experiment protocol and write raw.csv, report.md, report.svg");
    bench->add_option("--config", bench_args.config, "experiment config file ([name] sections of key = value)");
    add_problem(bench, false);
    add_seed(bench);
    add_grid(bench);
    bench->add_option("--rules", c.rules, "comma-separated rules, overrides the config");
    bench->add_option("--metric", c.metric, "error metric: l2, l1 or strict")
        ->check(CLI::IsMember({"l2", "l1", "strict"}));
    bench->add_option("--penalty", c.penalty, "convex penalty for --problem runs: l1, l1.5 or tv");
    bench->add_option("--levels", bench_args.levels, "comma-separated noise levels, overrides the config");
    bench->add_option("--runs", bench_args.runs, "runs per level, overrides the config")->check(CLI::PositiveNumber);
    bench->add_option("--noise-decay", c.noise_decay, "noise decay exponent, overrides the config");
    bench->add_option("--jobs", bench_args.jobs, "worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
    bench->add_option("--out", c.out, "output directory")->required();

    auto* diagnose = app.add_subcommand("diagnose", "noise and regularity condition constants of one dataset");
    add_problem(diagnose, true);
    add_noise(diagnose);
    add_seed(diagnose);
    add_grid(diagnose);
    diagnose->add_option("--out", c.out, "also write conditions.csv to this directory");

    auto* rate = app.add_subcommand("rate", "convergence rate of the error at the selected alpha");
    add_problem(rate, true);
    add_seed(rate);
    add_grid(rate);
    rate->add_option("--levels", rate_args.levels, "noise levels, at least 4 over two decades")
        ->capture_default_str();
    rate->add_option("--runs", rate_args.runs, "seeds per level")->capture_default_str()->check(CLI::PositiveNumber);
    rate->add_option("--rule", rate_args.rule, "rule, or `oracle` for the error-curve minimizer")
        ->capture_default_str();
    rate->add_option("--noise-decay", c.noise_decay, "noise decay exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_gen(c);
        if (curve->parsed())
            return cmd_curve(c);
        if (select->parsed())
            return cmd_select(c);
        if (bench->parsed())
            return cmd_bench(c, bench_args);
        if (diagnose->parsed())
            return cmd_diagnose(c);
        if (rate->parsed())
            return cmd_rate(c, rate_args);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
