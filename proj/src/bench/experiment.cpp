#include "simplel/bench/experiment.hpp"

#include "simplel/conditions.hpp"
#include "simplel/convex/rules.hpp"
#include "simplel/rules.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace simplel::bench
{

namespace
{

bool same(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

void fill_record(RawRecord& rec, const std::vector<double>& err, double min_err, const Eigen::VectorXd& alpha,
                 const SelectionResult<double>& sel)
{
    rec.alpha_star = alpha[sel.grid_index];
    rec.interior = sel.interior;
    rec.selected_error = err[static_cast<std::size_t>(sel.grid_index)];
    rec.min_error = min_err;
    rec.J = efficiency_ratio(rec.selected_error, min_err);
    if (std::isnan(rec.J))
        rec.failure = "efficiency ratio undefined (zero minimum error)";
}

double min_of(const std::vector<double>& v)
{
    double m = std::numeric_limits<double>::infinity();
    for (double x : v)
        if (x < m)
            m = x;
    return m;
}

void linear_cell(const ExperimentConfig& config, const NoisySpectrum<double>& data, const AlphaGrid<double>& grid,
                 CellOutcome& out)
{
    const auto& problem = *data.problem;
    const auto path = path_quantities(data, grid);

    std::vector<double> err;
    if (config.effective_metric() == Metric::L2) {
        err = to_std(error_curve(data, grid).total);
    } else {
        const Eigen::VectorXd xdag = problem.has_basis() ? problem.basis().solution : problem.xdag_coeffs();
        err.reserve(static_cast<std::size_t>(grid.size()));
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            const Eigen::VectorXd x = problem.to_domain(tikhonov_coeffs(data, grid[k]).solution);
            err.push_back((x - xdag).lpNorm<1>());
        }
    }
    const double min_err = min_of(err);

    auto& sc = out.curves;
    sc.alpha = to_std(path.alpha);
    sc.residual_norm = to_std(path.rho.cwiseSqrt());
    sc.solution_size = to_std(path.eta.cwiseSqrt());
    sc.error = err;

    for (const auto& name : config.rules) {
        RawRecord rec;
        rec.level = data.rel_level;
        rec.seed = data.seed;
        rec.rule = name;
        std::vector<double> values(static_cast<std::size_t>(grid.size()), std::numeric_limits<double>::quiet_NaN());
        long index = -1;
        try {
            const auto curve = rule_curve(*parse_rule(name), data, path, grid);
            values = to_std(curve.values);
            const auto sel = select_alpha(curve);
            fill_record(rec, err, min_err, path.alpha, sel);
            index = static_cast<long>(sel.grid_index);
        } catch (const std::exception& e) {
            rec.failure = e.what();
        }
        sc.rules.push_back(name);
        sc.rule_values.push_back(std::move(values));
        sc.selected_index.push_back(index);
        out.records.push_back(std::move(rec));
    }
}

void convex_cell(const ExperimentConfig& config, const NoisySpectrum<double>& data, const AlphaGrid<double>& grid,
                 CellOutcome& out)
{
    using namespace simplel::convex;
    const auto& problem = *data.problem;
    const Penalty<double> pen{*config.penalty};
    const auto op = LinearOperator<double>::from_problem(problem);

    Eigen::VectorXd xdag, y;
    if (problem.has_basis()) {
        const auto& b = problem.basis();
        xdag = b.solution;
        y = b.operator_matrix * xdag + b.range * data.noise_coeffs;
    } else {
        xdag = problem.xdag_coeffs();
        y = data.data_coeffs;
    }

    const Eigen::Index m = grid.size();
    const FistaOptions opts;
    std::vector<ConvexSolveResult<double>> first, second;
    first.reserve(static_cast<std::size_t>(m));
    second.reserve(static_cast<std::size_t>(m));
    std::optional<Eigen::VectorXd> warm;
    for (Eigen::Index k = 0; k < m; ++k) {
        first.push_back(fista_solve(op, y, grid[k], pen, opts, warm));
        warm = first.back().x;
        second.push_back(bregman_second(op, y, grid[k], pen, first.back(), opts));
    }

    const Metric metric = config.effective_metric();
    std::vector<double> err;
    auto& sc = out.curves;
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::VectorXd& x = first[static_cast<std::size_t>(k)].x;
        switch (metric) {
        case Metric::L2:
            err.push_back((x - xdag).norm());
            break;
        case Metric::L1:
            err.push_back((x - xdag).lpNorm<1>());
            break;
        case Metric::Strict:
            err.push_back(strict_metric(x, xdag, pen));
            break;
        }
        sc.residual_norm.push_back((op.apply(x) - y).norm());
        sc.solution_size.push_back(pen.value(x));
    }
    const double min_err = min_of(err);
    sc.alpha = to_std(grid.values());
    sc.error = err;

    for (const auto& name : config.rules) {
        const ConvexRuleId rule = *parse_convex_rule(name);
        RawRecord rec;
        rec.level = data.rel_level;
        rec.seed = data.seed;
        rec.rule = name;
        Eigen::VectorXd values(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            BregmanPair<double> in{&first[uk], &second[uk], k + 1 < m ? &first[uk + 1].x : nullptr};
            const auto v = convex_rule_value(rule, pen, in);
            values[k] = v.value;
            if (rule == ConvexRuleId::QuasiOptimalityRight) {
                ++out.summary.bregman_evaluations;
                out.summary.clamped += v.clamped ? 1 : 0;
            }
        }
        long index = -1;
        try {
            const auto sel = select_extremum(grid.values(), values, Sense::Minimize);
            fill_record(rec, err, min_err, grid.values(), sel);
            index = static_cast<long>(sel.grid_index);
        } catch (const std::exception& e) {
            rec.failure = e.what();
        }
        sc.rules.push_back(name);
        sc.rule_values.push_back(to_std(values));
        sc.selected_index.push_back(index);
        out.records.push_back(std::move(rec));
    }
}

} // namespace

std::uint64_t cell_seed(std::uint64_t seed_base, int run, std::size_t level_index)
{
    return seed_base + static_cast<std::uint64_t>(run) * kSeedRunStride + level_index;
}

bool RawRecord::operator==(const RawRecord& o) const
{
    return level == o.level && seed == o.seed && rule == o.rule && same(alpha_star, o.alpha_star) &&
           interior == o.interior && same(J, o.J) && same(selected_error, o.selected_error) &&
           same(min_error, o.min_error);
}

bool ClassMedian::operator==(const ClassMedian& o) const
{
    return cls == o.cls && rule == o.rule && same(median_J, o.median_J) && samples == o.samples &&
           failures == o.failures && boundary == o.boundary;
}

double efficiency_ratio(double selected_error, double min_error)
{
    if (!(min_error > 0.0) || !std::isfinite(min_error) || !std::isfinite(selected_error))
        return std::numeric_limits<double>::quiet_NaN();
    return selected_error / min_error;
}

NoiseClass noise_class(double level)
{
    if (level <= 1e-3)
        return NoiseClass::Small;
    if (level <= 5e-2)
        return NoiseClass::Medium;
    if (level <= 0.2)
        return NoiseClass::Large;
    return NoiseClass::Half;
}

std::string_view noise_class_label(NoiseClass c)
{
    switch (c) {
    case NoiseClass::Small:
        return "small";
    case NoiseClass::Medium:
        return "medium";
    case NoiseClass::Large:
        return "large";
    case NoiseClass::Half:
        return "50%";
    }
    return "?";
}

double lower_median(std::vector<double> values)
{
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

std::vector<ClassMedian> aggregate(const std::vector<RawRecord>& records, const std::vector<std::string>& rules)
{
    std::vector<ClassMedian> out;
    for (NoiseClass c : kNoiseClasses) {
        bool any = false;
        for (const auto& r : records)
            any = any || noise_class(r.level) == c;
        if (!any)
            continue;
        for (const auto& rule : rules) {
            ClassMedian cm;
            cm.cls = c;
            cm.rule = rule;
            std::vector<double> js;
            for (const auto& r : records) {
                if (r.rule != rule || noise_class(r.level) != c)
                    continue;
                if (std::isfinite(r.J)) {
                    js.push_back(r.J);
                    ++cm.samples;
                } else {
                    ++cm.failures;
                }
                if (std::isfinite(r.alpha_star) && !r.interior)
                    ++cm.boundary;
            }
            cm.median_J = lower_median(std::move(js));
            out.push_back(std::move(cm));
        }
    }
    return out;
}

ResolvedGrid resolve_grid(const ExperimentConfig& config, const SpectralProblem<double>& problem)
{
    const auto grid =
        build_grid(config.grid, problem, config.is_convex() ? kConvexGridCount : kDefaultGridCount);
    return {grid.values().minCoeff(), grid.values().maxCoeff(), grid.size()};
}

CellOutcome run_cell(const ExperimentConfig& config, std::shared_ptr<const SpectralProblem<double>> problem,
                     double level, std::uint64_t seed)
{
    const auto grid =
        build_grid(config.grid, *problem, config.is_convex() ? kConvexGridCount : kDefaultGridCount);
    const auto data = add_noise(problem, level, config.effective_noise_decay(), seed);

    CellOutcome out;
    out.summary.level = level;
    out.summary.seed = seed;
    const auto& l = problem->lambdas();
    out.summary.C1 = condition_constant(data.noise_coeffs, l, grid.values(), Condition::MC1).constant;
    out.summary.C2 = condition_constant(data.noise_coeffs, l, grid.values(), Condition::MC2).constant;
    out.summary.D = condition_constant(problem->xdag_coeffs(), l, grid.values(), Condition::REG1).constant;
    out.curves.level = level;
    out.curves.seed = seed;

    if (config.is_convex())
        convex_cell(config, data, grid, out);
    else
        linear_cell(config, data, grid, out);
    return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
    config.validate();
    const auto problem = build_problem(config.problem);

    ExperimentReport report;
    report.config = config;
    report.grid = resolve_grid(config, *problem);

    const std::size_t levels = config.levels.size();
    const std::size_t total = levels * static_cast<std::size_t>(config.runs);
    std::vector<CellOutcome> cells(total);

    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::size_t done = 0;
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total)
                return;
            const std::size_t li = task / static_cast<std::size_t>(config.runs);
            const int run = static_cast<int>(task % static_cast<std::size_t>(config.runs));
            try {
                cells[task] = run_cell(config, problem, config.levels[li], cell_seed(config.seed_base, run, li));
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!error)
                    error = std::current_exception();
                next = total;
                return;
            }
            std::lock_guard lock(mutex);
            ++done;
            if (options.progress)
                options.progress(done, total);
        }
    };

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(total)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);

    for (std::size_t t = 0; t < total; ++t) {
        auto& c = cells[t];
        for (auto& r : c.records)
            report.records.push_back(std::move(r));
        report.cells.push_back(c.summary);
    }
    if (total > 0)
        report.showcase = std::move(cells.front().curves);
    return report;
}

} // namespace simplel::bench
