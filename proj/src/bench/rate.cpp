#include "simplel/bench/rate.hpp"

#include "simplel/bench/experiment.hpp"
#include "simplel/rules.hpp"

#include <algorithm>
#include <cmath>

namespace simplel::bench
{

RateResult rate_regression(const RateSpec& spec)
{
    if (spec.levels.size() < 4)
        throw ParameterError("rate: need at least 4 noise levels");
    const auto [lo, hi] = std::minmax_element(spec.levels.begin(), spec.levels.end());
    if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12))
        throw ParameterError("rate: noise levels must be positive and span at least two decades");
    if (spec.runs < 1)
        throw ParameterError("rate: runs must be at least 1");
    std::optional<RuleId> rule;
    if (spec.rule) {
        rule = parse_rule(*spec.rule);
        if (!rule)
            throw ParameterError("rate: unknown rule '" + *spec.rule + "'");
    }

    const auto problem = build_problem(spec.problem);
    const auto grid = build_grid(spec.grid, *problem);
    const double decay = spec.noise_decay.value_or(default_noise_decay(spec.problem));

    RateResult out;
    for (std::size_t li = 0; li < spec.levels.size(); ++li) {
        double sum = 0;
        for (int run = 0; run < spec.runs; ++run) {
            const auto data = add_noise(problem, spec.levels[li], decay, cell_seed(spec.seed_base, run, li));
            const auto err = error_curve(data, grid);
            Eigen::Index index = err.argmin;
            if (rule) {
                const auto sel = select_alpha(rule_curve(*rule, data, path_quantities(data, grid), grid));
                index = sel.grid_index;
                out.boundary_selections += sel.interior ? 0 : 1;
            }
            const double e = err.total[index];
            if (!(e > 0.0))
                throw NumericalError("rate: zero error at the selected alpha");
            sum += std::log(e);
        }
        out.levels.push_back(spec.levels[li]);
        out.mean_log_error.push_back(sum / spec.runs);
    }

    const auto n = static_cast<double>(out.levels.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < out.levels.size(); ++i) {
        mx += std::log(out.levels[i]);
        my += out.mean_log_error[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < out.levels.size(); ++i) {
        const double dx = std::log(out.levels[i]) - mx;
        sxy += dx * (out.mean_log_error[i] - my);
        sxx += dx * dx;
    }
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    return out;
}

} // namespace simplel::bench
