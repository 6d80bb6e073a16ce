#pragma once

#include "simplel/bench/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace simplel::bench
{

struct RateSpec
{
    ProblemSpec problem;
    std::vector<double> levels{1e-5, 1e-4, 1e-3, 1e-2};
    int runs = 10;
    std::optional<std::string> rule; // empty: the oracle choice (argmin of the error curve)
    GridSpec grid;
    std::uint64_t seed_base = 0;
    std::optional<double> noise_decay;
};

/// Least-squares fit of mean log error against log level.
struct RateResult
{
    double slope = 0;
    double intercept = 0;
    std::vector<double> levels;
    std::vector<double> mean_log_error; // mean over seeds of log ||x_sel - x||
    int boundary_selections = 0;
};

/// Throws ParameterError for fewer than 4 levels or a span under two decades and
/// NumericalError when a selected error is zero.
RateResult rate_regression(const RateSpec& spec);

} // namespace simplel::bench
