#pragma once

#include "simplel/alpha_grid.hpp"
#include "simplel/convex/penalty.hpp"
#include "simplel/test_problems.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace simplel::bench
{

enum class ProblemKind
{
    Diagonal,
    Heat,
    Radon,
    File
};

/// Problem description, written inline as `kind:key=value,...`:
///   diag:s=2,mu=0.25,n=1000[,margin=0.1]
///   heat:n=64[,solution=standard|blocky]
///   radon:img=8[,angles=12,rays=12]
///   file:path/to/problem.txt
struct ProblemSpec
{
    ProblemKind kind = ProblemKind::Diagonal;
    Eigen::Index n = 1000;
    double s = 2.0;
    double mu = 0.25;
    double margin = 0.1;
    HeatSolution heat_solution = HeatSolution::Standard;
    Eigen::Index img_n = 8;
    Eigen::Index angles = 12;
    Eigen::Index rays = 12;
    std::string path;

    bool is_matrix() const { return kind == ProblemKind::Heat || kind == ProblemKind::Radon; }
};

ProblemSpec parse_problem_spec(const std::string& text);
std::string format_problem_spec(const ProblemSpec& spec);
std::shared_ptr<const SpectralProblem<double>> build_problem(const ProblemSpec& spec);

/// Noise decay exponent used when none is given: 0.6 for diagonal problems, 0 otherwise.
double default_noise_decay(const ProblemSpec& spec);

/// `min,max,count`, or only a count, or nothing for the problem's default range.
struct GridSpec
{
    std::optional<double> alpha_min;
    std::optional<double> alpha_max;
    std::optional<Eigen::Index> count;
};

GridSpec parse_grid_spec(const std::string& text);
std::string format_grid_spec(const GridSpec& spec);
AlphaGrid<double> build_grid(const GridSpec& spec, const SpectralProblem<double>& problem,
                             Eigen::Index default_count = kDefaultGridCount);

inline constexpr Eigen::Index kConvexGridCount = 40;

enum class Metric
{
    L2,
    L1,
    Strict
};

std::string_view metric_name(Metric m);
Metric parse_metric(const std::string& text);

struct ExperimentConfig
{
    std::string name = "experiment";
    ProblemSpec problem;
    std::vector<double> levels{1e-4, 1e-3, 1e-2, 5e-2, 0.1, 0.2, 0.5};
    int runs = 10;
    std::vector<std::string> rules;
    GridSpec grid;
    std::uint64_t seed_base = 0;
    std::optional<Metric> metric;
    std::optional<convex::PenaltyKind> penalty; // set for the convex branch
    std::optional<double> noise_decay;

    bool is_convex() const { return penalty.has_value(); }
    Metric effective_metric() const;
    double effective_noise_decay() const;
    /// Throws ParameterError on an invalid combination.
    void validate() const;
};

/// Rules run when a config lists none.
std::vector<std::string> default_rules(bool convex);

/// Sectioned `key = value` text. `[name]` starts an experiment; keys before the
/// first section form one unnamed experiment. `#` starts a comment.
///
/// Keys: problem, levels, runs, rules, grid, seed, metric, penalty, noise_decay.
std::vector<ExperimentConfig> parse_config(std::istream& in);
std::vector<ExperimentConfig> load_config(const std::string& path);

/// Writes a config back in the same format (used as the report's config echo).
std::string format_config(const ExperimentConfig& config);

/// Shortest of %.15g / %.17g that reads back to the same double.
std::string format_number(double value);

std::vector<std::string> split_list(const std::string& text, char sep = ',');
std::string trim(const std::string& text);

} // namespace simplel::bench
