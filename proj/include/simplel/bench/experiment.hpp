#pragma once

#include "simplel/bench/config.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace simplel::bench
{

inline constexpr std::uint64_t kSeedRunStride = 1009;

/// seed_base + run * 1009 + level_index
std::uint64_t cell_seed(std::uint64_t seed_base, int run, std::size_t level_index);

/// One (level, seed, rule) outcome. A failed rule leaves NaN in the numeric fields.
struct RawRecord
{
    double level = 0;
    std::uint64_t seed = 0;
    std::string rule;
    double alpha_star = std::numeric_limits<double>::quiet_NaN();
    bool interior = false;
    double J = std::numeric_limits<double>::quiet_NaN();
    double selected_error = std::numeric_limits<double>::quiet_NaN();
    double min_error = std::numeric_limits<double>::quiet_NaN();
    std::string failure; // not serialized

    bool operator==(const RawRecord& o) const;
};

/// Per-(level, seed) diagnostics: condition constants of the noise (C1, C2) and of
/// the solution (D, the REG1 constant), and Bregman clamp counts for convex runs.
struct CellSummary
{
    double level = 0;
    std::uint64_t seed = 0;
    double C1 = 0;
    double C2 = 0;
    double D = 0;
    int clamped = 0;
    int bregman_evaluations = 0;

    bool operator==(const CellSummary& o) const = default;
};

/// selected / min; NaN when the minimum is zero or not finite.
double efficiency_ratio(double selected_error, double min_error);

enum class NoiseClass
{
    Small,  // <= 0.1%
    Medium, // <= 5%
    Large,  // <= 20%
    Half    // above 20%, the separate 50% row
};

inline constexpr std::array kNoiseClasses{NoiseClass::Small, NoiseClass::Medium, NoiseClass::Large, NoiseClass::Half};

NoiseClass noise_class(double level);
std::string_view noise_class_label(NoiseClass c);

/// Lower median of the finite entries; NaN if there are none.
double lower_median(std::vector<double> values);

struct ClassMedian
{
    NoiseClass cls = NoiseClass::Small;
    std::string rule;
    double median_J = std::numeric_limits<double>::quiet_NaN();
    int samples = 0;  // finite J values
    int failures = 0; // NaN J values
    int boundary = 0; // selections at a grid endpoint

    bool operator==(const ClassMedian& o) const;
};

/// Medians per (class, rule) in class-then-rule order, skipping classes without records.
std::vector<ClassMedian> aggregate(const std::vector<RawRecord>& records, const std::vector<std::string>& rules);

/// Curves of the first cell, kept for the SVG.
struct Showcase
{
    double level = 0;
    std::uint64_t seed = 0;
    std::vector<double> alpha;
    std::vector<double> residual_norm;
    std::vector<double> solution_size; // ||x|| for Tikhonov, R(x) for convex runs
    std::vector<std::string> rules;
    std::vector<std::vector<double>> rule_values;
    std::vector<long> selected_index; // -1 on failure
    std::vector<double> error;
};

struct ResolvedGrid
{
    double alpha_min = 0;
    double alpha_max = 0;
    Eigen::Index count = 0;
};

struct ExperimentReport
{
    ExperimentConfig config;
    ResolvedGrid grid;
    std::vector<RawRecord> records; // level, then run, then configured rule order
    std::vector<CellSummary> cells;
    std::optional<Showcase> showcase;

    std::vector<ClassMedian> medians() const { return aggregate(records, config.rules); }
};

ResolvedGrid resolve_grid(const ExperimentConfig& config, const SpectralProblem<double>& problem);

struct RunOptions
{
    int jobs = 1;
    // Called after each finished cell with (done, total); from worker threads, serialized.
    std::function<void(std::size_t, std::size_t)> progress;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Everything for one noisy dataset, as used by the run and by the CLI.
struct CellOutcome
{
    std::vector<RawRecord> records;
    CellSummary summary;
    Showcase curves;
};

CellOutcome run_cell(const ExperimentConfig& config, std::shared_ptr<const SpectralProblem<double>> problem,
                     double level, std::uint64_t seed);

} // namespace simplel::bench
