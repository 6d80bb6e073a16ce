#pragma once

#include "simplel/spectral_problem.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>

namespace simplel
{

/// Noisy data y_delta = y + e in spectral coordinates.
template <typename Scalar = double>
struct NoisySpectrum
{
    std::shared_ptr<const SpectralProblem<Scalar>> problem;
    Vector<Scalar> noise_coeffs; // <e, v_i>
    Scalar rel_level = 0;
    Scalar abs_delta = 0; // ||e||
    std::uint64_t seed = 0;
    Vector<Scalar> data_coeffs; // <y_delta, v_i>

    const Vector<Scalar>& lambdas() const { return problem->lambdas(); }
    const Vector<Scalar>& singular_values() const { return problem->singular_values(); }
    Scalar out_of_range_norm() const { return problem->out_of_range_norm(); }
    Eigen::Index size() const { return problem->size(); }
};

/// Wraps explicit noise coefficients (no rescaling). Used for exact data and tests.
template <typename Scalar>
NoisySpectrum<Scalar> with_noise(std::shared_ptr<const SpectralProblem<Scalar>> problem, Vector<Scalar> noise,
                                 std::uint64_t seed = 0)
{
    if (noise.size() != problem->size())
        throw ParameterError("noise length does not match problem size");
    NoisySpectrum<Scalar> out;
    out.abs_delta = noise.norm();
    const Scalar ynorm = problem->ydata_coeffs().norm();
    out.rel_level = ynorm > Scalar(0) ? out.abs_delta / ynorm : Scalar(0);
    out.seed = seed;
    out.data_coeffs = problem->ydata_coeffs() + noise;
    out.noise_coeffs = std::move(noise);
    out.problem = std::move(problem);
    return out;
}

template <typename Scalar>
NoisySpectrum<Scalar> exact_data(std::shared_ptr<const SpectralProblem<Scalar>> problem)
{
    Vector<Scalar> zero = Vector<Scalar>::Zero(problem->size());
    return with_noise(std::move(problem), std::move(zero));
}

/// Gaussian noise e_i = c * i^(-decay_q) * g_i, g_i ~ N(0, 1), with c fixed so that
/// ||e|| / ||y|| equals rel_level.
template <typename Scalar>
NoisySpectrum<Scalar> add_noise(std::shared_ptr<const SpectralProblem<Scalar>> problem, Scalar rel_level,
                                Scalar decay_q, std::uint64_t seed)
{
    using std::pow;
    if (!(rel_level > Scalar(0)))
        throw ParameterError("relative noise level must be positive");
    const Scalar ynorm = problem->ydata_coeffs().norm();
    if (!(ynorm > Scalar(0)))
        throw ParameterError("relative noise is undefined for zero data");

    const Eigen::Index n = problem->size();
    Vector<Scalar> e(n);
    std::uint64_t draw_seed = seed;
    for (;;) {
        std::mt19937_64 rng(draw_seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index k = 0; k < n; ++k)
            e[k] = pow(Scalar(k + 1), -decay_q) * Scalar(normal(rng));
        if (e.norm() > Scalar(0))
            break;
        ++draw_seed;
    }
    e *= rel_level * ynorm / e.norm();

    NoisySpectrum<Scalar> out = with_noise(std::move(problem), std::move(e), seed);
    out.rel_level = rel_level;
    return out;
}

} // namespace simplel
