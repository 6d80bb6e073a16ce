#pragma once

#include "simplel/noise.hpp"

#include <vector>

namespace simplel
{

/// Landweber iterates x_{k+1} = x_k + w A^*(y_delta - A x_k), x_0 = 0, in spectral
/// coordinates, with the two discrete simple-L functionals
///   psi_residual(k) = <A x_k, y_delta - A x_k>
///   psi_doubling(k) = <x_k, x_{2k} - x_k>   (k <= steps / 2)
template <typename Scalar = double>
struct LandweberRun
{
    Scalar stepsize = 0;
    std::vector<Vector<Scalar>> iterates; // x_0 .. x_steps
    Vector<Scalar> psi_residual;
    Vector<Scalar> psi_doubling;
    Vector<Scalar> residual_norm; // ||y_delta - A x_k||, out-of-range data included
    Eigen::Index selected_residual = 0;
    bool residual_interior = false;
    Eigen::Index selected_doubling = 0;
    bool doubling_interior = false;
};

namespace detail
{

// Smallest value among strict interior local minima, else the better endpoint.
template <typename Scalar>
std::pair<Eigen::Index, bool> interior_argmin(const Vector<Scalar>& v)
{
    const Eigen::Index n = v.size();
    Eigen::Index best = -1;
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        if (v[k] < v[k - 1] && v[k] < v[k + 1] && (best < 0 || v[k] < v[best]))
            best = k;
    }
    if (best >= 0)
        return {best, true};
    return {v[n - 1] < v[0] ? n - 1 : 0, false};
}

} // namespace detail

template <typename Scalar>
LandweberRun<Scalar> landweber_run(const NoisySpectrum<Scalar>& data, Eigen::Index steps, Scalar stepsize)
{
    const auto& sigma = data.singular_values();
    const Scalar s1 = sigma[0];
    if (!(stepsize > Scalar(0)) || !(stepsize < Scalar(2) / (s1 * s1)))
        throw ParameterError("landweber_run: stepsize must lie in (0, 2 / sigma_1^2)");
    if (steps < 2)
        throw ParameterError("landweber_run: need at least 2 steps");

    const auto& d = data.data_coeffs;
    const Scalar oor2 = data.out_of_range_norm() * data.out_of_range_norm();
    LandweberRun<Scalar> run;
    run.stepsize = stepsize;
    run.iterates.reserve(static_cast<std::size_t>(steps + 1));
    run.psi_residual.resize(steps + 1);
    run.residual_norm.resize(steps + 1);

    Vector<Scalar> x = Vector<Scalar>::Zero(data.size());
    for (Eigen::Index k = 0;; ++k) {
        const Vector<Scalar> ax = sigma.cwiseProduct(x);
        const Vector<Scalar> p = d - ax;
        run.psi_residual[k] = ax.dot(p);
        run.residual_norm[k] = std::sqrt(p.squaredNorm() + oor2);
        run.iterates.push_back(x);
        if (k == steps)
            break;
        x += stepsize * sigma.cwiseProduct(p);
    }

    const Eigen::Index half = steps / 2;
    run.psi_doubling.resize(half + 1);
    for (Eigen::Index k = 0; k <= half; ++k) {
        const auto& xk = run.iterates[static_cast<std::size_t>(k)];
        run.psi_doubling[k] = xk.dot(run.iterates[static_cast<std::size_t>(2 * k)] - xk);
    }

    // k = 0 gives psi = 0 trivially; selection starts at k = 1.
    auto [kr, ir] = detail::interior_argmin<Scalar>(run.psi_residual.tail(steps));
    run.selected_residual = kr + 1;
    run.residual_interior = ir;
    if (half >= 3) {
        auto [kd, id] = detail::interior_argmin<Scalar>(run.psi_doubling.tail(half));
        run.selected_doubling = kd + 1;
        run.doubling_interior = id;
    } else {
        run.selected_doubling = half;
    }
    return run;
}

} // namespace simplel
