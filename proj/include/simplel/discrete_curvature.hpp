#pragma once

#include "simplel/core.hpp"

#include <cmath>
#include <limits>

namespace simplel
{

/// Signed Menger curvature of each consecutive point triple.
///
/// Entry k uses points k-1, k, k+1; the endpoints have no triple and are NaN.
/// Positive values turn counter-clockwise. Degenerate (collinear or repeated)
/// triples give 0.
template <typename Scalar>
Vector<Scalar> discrete_curvature(const Vector<Scalar>& xs, const Vector<Scalar>& ys)
{
    using std::sqrt;
    const Eigen::Index n = xs.size();
    if (n < 3 || ys.size() != n)
        throw ParameterError("discrete_curvature: need >= 3 points with matching coordinates");
    const bool increasing = xs[1] > xs[0];
    for (Eigen::Index k = 1; k < n; ++k) {
        if (increasing ? !(xs[k] > xs[k - 1]) : !(xs[k] < xs[k - 1]))
            throw ParameterError("discrete_curvature: xs must be strictly monotone");
    }

    Vector<Scalar> kappa(n);
    kappa[0] = kappa[n - 1] = std::numeric_limits<Scalar>::quiet_NaN();
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        const Scalar ax = xs[k] - xs[k - 1], ay = ys[k] - ys[k - 1];
        const Scalar bx = xs[k + 1] - xs[k], by = ys[k + 1] - ys[k];
        const Scalar cx = xs[k + 1] - xs[k - 1], cy = ys[k + 1] - ys[k - 1];
        const Scalar cross = ax * by - ay * bx;
        const Scalar lengths = sqrt((ax * ax + ay * ay) * (bx * bx + by * by) * (cx * cx + cy * cy));
        kappa[k] = (cross == Scalar(0) || lengths == Scalar(0)) ? Scalar(0) : Scalar(2) * cross / lengths;
    }
    return kappa;
}

} // namespace simplel
