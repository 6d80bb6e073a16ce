#pragma once

#include "simplel/spectral_problem.hpp"

#include <algorithm>
#include <cmath>

namespace simplel
{

/// Geometric grid alpha_k = alpha_max * q^k, k = 0..count-1, strictly decreasing.
template <typename Scalar = double>
class AlphaGrid
{
public:
    AlphaGrid(Scalar alpha_min, Scalar alpha_max, Eigen::Index count)
        : alpha_min_(alpha_min), alpha_max_(alpha_max), values_(count)
    {
        using std::pow;
        if (count < 3)
            throw ParameterError("alpha grid needs at least 3 points");
        if (!(alpha_min > Scalar(0)) || !(alpha_min < alpha_max))
            throw ParameterError("alpha grid needs 0 < alpha_min < alpha_max");
        const Scalar ratio = pow(alpha_min / alpha_max, Scalar(1) / Scalar(count - 1));
        for (Eigen::Index k = 0; k < count; ++k)
            values_[k] = alpha_max * pow(ratio, Scalar(k));
        values_[count - 1] = alpha_min;
    }

    Scalar alpha_min() const { return alpha_min_; }
    Scalar alpha_max() const { return alpha_max_; }
    Scalar ratio() const { return values_[1] / values_[0]; }
    Eigen::Index size() const { return values_.size(); }
    Scalar operator[](Eigen::Index k) const { return values_[k]; }
    const Vector<Scalar>& values() const { return values_; }

private:
    Scalar alpha_min_;
    Scalar alpha_max_;
    Vector<Scalar> values_;
};

inline constexpr Eigen::Index kDefaultGridCount = 200;
inline constexpr double kDefaultGridFloor = 1e-9;

/// [max(sigma_min^2, floor * sigma_1^2), sigma_1^2] with `count` points.
template <typename Scalar>
AlphaGrid<Scalar> default_grid(const SpectralProblem<Scalar>& problem, Eigen::Index count = kDefaultGridCount,
                               Scalar floor = Scalar(kDefaultGridFloor))
{
    const Scalar top = problem.lambdas()[0];
    const Scalar bottom = problem.lambdas()[problem.size() - 1];
    Scalar lo = std::max(bottom, floor * top);
    if (!(lo < top))
        lo = floor * top;
    return AlphaGrid<Scalar>(lo, top, count);
}

} // namespace simplel
