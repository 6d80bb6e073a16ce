#pragma once

#include "simplel/alpha_grid.hpp"

#include <cmath>
#include <limits>
#include <string_view>

namespace simplel
{

/// Noise conditions (MC1, MC2) act on <e, v_i>; regularity conditions (REG1, REG2) on <x, u_i>.
enum class Condition
{
    MC1,
    MC2,
    REG1,
    REG2
};

std::string_view condition_name(Condition c);

template <typename Scalar = double>
struct ConditionReport
{
    Condition variant = Condition::MC1;
    Scalar constant = 0; // +inf when unbounded
    Scalar argmax_alpha = 0;
    Vector<Scalar> alphas;
    Vector<Scalar> lhs;
    Vector<Scalar> rhs;
    Vector<Scalar> ratios; // NaN where both sides vanish

    bool bounded() const { return std::isfinite(static_cast<double>(constant)); }
};

/// Smallest constant C with LHS(alpha) <= C * RHS(alpha) over the grid, where
///   MC1:  sum_{l >= a} (a/l) e^2   <= C sum_{l <= a} e^2
///   MC2:  sum_{l >= a} (a/l) e^2   <= C sum_{l <= a} (l/a) e^2
///   REG1: sum_{l <= a} x^2         <= D sum_{l >= a} (a/l) x^2
///   REG2: sum_{l <= a} x^2         <= D sum_{l >= a} (a/l)^2 x^2
/// Indices with lambda_i == alpha count on both sides.
template <typename Scalar>
ConditionReport<Scalar> condition_constant(const Vector<Scalar>& coeffs, const Vector<Scalar>& lambdas,
                                           const Vector<Scalar>& grid, Condition variant)
{
    if (grid.size() == 0)
        throw ParameterError("condition_constant: empty alpha grid");
    if (coeffs.size() != lambdas.size())
        throw ParameterError("condition_constant: coefficient and lambda lengths differ");

    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    ConditionReport<Scalar> report;
    report.variant = variant;
    report.alphas = grid;
    report.lhs.resize(grid.size());
    report.rhs.resize(grid.size());
    report.ratios.resize(grid.size());
    report.constant = Scalar(0);
    report.argmax_alpha = grid[0];

    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const Scalar a = grid[k];
        Scalar lhs = 0;
        Scalar rhs = 0;
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            const Scalar l = lambdas[i];
            const Scalar c2 = coeffs[i] * coeffs[i];
            const bool upper = l >= a;
            const bool lower = l <= a;
            switch (variant) {
            case Condition::MC1:
                if (upper)
                    lhs += a / l * c2;
                if (lower)
                    rhs += c2;
                break;
            case Condition::MC2:
                if (upper)
                    lhs += a / l * c2;
                if (lower)
                    rhs += l / a * c2;
                break;
            case Condition::REG1:
                if (lower)
                    lhs += c2;
                if (upper)
                    rhs += a / l * c2;
                break;
            case Condition::REG2:
                if (lower)
                    lhs += c2;
                if (upper)
                    rhs += (a / l) * (a / l) * c2;
                break;
            }
        }
        report.lhs[k] = lhs;
        report.rhs[k] = rhs;
        Scalar ratio;
        if (rhs > Scalar(0))
            ratio = lhs / rhs;
        else
            ratio = lhs > Scalar(0) ? inf : nan;
        report.ratios[k] = ratio;
        if (ratio > report.constant) {
            report.constant = ratio;
            report.argmax_alpha = a;
        }
    }
    return report;
}

inline std::string_view condition_name(Condition c)
{
    switch (c) {
    case Condition::MC1:
        return "MC1";
    case Condition::MC2:
        return "MC2";
    case Condition::REG1:
        return "REG1";
    case Condition::REG2:
        return "REG2";
    }
    return "?";
}

} // namespace simplel
