#pragma once

#include "simplel/convex/fista.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>

namespace simplel::convex
{

enum class ConvexRuleId
{
    SimpleLBregman,      // |R(x_II) - R(x_I)|
    SimpleLRatioBregman, // |R(x_II) - R(x_I)| / R(x_I)
    SimpleLDiscrete,     // |R(x at next grid alpha) - R(x_I)|
    QuasiOptimalityRight // Bregman distance D_xi(x_II, x_I)
};

inline constexpr std::array kAllConvexRules{ConvexRuleId::SimpleLBregman, ConvexRuleId::SimpleLRatioBregman,
                                            ConvexRuleId::SimpleLDiscrete, ConvexRuleId::QuasiOptimalityRight};

constexpr std::string_view convex_rule_name(ConvexRuleId rule)
{
    switch (rule) {
    case ConvexRuleId::SimpleLBregman:
        return "simple-l";
    case ConvexRuleId::SimpleLRatioBregman:
        return "simple-l-ratio";
    case ConvexRuleId::SimpleLDiscrete:
        return "simple-l-discrete";
    case ConvexRuleId::QuasiOptimalityRight:
        return "qo";
    }
    return "?";
}

inline std::optional<ConvexRuleId> parse_convex_rule(std::string_view name)
{
    for (ConvexRuleId r : kAllConvexRules) {
        if (convex_rule_name(r) == name)
            return r;
    }
    return std::nullopt;
}

/// A negative Bregman distance counts as a clamp activation when it lies below
/// -tolerance * max(1, |R(x_I)|, |R(x_II)|, |<xi, x_II - x_I>|); smaller ones are rounding.
inline constexpr double kBregmanClampTolerance = 1e-10;

template <typename Scalar = double>
struct ConvexRuleValue
{
    Scalar value = 0; // NaN when undefined
    bool clamped = false;
};

/// Inputs for one alpha of the convex rules.
template <typename Scalar = double>
struct BregmanPair
{
    const ConvexSolveResult<Scalar>* first = nullptr;  // x_I with its subgradient
    const ConvexSolveResult<Scalar>* second = nullptr; // x_II
    const Vector<Scalar>* next_alpha_solution = nullptr; // x_I at the next (smaller) grid alpha
};

template <typename Scalar, ConvexPenalty<Scalar> P>
ConvexRuleValue<Scalar> convex_rule_value(ConvexRuleId rule, const P& penalty, const BregmanPair<Scalar>& in)
{
    using std::abs;
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    const Scalar r_first = penalty.value(in.first->x);
    ConvexRuleValue<Scalar> out;
    switch (rule) {
    case ConvexRuleId::SimpleLBregman:
        out.value = abs(penalty.value(in.second->x) - r_first);
        break;
    case ConvexRuleId::SimpleLRatioBregman:
        out.value = r_first > Scalar(0) ? abs(penalty.value(in.second->x) - r_first) / r_first : nan;
        break;
    case ConvexRuleId::SimpleLDiscrete:
        out.value = in.next_alpha_solution ? abs(penalty.value(*in.next_alpha_solution) - r_first) : nan;
        break;
    case ConvexRuleId::QuasiOptimalityRight: {
        const Vector<Scalar>& x2 = in.second->x;
        const Scalar r_second = penalty.value(x2);
        const Scalar tilt = in.first->subgradient.dot(x2 - in.first->x);
        const Scalar d = r_second - r_first - tilt;
        if (d < Scalar(0)) {
            const Scalar scale = std::max({Scalar(1), abs(r_first), abs(r_second), abs(tilt)});
            out.clamped = d < -Scalar(kBregmanClampTolerance) * scale;
            out.value = 0;
        } else {
            out.value = d;
        }
        break;
    }
    }
    return out;
}

/// |R(x) - R(xdag)| + ||x - xdag||_1.
template <typename Scalar, ConvexPenalty<Scalar> P>
Scalar strict_metric(const Vector<Scalar>& x, const Vector<Scalar>& xdag, const P& penalty)
{
    using std::abs;
    if (x.size() != xdag.size())
        throw ParameterError("strict_metric: vectors differ in length");
    return abs(penalty.value(x) - penalty.value(xdag)) + (x - xdag).template lpNorm<1>();
}

} // namespace simplel::convex
