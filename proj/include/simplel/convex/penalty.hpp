#pragma once

#include "simplel/core.hpp"

#include <cmath>
#include <concepts>
#include <optional>
#include <string_view>

namespace simplel::convex
{

/// A convex functional R with an exact proximal map argmin_x 1/2 ||x - v||^2 + t R(x).
template <typename P, typename Scalar>
concept ConvexPenalty = requires(const P& p, const Vector<Scalar>& v, Scalar t) {
    { p.value(v) } -> std::convertible_to<Scalar>;
    { p.prox(t, v) } -> std::convertible_to<Vector<Scalar>>;
};

enum class PenaltyKind
{
    L1,   // sum |x_i|
    Lp32, // sum |x_i|^(3/2)
    TV1D  // sum |x_{i+1} - x_i|
};

constexpr std::string_view penalty_name(PenaltyKind kind)
{
    switch (kind) {
    case PenaltyKind::L1:
        return "l1";
    case PenaltyKind::Lp32:
        return "l1.5";
    case PenaltyKind::TV1D:
        return "tv";
    }
    return "?";
}

inline std::optional<PenaltyKind> parse_penalty(std::string_view name)
{
    if (name == "l1")
        return PenaltyKind::L1;
    if (name == "l1.5" || name == "lp32" || name == "l3/2")
        return PenaltyKind::Lp32;
    if (name == "tv" || name == "tv1d")
        return PenaltyKind::TV1D;
    return std::nullopt;
}

/// Exact 1-D total-variation prox (Condat's direct algorithm): solves
/// argmin_x 1/2 sum (x_i - v_i)^2 + t sum |x_{i+1} - x_i| in linear time.
template <typename Scalar>
Vector<Scalar> tv1d_prox(Scalar t, const Vector<Scalar>& input)
{
    const Eigen::Index width = input.size();
    Vector<Scalar> output(width);
    if (width == 0)
        return output;
    if (width == 1 || t <= Scalar(0)) {
        output = input;
        return output;
    }

    const Scalar lambda = t;
    const Scalar minlambda = -t;
    const Scalar twolambda = Scalar(2) * t;
    Eigen::Index k = 0, k0 = 0, kplus = 0, kminus = 0;
    Scalar umin = lambda, umax = minlambda;
    Scalar vmin = input[0] - lambda, vmax = input[0] + lambda;

    for (;;) {
        while (k == width - 1) {
            if (umin < Scalar(0)) {
                do
                    output[k0++] = vmin;
                while (k0 <= kminus);
                k = kminus = k0;
                vmin = input[k0];
                umin = lambda;
                umax = vmin + umin - vmax;
            } else if (umax > Scalar(0)) {
                do
                    output[k0++] = vmax;
                while (k0 <= kplus);
                k = kplus = k0;
                vmax = input[k0];
                umax = minlambda;
                umin = vmax + umax - vmin;
            } else {
                vmin += umin / Scalar(k - k0 + 1);
                do
                    output[k0++] = vmin;
                while (k0 <= k);
                return output;
            }
        }
        umin += input[k + 1] - vmin;
        if (umin < minlambda) {
            do
                output[k0++] = vmin;
            while (k0 <= kminus);
            k = kminus = kplus = k0;
            vmin = input[k0];
            vmax = vmin + twolambda;
            umin = lambda;
            umax = minlambda;
            continue;
        }
        umax += input[k + 1] - vmax;
        if (umax > lambda) {
            do
                output[k0++] = vmax;
            while (k0 <= kplus);
            k = kminus = kplus = k0;
            vmax = input[k0];
            vmin = vmax - twolambda;
            umin = lambda;
            umax = minlambda;
            continue;
        }
        ++k;
        if (umin >= lambda) {
            kminus = k;
            vmin += (umin - lambda) / Scalar(kminus - k0 + 1);
            umin = lambda;
        }
        if (umax <= minlambda) {
            kplus = k;
            vmax += (umax + lambda) / Scalar(kplus - k0 + 1);
            umax = minlambda;
        }
    }
}

template <typename Scalar = double>
struct Penalty
{
    PenaltyKind kind = PenaltyKind::L1;

    Scalar value(const Vector<Scalar>& x) const
    {
        using std::abs;
        using std::sqrt;
        switch (kind) {
        case PenaltyKind::L1:
            return x.template lpNorm<1>();
        case PenaltyKind::Lp32: {
            Scalar sum = 0;
            for (Eigen::Index i = 0; i < x.size(); ++i)
                sum += abs(x[i]) * sqrt(abs(x[i]));
            return sum;
        }
        case PenaltyKind::TV1D: {
            Scalar sum = 0;
            for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
                sum += abs(x[i + 1] - x[i]);
            return sum;
        }
        }
        return Scalar(0);
    }

    Vector<Scalar> prox(Scalar t, const Vector<Scalar>& v) const
    {
        using std::abs;
        using std::sqrt;
        Vector<Scalar> x(v.size());
        switch (kind) {
        case PenaltyKind::L1:
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                const Scalar m = abs(v[i]) - t;
                x[i] = m > Scalar(0) ? std::copysign(m, v[i]) : Scalar(0);
            }
            return x;
        case PenaltyKind::Lp32:
            // x = sign(v) s^2 with s^2 + (3t/2) s - |v| = 0, s >= 0
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                const Scalar a = abs(v[i]);
                // (-3t + sqrt(9t^2 + 16a)) / 4 written without cancellation
                const Scalar s = Scalar(4) * a / (Scalar(3) * t + sqrt(Scalar(9) * t * t + Scalar(16) * a));
                x[i] = a > Scalar(0) ? std::copysign(s * s, v[i]) : Scalar(0);
            }
            return x;
        case PenaltyKind::TV1D:
            return tv1d_prox(t, v);
        }
        return x;
    }
};

static_assert(ConvexPenalty<Penalty<double>, double>);

} // namespace simplel::convex
