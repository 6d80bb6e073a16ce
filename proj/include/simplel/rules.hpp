#pragma once

#include "simplel/tikhonov.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace simplel
{

enum class RuleId
{
    SimpleL,
    SimpleLRatio,
    QuasiOptimality,
    HeuristicDiscrepancy,
    HankeRaus,
    LCurveCurvature,
    VCurve,
    Creso,
    Brs
};

inline constexpr std::array kAllRules{RuleId::SimpleL,        RuleId::SimpleLRatio, RuleId::QuasiOptimality,
                                      RuleId::HeuristicDiscrepancy, RuleId::HankeRaus,    RuleId::LCurveCurvature,
                                      RuleId::VCurve,         RuleId::Creso,        RuleId::Brs};

enum class Sense
{
    Minimize,
    Maximize
};

constexpr std::string_view rule_name(RuleId rule)
{
    switch (rule) {
    case RuleId::SimpleL:
        return "simple-l";
    case RuleId::SimpleLRatio:
        return "simple-l-ratio";
    case RuleId::QuasiOptimality:
        return "qo";
    case RuleId::HeuristicDiscrepancy:
        return "hd";
    case RuleId::HankeRaus:
        return "hr";
    case RuleId::LCurveCurvature:
        return "l-curve";
    case RuleId::VCurve:
        return "v-curve";
    case RuleId::Creso:
        return "creso";
    case RuleId::Brs:
        return "brs";
    }
    return "?";
}

inline std::optional<RuleId> parse_rule(std::string_view name)
{
    for (RuleId r : kAllRules) {
        if (rule_name(r) == name)
            return r;
    }
    return std::nullopt;
}

constexpr Sense rule_sense(RuleId rule)
{
    return rule == RuleId::LCurveCurvature ? Sense::Maximize : Sense::Minimize;
}

template <typename Scalar = double>
struct RuleCurve
{
    RuleId rule = RuleId::SimpleL;
    Sense sense = Sense::Minimize;
    Vector<Scalar> alpha;
    Vector<Scalar> values; // NaN marks an undefined point
};

template <typename Scalar = double>
struct SelectionResult
{
    Scalar alpha_star = 0;
    Eigen::Index grid_index = 0;
    bool interior = false;
    Scalar value_at_star = 0;
};

/// psi(alpha)^2 = sum_i alpha^(n-k-1) lambda_i^k / (alpha + lambda_i)^n d_i^2.
///
/// Data outside the range behaves as a lambda = 0 component and only enters
/// for k = 0. The absolute value guards rounding-level negatives.
template <typename Scalar>
Scalar psi_spectral_sum(const NoisySpectrum<Scalar>& data, Scalar alpha, int n, int k)
{
    using std::abs;
    using std::pow;
    using std::sqrt;
    const auto& l = data.lambdas();
    const auto& d = data.data_coeffs;
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < l.size(); ++i) {
        const Scalar s = alpha + l[i];
        const Scalar wa = alpha / s;
        const Scalar wl = l[i] / s;
        sum += pow(wa, n - k - 1) * pow(wl, k) / s * d[i] * d[i];
    }
    if (k == 0) {
        const Scalar r = data.out_of_range_norm();
        sum += r * r / alpha;
    }
    return sqrt(abs(sum));
}

/// sqrt(-alpha eta' / 2) from a computed path.
template <typename Scalar>
Scalar psi_simple_l_from_path(const PathCurve<Scalar>& path, Eigen::Index k)
{
    using std::abs;
    using std::sqrt;
    return sqrt(abs(Scalar(-0.5) * path.alpha[k] * path.eta_prime[k]));
}

inline constexpr double kSimpleLCrossCheck = 1e-8;

template <typename Scalar>
RuleCurve<Scalar> rule_curve(RuleId rule, const NoisySpectrum<Scalar>& data, const PathCurve<Scalar>& path,
                             const AlphaGrid<Scalar>& grid)
{
    using std::abs;
    using std::sqrt;
    if (path.size() != grid.size())
        throw ParameterError("rule_curve: path and grid sizes differ");

    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    RuleCurve<Scalar> curve;
    curve.rule = rule;
    curve.sense = rule_sense(rule);
    curve.alpha = grid.values();
    curve.values.resize(grid.size());

    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const Scalar a = grid[j];
        const Scalar eta = path.eta[j];
        const Scalar norm_x = sqrt(eta);
        Scalar v = nan;
        switch (rule) {
        case RuleId::SimpleL: {
            v = psi_spectral_sum(data, a, 3, 1);
            const Scalar check = psi_simple_l_from_path(path, j);
            if (relative_difference(v, check) > Scalar(kSimpleLCrossCheck))
                throw NumericalError("rule_curve: simple-L spectral sum disagrees with sqrt(-alpha eta'/2)");
            break;
        }
        case RuleId::SimpleLRatio:
            if (norm_x > Scalar(0))
                v = psi_spectral_sum(data, a, 3, 1) / norm_x;
            break;
        case RuleId::QuasiOptimality:
            v = psi_spectral_sum(data, a, 4, 1);
            break;
        case RuleId::HeuristicDiscrepancy:
            v = psi_spectral_sum(data, a, 2, 0);
            break;
        case RuleId::HankeRaus:
            v = psi_spectral_sum(data, a, 3, 0);
            break;
        case RuleId::LCurveCurvature:
            if (path.eta_prime[j] != Scalar(0))
                v = curvature_tikhonov_direct(path, j);
            break;
        case RuleId::VCurve:
            if (norm_x > Scalar(0) && path.zeta[j] > Scalar(0)) {
                const Scalar slr = psi_spectral_sum(data, a, 3, 1) / norm_x;
                const Scalar z = path.zeta[j];
                v = slr * slr * sqrt(Scalar(1) / (z * z) + Scalar(1));
            }
            break;
        case RuleId::Creso:
            // -C(alpha) with C = eta + 2 alpha eta'
            v = -(eta + Scalar(2) * a * path.eta_prime[j]);
            break;
        case RuleId::Brs:
            if (norm_x > Scalar(0))
                v = path.rho[j] / (a * norm_x);
            break;
        }
        curve.values[j] = std::isfinite(static_cast<double>(v)) ? v : nan;
    }
    return curve;
}

/// Picks the best strict interior local optimum; without one, the better grid
/// endpoint with interior = false. Ties go to the larger alpha (lower index).
template <typename Scalar>
SelectionResult<Scalar> select_extremum(const Vector<Scalar>& alpha, const Vector<Scalar>& values, Sense sense)
{
    const Eigen::Index n = values.size();
    if (n < 3 || alpha.size() != n)
        throw ParameterError("select_alpha: need at least 3 grid points");

    auto defined = [&](Eigen::Index k) { return std::isfinite(static_cast<double>(values[k])); };
    auto better = [&](Scalar a, Scalar b) { return sense == Sense::Minimize ? a < b : a > b; };

    Eigen::Index best = -1;
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        if (!defined(k - 1) || !defined(k) || !defined(k + 1))
            continue;
        if (better(values[k], values[k - 1]) && better(values[k], values[k + 1]) &&
            (best < 0 || better(values[k], values[best])))
            best = k;
    }

    SelectionResult<Scalar> out;
    if (best >= 0) {
        out.interior = true;
    } else {
        Eigen::Index first = 0;
        while (first < n && !defined(first))
            ++first;
        if (first == n)
            throw SelectionError("select_alpha: every rule value is undefined");
        Eigen::Index last = n - 1;
        while (!defined(last))
            --last;
        best = better(values[last], values[first]) ? last : first;
    }
    out.grid_index = best;
    out.alpha_star = alpha[best];
    out.value_at_star = values[best];
    return out;
}

template <typename Scalar>
SelectionResult<Scalar> select_alpha(const RuleCurve<Scalar>& curve)
{
    return select_extremum(curve.alpha, curve.values, curve.sense);
}

/// Noise and solution parts of psi_SL with the monotone bounds B and V.
template <typename Scalar = double>
struct BoundCurves
{
    Vector<Scalar> alpha;
    Vector<Scalar> psi_sl_noise; // psi_SL(alpha, e)
    Vector<Scalar> psi_sl_sol;   // psi_SL(alpha, x)
    Vector<Scalar> upper_b;      // B = <x - x_alpha, x>^(1/2)
    Vector<Scalar> upper_v;      // V = ||x_alpha^delta - x_alpha||
};

template <typename Scalar>
BoundCurves<Scalar> bound_curves(const NoisySpectrum<Scalar>& data, const AlphaGrid<Scalar>& grid)
{
    using std::sqrt;
    const Eigen::Index m = grid.size();
    const auto& l = data.lambdas();
    const auto& xdag = data.problem->xdag_coeffs();
    const auto& e = data.noise_coeffs;

    BoundCurves<Scalar> out;
    out.alpha = grid.values();
    out.psi_sl_noise.resize(m);
    out.psi_sl_sol.resize(m);
    out.upper_b.resize(m);
    out.upper_v.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Scalar a = grid[k];
        Scalar pn = 0, ps = 0, b = 0, v = 0;
        for (Eigen::Index i = 0; i < l.size(); ++i) {
            const Scalar s = l[i] + a;
            const Scalar s3 = s * s * s;
            const Scalar x2 = xdag[i] * xdag[i];
            const Scalar e2 = e[i] * e[i];
            pn += a * l[i] / s3 * e2;
            ps += a * l[i] * l[i] / s3 * x2;
            b += a / s * x2;
            v += l[i] / (s * s) * e2;
        }
        out.psi_sl_noise[k] = sqrt(pn);
        out.psi_sl_sol[k] = sqrt(ps);
        out.upper_b[k] = sqrt(b);
        out.upper_v[k] = sqrt(v);
    }
    return out;
}

} // namespace simplel
