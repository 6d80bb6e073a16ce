#pragma once

#include "simplel/alpha_grid.hpp"
#include "simplel/noise.hpp"

#include <cmath>

namespace simplel
{

template <typename Scalar = double>
struct TikhonovCoeffs
{
    Vector<Scalar> solution; // <x_alpha^delta, u_i>
    Vector<Scalar> residual; // <p_alpha^delta, v_i> on the retained range
};

/// x_i = sigma_i / (lambda_i + alpha) d_i,  p_i = alpha / (lambda_i + alpha) d_i.
template <typename Scalar>
TikhonovCoeffs<Scalar> tikhonov_coeffs(const NoisySpectrum<Scalar>& data, Scalar alpha)
{
    if (!(alpha > Scalar(0)))
        throw ParameterError("tikhonov_coeffs: alpha must be positive");
    const auto& l = data.lambdas();
    const auto denom = (l.array() + alpha).eval();
    TikhonovCoeffs<Scalar> out;
    out.solution = (data.singular_values().array() / denom * data.data_coeffs.array()).matrix();
    out.residual = (alpha / denom * data.data_coeffs.array()).matrix();
    return out;
}

/// Tikhonov quantities along an alpha grid.
///
/// eta = ||x||^2, rho = ||p||^2 (including the out-of-range data), their alpha
/// derivatives, and zeta = rho / (alpha eta).
template <typename Scalar = double>
struct PathCurve
{
    Vector<Scalar> alpha;
    Vector<Scalar> eta;
    Vector<Scalar> rho;
    Vector<Scalar> eta_prime;
    Vector<Scalar> rho_prime;
    Vector<Scalar> zeta;

    Eigen::Index size() const { return alpha.size(); }
};

template <typename Scalar>
PathCurve<Scalar> path_quantities(const NoisySpectrum<Scalar>& data, const AlphaGrid<Scalar>& grid)
{
    const Eigen::Index m = grid.size();
    const auto& l = data.lambdas();
    const auto d2 = data.data_coeffs.array().square().eval();
    const Scalar oor2 = data.out_of_range_norm() * data.out_of_range_norm();

    PathCurve<Scalar> path;
    path.alpha = grid.values();
    path.eta.resize(m);
    path.rho.resize(m);
    path.eta_prime.resize(m);
    path.rho_prime.resize(m);
    path.zeta.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Scalar a = grid[k];
        Scalar eta = 0, rho = 0, deta = 0, drho = 0;
        for (Eigen::Index i = 0; i < l.size(); ++i) {
            const Scalar s = l[i] + a;
            const Scalar s2 = s * s;
            const Scalar s3 = s2 * s;
            eta += l[i] / s2 * d2[i];
            rho += a * a / s2 * d2[i];
            deta += l[i] / s3 * d2[i];
            drho += a * l[i] / s3 * d2[i];
        }
        path.eta[k] = eta;
        path.rho[k] = rho + oor2;
        path.eta_prime[k] = Scalar(-2) * deta;
        path.rho_prime[k] = Scalar(2) * drho;
        path.zeta[k] = path.rho[k] / (a * eta);
    }
    return path;
}

/// zeta^2 / (zeta^2 + 1)^(3/2); maximal 2 / (3 sqrt 3) at zeta = sqrt 2.
template <typename Scalar>
Scalar curvature_c1(Scalar zeta)
{
    using std::pow;
    return zeta * zeta / pow(zeta * zeta + Scalar(1), Scalar(1.5));
}

/// zeta (1 + zeta) / (zeta^2 + 1)^(3/2); maximal 1 / sqrt 2 at zeta = 1.
template <typename Scalar>
Scalar curvature_c2(Scalar zeta)
{
    using std::pow;
    return zeta * (Scalar(1) + zeta) / pow(zeta * zeta + Scalar(1), Scalar(1.5));
}

/// Signed L-curve curvature as eta / (alpha |eta'|) c1(zeta) - c2(zeta).
template <typename Scalar>
Scalar curvature_tikhonov(const PathCurve<Scalar>& path, Eigen::Index k)
{
    using std::abs;
    const Scalar deta = path.eta_prime[k];
    if (deta == Scalar(0))
        throw NumericalError("curvature_tikhonov: eta' vanishes");
    const Scalar zeta = path.zeta[k];
    return path.eta[k] / (path.alpha[k] * abs(deta)) * curvature_c1(zeta) - curvature_c2(zeta);
}

/// The same curvature from the closed form in eta, rho and eta' only:
///   (eta rho / |eta'|) (rho eta + alpha eta' rho + alpha^2 eta' eta) / (rho^2 + alpha^2 eta^2)^(3/2).
template <typename Scalar>
Scalar curvature_tikhonov_direct(const PathCurve<Scalar>& path, Eigen::Index k)
{
    using std::abs;
    using std::pow;
    const Scalar a = path.alpha[k];
    const Scalar eta = path.eta[k];
    const Scalar rho = path.rho[k];
    const Scalar deta = path.eta_prime[k];
    if (deta == Scalar(0))
        throw NumericalError("curvature_tikhonov: eta' vanishes");
    const Scalar num = rho * eta + a * deta * rho + a * a * deta * eta;
    return eta * rho / abs(deta) * num / pow(rho * rho + a * a * eta * eta, Scalar(1.5));
}

/// Errors against the exact solution along a grid: total = ||x_a^d - x||,
/// stability = ||x_a^d - x_a||, approx = ||x_a - x||.
template <typename Scalar = double>
struct ErrorCurve
{
    Vector<Scalar> alpha;
    Vector<Scalar> total;
    Vector<Scalar> stability;
    Vector<Scalar> approx;
    Eigen::Index argmin = 0;
    Scalar min_total = 0;
};

template <typename Scalar>
ErrorCurve<Scalar> error_curve(const NoisySpectrum<Scalar>& data, const AlphaGrid<Scalar>& grid)
{
    using std::sqrt;
    const Eigen::Index m = grid.size();
    const auto& l = data.lambdas();
    const auto& sigma = data.singular_values();
    const auto& xdag = data.problem->xdag_coeffs();
    const auto& e = data.noise_coeffs;
    const auto& d = data.data_coeffs;

    ErrorCurve<Scalar> curve;
    curve.alpha = grid.values();
    curve.total.resize(m);
    curve.stability.resize(m);
    curve.approx.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Scalar a = grid[k];
        Scalar tot = 0, stab = 0, appr = 0;
        for (Eigen::Index i = 0; i < l.size(); ++i) {
            const Scalar s = l[i] + a;
            const Scalar diff = sigma[i] / s * d[i] - xdag[i];
            const Scalar noise_part = sigma[i] / s * e[i];
            const Scalar approx_part = a / s * xdag[i];
            tot += diff * diff;
            stab += noise_part * noise_part;
            appr += approx_part * approx_part;
        }
        curve.total[k] = sqrt(tot);
        curve.stability[k] = sqrt(stab);
        curve.approx[k] = sqrt(appr);
    }
    curve.min_total = curve.total.minCoeff(&curve.argmin);
    return curve;
}

} // namespace simplel
