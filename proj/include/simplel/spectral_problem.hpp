#pragma once

#include "simplel/core.hpp"

#include <cmath>
#include <optional>
#include <utility>

namespace simplel
{

/// Orthonormal factors of a matrix-defined problem, A = range * diag(sigma) * domain^T.
///
/// `operator_matrix` and `solution` keep the normalized operator and the exact
/// solution in pixel/grid coordinates, which the convex solvers work in.
template <typename Scalar>
struct SpectralBasis
{
    Matrix<Scalar> domain; // u_i as columns, n x r
    Matrix<Scalar> range;  // v_i as columns, m x r
    Matrix<Scalar> operator_matrix;
    Vector<Scalar> solution;
};

/// A linear ill-posed problem written in its singular system.
///
/// Coefficients are with respect to the singular functions: xdag_coeffs holds
/// <x, u_i>, ydata_coeffs holds <y, v_i> = sigma_i <x, u_i>. Diagonal problems
/// carry an implicit identity basis.
template <typename Scalar = double>
class SpectralProblem
{
public:
    SpectralProblem(Vector<Scalar> singular_values, Vector<Scalar> xdag_coeffs, Scalar out_of_range_norm = Scalar(0),
                    std::optional<SpectralBasis<Scalar>> basis = std::nullopt)
        : sigma_(std::move(singular_values)), xdag_(std::move(xdag_coeffs)), out_of_range_norm_(out_of_range_norm),
          basis_(std::move(basis))
    {
        validate();
        ydata_ = sigma_.cwiseProduct(xdag_);
    }

    /// Rebuilds a problem from stored coefficients without recomputing the data.
    static SpectralProblem from_coefficients(Vector<Scalar> singular_values, Vector<Scalar> xdag_coeffs,
                                             Vector<Scalar> ydata_coeffs, Scalar out_of_range_norm)
    {
        SpectralProblem problem(std::move(singular_values), std::move(xdag_coeffs), out_of_range_norm);
        if (ydata_coeffs.size() != problem.size())
            throw ParameterError("data coefficient count does not match singular value count");
        problem.ydata_ = std::move(ydata_coeffs);
        return problem;
    }

    Eigen::Index size() const { return sigma_.size(); }
    const Vector<Scalar>& singular_values() const { return sigma_; }
    const Vector<Scalar>& lambdas() const { return lambda_; }
    const Vector<Scalar>& xdag_coeffs() const { return xdag_; }
    const Vector<Scalar>& ydata_coeffs() const { return ydata_; }
    Scalar out_of_range_norm() const { return out_of_range_norm_; }
    bool has_basis() const { return basis_.has_value(); }
    const SpectralBasis<Scalar>& basis() const { return basis_.value(); }

    /// A applied in spectral coordinates.
    Vector<Scalar> apply(const Vector<Scalar>& coeffs) const { return sigma_.cwiseProduct(coeffs); }
    /// A^* applied in spectral coordinates.
    Vector<Scalar> apply_adjoint(const Vector<Scalar>& coeffs) const { return sigma_.cwiseProduct(coeffs); }

    /// Maps domain coefficients to grid values (identity for diagonal problems).
    Vector<Scalar> to_domain(const Vector<Scalar>& coeffs) const
    {
        return basis_ ? Vector<Scalar>(basis_->domain * coeffs) : coeffs;
    }
    /// Maps range coefficients to data values (identity for diagonal problems).
    Vector<Scalar> to_range(const Vector<Scalar>& coeffs) const
    {
        return basis_ ? Vector<Scalar>(basis_->range * coeffs) : coeffs;
    }

private:
    void validate()
    {
        if (sigma_.size() < 1)
            throw ParameterError("problem needs at least one singular value");
        if (xdag_.size() != sigma_.size())
            throw ParameterError("solution coefficient count does not match singular value count");
        for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
            if (!(sigma_[i] > Scalar(0)))
                throw ParameterError("singular values must be positive");
            if (i > 0 && sigma_[i] > sigma_[i - 1])
                throw ParameterError("singular values must be nonincreasing");
        }
        if (out_of_range_norm_ < Scalar(0))
            throw ParameterError("out-of-range norm must be nonnegative");
        lambda_ = sigma_.cwiseProduct(sigma_);
    }

    Vector<Scalar> sigma_;
    Vector<Scalar> lambda_;
    Vector<Scalar> xdag_;
    Vector<Scalar> ydata_;
    Scalar out_of_range_norm_;
    std::optional<SpectralBasis<Scalar>> basis_;
};

struct SmoothnessSpec
{
    double s = 2.0;
    double p = 1.6;
    double mu = 0.25;
};

/// Solution decay exponent p for which sum_i x_i^2 / lambda_i^(2 mu) converges,
/// given sigma_i = i^(-s): p = 2 s mu + 1/2 + margin.
template <typename Scalar>
Scalar mu_to_p(Scalar s, Scalar mu, Scalar margin = Scalar(0.1))
{
    return Scalar(2) * s * mu + Scalar(0.5) + margin;
}

/// sigma_i = i^(-s), <x, u_i> = (-1)^i i^(-p) (or i^(-p) without alternation).
template <typename Scalar = double>
SpectralProblem<Scalar> make_diagonal_problem(Eigen::Index n, Scalar s, Scalar p, bool alternate_signs = true)
{
    using std::pow;
    if (n < 1)
        throw ParameterError("diagonal problem needs n >= 1");
    if (!(s > Scalar(0)))
        throw ParameterError("singular value decay exponent s must be positive");
    if (!(p > Scalar(0.5)))
        throw ParameterError("solution decay exponent p must exceed 1/2");

    Vector<Scalar> sigma(n);
    Vector<Scalar> xdag(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar i = Scalar(k + 1);
        sigma[k] = pow(i, -s);
        const Scalar magnitude = pow(i, -p);
        xdag[k] = (alternate_signs && (k + 1) % 2 == 1) ? -magnitude : magnitude;
    }
    return SpectralProblem<Scalar>(std::move(sigma), std::move(xdag));
}

} // namespace simplel
