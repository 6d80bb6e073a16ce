#pragma once

#include "simplel/core.hpp"
#include "simplel/spectral_problem.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace simplel
{

/// Thin singular system A = range * diag(sigma) * domain^T with sigma descending.
template <typename Scalar>
struct SvdFactors
{
    Matrix<Scalar> domain;
    Vector<Scalar> sigma;
    Matrix<Scalar> range;
    Eigen::Index dropped = 0; // singular values below the rank threshold
};

/// Relative cut below which singular values are treated as zero.
inline constexpr double kRankThreshold = 1e-13;

template <typename Scalar>
SvdFactors<Scalar> compute_svd(const Matrix<Scalar>& a)
{
    if (a.size() == 0)
        throw ParameterError("compute_svd: empty matrix");
    if (!a.allFinite())
        throw ParameterError("compute_svd: matrix has non-finite entries");

    Eigen::JacobiSVD<Matrix<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("compute_svd: Jacobi SVD did not converge");

    const Vector<Scalar>& s = svd.singularValues();
    const Scalar cut = s.size() > 0 ? s[0] * Scalar(kRankThreshold) : Scalar(0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > cut)
        ++rank;

    SvdFactors<Scalar> out;
    out.sigma = s.head(rank);
    out.domain = svd.matrixV().leftCols(rank);
    out.range = svd.matrixU().leftCols(rank);
    out.dropped = s.size() - rank;
    return out;
}

/// Brings a matrix problem into singular-value form.
///
/// Normalizes so that ||A|| = 1 and ||x_true|| = 1, keeps the coefficients of
/// the minimum-norm part of x_true, and records the data left outside the
/// retained range as out_of_range_norm.
template <typename Scalar>
SpectralProblem<Scalar> make_matrix_problem(Matrix<Scalar> a, Vector<Scalar> x_true)
{
    if (a.cols() != x_true.size())
        throw ParameterError("make_matrix_problem: solution length does not match operator columns");
    const Scalar x_norm = x_true.norm();
    if (!(x_norm > Scalar(0)))
        throw ParameterError("make_matrix_problem: exact solution is zero");
    x_true /= x_norm;

    SvdFactors<Scalar> factors = compute_svd(a);
    if (factors.sigma.size() == 0)
        throw NumericalError("make_matrix_problem: operator is numerically zero");
    const Scalar scale = factors.sigma[0];
    a /= scale;
    factors.sigma /= scale;

    Vector<Scalar> coeffs = factors.domain.transpose() * x_true;
    const Vector<Scalar> y = a * x_true;
    const Vector<Scalar> y_range = factors.range * factors.sigma.cwiseProduct(coeffs);
    const Scalar out_of_range = (y - y_range).norm();

    SpectralBasis<Scalar> basis{std::move(factors.domain), std::move(factors.range), std::move(a),
                                std::move(x_true)};
    return SpectralProblem<Scalar>(std::move(factors.sigma), std::move(coeffs), out_of_range, std::move(basis));
}

} // namespace simplel
