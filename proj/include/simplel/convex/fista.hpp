#pragma once

#include "simplel/convex/penalty.hpp"
#include "simplel/spectral_problem.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace simplel::convex
{

/// Forward operator for the convex solvers: a diagonal (spectral) operator or a dense matrix.
template <typename Scalar = double>
class LinearOperator
{
public:
    static LinearOperator diagonal(Vector<Scalar> sigma) { return LinearOperator(std::move(sigma)); }
    static LinearOperator dense(Matrix<Scalar> a) { return LinearOperator(std::move(a)); }

    /// Diagonal operator for diagonal problems; the stored matrix for matrix problems.
    static LinearOperator from_problem(const SpectralProblem<Scalar>& problem)
    {
        if (problem.has_basis())
            return dense(problem.basis().operator_matrix);
        return diagonal(problem.singular_values());
    }

    Eigen::Index cols() const
    {
        if (const auto* d = std::get_if<Vector<Scalar>>(&op_))
            return d->size();
        return std::get<Matrix<Scalar>>(op_).cols();
    }

    Vector<Scalar> apply(const Vector<Scalar>& x) const
    {
        if (const auto* d = std::get_if<Vector<Scalar>>(&op_))
            return d->cwiseProduct(x);
        return std::get<Matrix<Scalar>>(op_) * x;
    }

    Vector<Scalar> apply_adjoint(const Vector<Scalar>& r) const
    {
        if (const auto* d = std::get_if<Vector<Scalar>>(&op_))
            return d->cwiseProduct(r);
        return std::get<Matrix<Scalar>>(op_).transpose() * r;
    }

    /// Largest singular value.
    Scalar norm() const { return norm_; }

private:
    explicit LinearOperator(Vector<Scalar> sigma) : op_(std::move(sigma))
    {
        norm_ = std::get<Vector<Scalar>>(op_).cwiseAbs().maxCoeff();
    }
    explicit LinearOperator(Matrix<Scalar> a) : op_(std::move(a))
    {
        Eigen::JacobiSVD<Matrix<Scalar>> svd(std::get<Matrix<Scalar>>(op_));
        norm_ = svd.singularValues()[0];
    }

    std::variant<Vector<Scalar>, Matrix<Scalar>> op_;
    Scalar norm_ = 0;
};

struct FistaOptions
{
    double rel_tol = 1e-10; // relative objective change over `window` iterations; <= 0 disables
    int window = 10;
    int max_iterations = 20000;
    // Optional: also stop once max |x_k - x_{k-1}| <= step_tol (1 + max |x_k|).
    // The objective is flat near the minimizer, so oracle-level accuracy in x needs this.
    double step_tol = 0;
};

template <typename Scalar = double>
struct ConvexSolveResult
{
    Vector<Scalar> x;
    Scalar objective = 0; // ||Ax - y||^2 + alpha (R(x) - <tilt, x>)
    int iterations = 0;
    bool converged = false;
    Vector<Scalar> subgradient; // element of dR(x) read off the last prox step
};

/// Minimizes ||A x - y||^2 + alpha (R(x) - <tilt, x>) by FISTA.
///
/// Works on half the objective, whose smooth part has Lipschitz gradient with
/// constant ||A||^2: step 1 / ||A||^2 and prox parameter alpha * step / 2.
/// Returns the best-objective iterate after at least one step.
template <typename Scalar, ConvexPenalty<Scalar> P>
ConvexSolveResult<Scalar> fista_minimize(const LinearOperator<Scalar>& op, const Vector<Scalar>& y, Scalar alpha,
                                         const P& penalty, const Vector<Scalar>* tilt, const Vector<Scalar>& start,
                                         const FistaOptions& opts = {})
{
    using std::abs;
    using std::sqrt;
    if (!(alpha > Scalar(0)))
        throw ParameterError("fista: alpha must be positive");
    const Scalar norm = op.norm();
    if (!(norm > Scalar(0)))
        throw ParameterError("fista: operator is zero");
    const Scalar step = Scalar(1) / (norm * norm);
    const Scalar t_prox = alpha * step / Scalar(2);

    auto objective = [&](const Vector<Scalar>& x) {
        Scalar f = (op.apply(x) - y).squaredNorm() + alpha * penalty.value(x);
        if (tilt)
            f -= alpha * tilt->dot(x);
        return f;
    };
    // gradient of 1/2 ||Ax - y||^2 - alpha/2 <tilt, x>
    auto gradient = [&](const Vector<Scalar>& z) {
        Vector<Scalar> g = op.apply_adjoint(op.apply(z) - y);
        if (tilt)
            g -= (alpha / Scalar(2)) * *tilt;
        return g;
    };

    const int window = std::max(1, opts.window);
    std::vector<Scalar> history;
    history.reserve(static_cast<std::size_t>(opts.max_iterations) + 1);

    Vector<Scalar> x = start;
    Vector<Scalar> x_prev = start;
    Vector<Scalar> z = start;
    Scalar momentum = 1;

    // The start itself is never returned: every candidate comes out of a prox step
    // x = prox_t(v), which makes (v - x) / t an exact subgradient of R at x.
    ConvexSolveResult<Scalar> best;
    best.objective = std::numeric_limits<Scalar>::infinity();
    Vector<Scalar> best_v;
    history.push_back(objective(start));

    int it = 0;
    for (it = 1; it <= std::max(1, opts.max_iterations); ++it) {
        const Vector<Scalar> v = z - step * gradient(z);
        x = penalty.prox(t_prox, v);
        const Scalar moved = (x - x_prev).cwiseAbs().maxCoeff();
        const Scalar next = (Scalar(1) + sqrt(Scalar(1) + Scalar(4) * momentum * momentum)) / Scalar(2);
        z = x + ((momentum - Scalar(1)) / next) * (x - x_prev);
        momentum = next;
        x_prev = x;

        const Scalar f = objective(x);
        history.push_back(f);
        if (f <= best.objective) {
            best.objective = f;
            best.x = x;
            best_v = v;
        }
        if (opts.rel_tol > 0 && it >= window) {
            const Scalar old = history[static_cast<std::size_t>(it - window)];
            const Scalar scale = std::max(abs(f), std::numeric_limits<Scalar>::min());
            if (abs(f - old) <= Scalar(opts.rel_tol) * scale) {
                best.converged = true;
                break;
            }
        }
        if (opts.step_tol > 0 && moved <= Scalar(opts.step_tol) * (Scalar(1) + x.cwiseAbs().maxCoeff())) {
            // objective differences here are rounding; prefer the settled iterate
            const Scalar slack = Scalar(8) * std::numeric_limits<Scalar>::epsilon() * abs(best.objective);
            if (f <= best.objective + slack) {
                best.objective = f;
                best.x = x;
                best_v = v;
            }
            best.converged = true;
            break;
        }
    }
    best.iterations = std::min(it, std::max(1, opts.max_iterations));
    // at a fixed point this is (2 / alpha) A^T (y - A x) + tilt
    best.subgradient = (best_v - best.x) / t_prox;
    return best;
}

/// Convex Tikhonov solution x_alpha^delta = argmin ||Ax - y||^2 + alpha R(x), started from 0.
template <typename Scalar, ConvexPenalty<Scalar> P>
ConvexSolveResult<Scalar> fista_solve(const LinearOperator<Scalar>& op, const Vector<Scalar>& y, Scalar alpha,
                                      const P& penalty, const FistaOptions& opts = {},
                                      const std::optional<Vector<Scalar>>& start = std::nullopt)
{
    const Vector<Scalar> x0 = start ? *start : Vector<Scalar>(Vector<Scalar>::Zero(op.cols()));
    return fista_minimize(op, y, alpha, penalty, static_cast<const Vector<Scalar>*>(nullptr), x0, opts);
}

/// Second Bregman iterate argmin ||Ax - y||^2 + alpha (R(x) - <xi, x>), xi the
/// subgradient carried by `first`. Warm-started at the first iterate.
template <typename Scalar, ConvexPenalty<Scalar> P>
ConvexSolveResult<Scalar> bregman_second(const LinearOperator<Scalar>& op, const Vector<Scalar>& y, Scalar alpha,
                                         const P& penalty, const ConvexSolveResult<Scalar>& first,
                                         const FistaOptions& opts = {})
{
    ConvexSolveResult<Scalar> second = fista_minimize(op, y, alpha, penalty, &first.subgradient, first.x, opts);
    second.converged = second.converged && first.converged;
    return second;
}

} // namespace simplel::convex
