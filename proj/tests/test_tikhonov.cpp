#include <doctest.h>

#include "oracles.hpp"

#include "simplel/discrete_curvature.hpp"
#include "simplel/landweber.hpp"
#include "simplel/svd.hpp"
#include "simplel/tikhonov.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace simplel;

namespace
{
using ProblemPtr = std::shared_ptr<const SpectralProblem<double>>;

ProblemPtr single(double sigma, double xdag)
{
    return std::make_shared<const SpectralProblem<double>>(VectorXd::Constant(1, sigma), VectorXd::Constant(1, xdag));
}

NoisySpectrum<double> noisy_random(std::mt19937_64& rng, Eigen::Index n)
{
    const auto spec = oracle::random_spectrum(rng, n);
    auto problem = std::make_shared<const SpectralProblem<double>>(spec.sigma, spec.xdag);
    return with_noise<double>(problem, spec.noise);
}
} // namespace

TEST_CASE("tikhonov_coeffs")
{
    SUBCASE("single component")
    {
        const auto d = exact_data(single(1.0, 1.0));
        const auto t = tikhonov_coeffs(d, 1.0);
        CHECK(t.solution[0] == 0.5);
        CHECK(t.residual[0] == 0.5);
    }
    SUBCASE("small alpha recovers the naive inverse")
    {
        std::mt19937_64 rng(5);
        const auto d = noisy_random(rng, 12);
        const auto t = tikhonov_coeffs(d, 1e-14);
        const VectorXd naive = d.data_coeffs.cwiseQuotient(d.singular_values());
        CHECK((t.solution - naive).norm() <= 1e-4 * naive.norm());
    }
    SUBCASE("matches a dense normal-equation solve")
    {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 10; ++trial) {
            const MatrixXd a = oracle::random_matrix(rng, 10, 10);
            const VectorXd x = oracle::random_vector(rng, 10);
            const auto problem = std::make_shared<const SpectralProblem<double>>(make_matrix_problem(a, x));
            const auto& b = problem->basis();
            const VectorXd e = 1e-3 * oracle::random_vector(rng, 10);
            const VectorXd y_delta = b.operator_matrix * b.solution + e;
            const auto data = with_noise<double>(problem, VectorXd(b.range.transpose() * e));
            for (double alpha : {1e-4, 1e-2, 0.5}) {
                const VectorXd ref = oracle::dense_tikhonov(b.operator_matrix, y_delta, alpha);
                const VectorXd got = problem->to_domain(tikhonov_coeffs(data, alpha).solution);
                CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
            }
        }
    }
    SUBCASE("alpha must be positive")
    {
        CHECK_THROWS_AS(tikhonov_coeffs(exact_data(single(1.0, 1.0)), 0.0), ParameterError);
    }
}

TEST_CASE("path quantities")
{
    SUBCASE("single component at alpha = 1")
    {
        const auto d = exact_data(single(1.0, 1.0));
        const AlphaGrid<double> grid(0.5, 2.0, 3);
        const auto path = path_quantities(d, grid);
        REQUIRE(path.alpha[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(path.eta[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(path.rho[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(path.eta_prime[1] == doctest::Approx(-0.25).epsilon(1e-15));
        CHECK(path.rho_prime[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(path.zeta[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("identities and monotonicity on random problems")
    {
        std::mt19937_64 rng(2718);
        for (int trial = 0; trial < 20; ++trial) {
            const auto d = noisy_random(rng, 40);
            const AlphaGrid<double> grid(1e-9, 1.0, 60);
            const auto path = path_quantities(d, grid);
            for (Eigen::Index k = 0; k < grid.size(); ++k) {
                const double a = grid[k];
                CHECK(std::abs(path.rho_prime[k] + a * path.eta_prime[k]) <= 1e-10 * std::abs(path.rho_prime[k]));
                CHECK(path.eta_prime[k] <= 0.0);
                if (k > 0) {
                    // alpha decreases along the grid
                    CHECK(path.eta[k] >= path.eta[k - 1]);
                    CHECK(path.rho[k] <= path.rho[k - 1]);
                }
            }
        }
    }
    SUBCASE("eta' matches a central finite difference")
    {
        std::mt19937_64 rng(8);
        const auto d = noisy_random(rng, 30);
        const double h = 1e-5;
        for (double a : {1e-6, 1e-3, 0.1}) {
            const AlphaGrid<double> grid(a * (1 - h), a * (1 + h), 3);
            const auto path = path_quantities(d, grid);
            const double fd = (path.eta[0] - path.eta[2]) / (2 * a * h);
            CHECK(std::abs(path.eta_prime[1] - fd) <= 1e-5 * std::abs(fd));
        }
    }
    SUBCASE("out-of-range data shifts rho only")
    {
        const auto with_oor = exact_data(std::make_shared<const SpectralProblem<double>>(
            VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 1.0), 0.5));
        const AlphaGrid<double> grid(0.5, 2.0, 3);
        const auto path = path_quantities(with_oor, grid);
        CHECK(path.rho[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(path.rho_prime[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(path.eta[1] == doctest::Approx(0.25).epsilon(1e-15));
    }
}

TEST_CASE("curvature coefficient bounds")
{
    const auto neg_c1 = [](double z) { return -curvature_c1(z); };
    const auto neg_c2 = [](double z) { return -curvature_c2(z); };
    const double z1 = oracle::grid_min(neg_c1, 0.0, 10.0);
    const double z2 = oracle::grid_min(neg_c2, 0.0, 10.0);
    CHECK(z1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(z2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(curvature_c1(std::sqrt(2.0)) == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-15));
    CHECK(curvature_c2(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    for (double z = 0; z < 50; z += 0.01) {
        CHECK(curvature_c1(z) <= 2.0 / (3.0 * std::sqrt(3.0)) + 1e-15);
        CHECK(curvature_c2(z) <= 1.0 / std::sqrt(2.0) + 1e-15);
    }
}

TEST_CASE("tikhonov curvature")
{
    SUBCASE("single component by hand")
    {
        const auto d = exact_data(single(1.0, 1.0));
        const auto path = path_quantities(d, AlphaGrid<double>(0.5, 2.0, 3));
        const double expected = 1.0 / std::pow(2.0, 1.5) - 2.0 / std::pow(2.0, 1.5);
        CHECK(curvature_tikhonov(path, 1) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(curvature_tikhonov_direct(path, 1) == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("two formula paths agree on random problems")
    {
        std::mt19937_64 rng(4242);
        for (int trial = 0; trial < 20; ++trial) {
            const auto d = noisy_random(rng, 25);
            const auto path = path_quantities(d, AlphaGrid<double>(1e-8, 1.0, 80));
            for (Eigen::Index k = 0; k < path.size(); ++k) {
                const double lemma = curvature_tikhonov(path, k);
                const double direct = curvature_tikhonov_direct(path, k);
                CHECK(std::abs(lemma - direct) <= 1e-8 * std::max(std::abs(direct), 1e-300));
            }
        }
    }
    SUBCASE("agrees with the parametric curvature of the log-log curve")
    {
        // kappa = (x' y'' - x'' y') / (x'^2 + y'^2)^(3/2) with x = log rho, y = log eta,
        // differentiated in log alpha by finite differences
        std::mt19937_64 rng(17);
        const auto d = noisy_random(rng, 20);
        const double a = 1e-3, h = 1e-4;
        const AlphaGrid<double> grid(a * std::exp(-h), a * std::exp(h), 3);
        const auto path = path_quantities(d, grid);
        const VectorXd lx = path.rho.array().log().matrix();
        const VectorXd ly = path.eta.array().log().matrix();
        // grid runs from large to small alpha
        const double x1 = (lx[0] - lx[2]) / (2 * h), y1 = (ly[0] - ly[2]) / (2 * h);
        const double x2 = (lx[0] - 2 * lx[1] + lx[2]) / (h * h), y2 = (ly[0] - 2 * ly[1] + ly[2]) / (h * h);
        const double kappa = (x1 * y2 - x2 * y1) / std::pow(x1 * x1 + y1 * y1, 1.5);
        CHECK(curvature_tikhonov(path, 1) == doctest::Approx(kappa).epsilon(1e-4));
    }
    SUBCASE("vanishing eta' is an error")
    {
        const auto d = exact_data(std::make_shared<const SpectralProblem<double>>(
            SpectralProblem<double>::from_coefficients(VectorXd::Ones(1), VectorXd::Zero(1), VectorXd::Zero(1), 0.0)));
        const auto path = path_quantities(d, AlphaGrid<double>(0.5, 2.0, 3));
        CHECK_THROWS_AS(curvature_tikhonov(path, 1), NumericalError);
    }
}

TEST_CASE("discrete curvature")
{
    SUBCASE("straight line")
    {
        VectorXd xs = VectorXd::LinSpaced(6, 0, 5);
        VectorXd ys = 3.0 * xs.array() + 1.0;
        const auto k = discrete_curvature(xs, ys);
        CHECK(std::isnan(k[0]));
        CHECK(std::isnan(k[5]));
        for (Eigen::Index i = 1; i < 5; ++i)
            CHECK(k[i] == 0.0);
    }
    SUBCASE("unit circle")
    {
        // upper arc, so the abscissae increase
        const VectorXd xs = Eigen::Vector3d(std::cos(2.5), std::cos(1.4), std::cos(0.3));
        const VectorXd ys = Eigen::Vector3d(std::sin(2.5), std::sin(1.4), std::sin(0.3));
        CHECK(std::abs(std::abs(discrete_curvature(xs, ys)[1]) - 1.0) <= 1e-12);
    }
    SUBCASE("parabola")
    {
        // Three-point Menger curvature of y = x^2 at 0 is 2 / (1 + h^2).
        for (double h : {0.1, 0.02}) {
            VectorXd xs = Eigen::Vector3d(-h, 0, h), ys = xs.array().square();
            const double k = discrete_curvature(xs, ys)[1];
            CHECK(k == doctest::Approx(2.0 / (1.0 + h * h)).epsilon(1e-12));
            if (h <= 0.02)
                CHECK(std::abs(k - 2.0) <= 1e-3);
        }
    }
    SUBCASE("non-monotone abscissae")
    {
        VectorXd xs = Eigen::Vector3d(0, 1, 1), ys = Eigen::Vector3d(0, 1, 2);
        CHECK_THROWS_AS(discrete_curvature(xs, ys), ParameterError);
        CHECK_THROWS_AS(discrete_curvature(VectorXd(Eigen::Vector2d(0, 1)), VectorXd(Eigen::Vector2d(0, 1))),
                        ParameterError);
    }
}

TEST_CASE("error curve")
{
    SUBCASE("single component")
    {
        const auto problem = single(1.0, 1.0);
        const auto d = with_noise<double>(problem, VectorXd::Constant(1, 0.1));
        const auto curve = error_curve(d, AlphaGrid<double>(0.5, 2.0, 3));
        CHECK(curve.stability[1] == doctest::Approx(0.05).epsilon(1e-14));
        CHECK(curve.approx[1] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(curve.total[1] == doctest::Approx(0.45).epsilon(1e-14));
    }
    SUBCASE("zero noise")
    {
        const auto problem = std::make_shared<const SpectralProblem<double>>(make_diagonal_problem<double>(50, 1.0, 1.5));
        const auto d = exact_data(problem);
        const auto curve = error_curve(d, AlphaGrid<double>(1e-14, 1.0, 40));
        CHECK(curve.stability.cwiseAbs().maxCoeff() == 0.0);
        CHECK((curve.total - curve.approx).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(curve.total[39] <= 1e-6);
        CHECK(curve.argmin == 39);
    }
    SUBCASE("triangle inequality and argmin on random problems")
    {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 20; ++trial) {
            const auto d = noisy_random(rng, 40);
            const auto curve = error_curve(d, AlphaGrid<double>(1e-9, 1.0, 60));
            for (Eigen::Index k = 0; k < 60; ++k)
                CHECK(curve.total[k] <= curve.stability[k] + curve.approx[k] + 1e-12);
            Eigen::Index best = 0;
            for (Eigen::Index k = 1; k < 60; ++k)
                if (curve.total[k] < curve.total[best])
                    best = k;
            CHECK(curve.argmin == best);
            CHECK(curve.min_total == curve.total[best]);
        }
    }
}

TEST_CASE("landweber")
{
    SUBCASE("single component closed form")
    {
        const double sigma = std::sqrt(0.5);
        const auto d = exact_data(single(sigma, 1.0 / sigma));
        const auto run = landweber_run(d, 30, 1.0);
        CHECK(run.psi_residual[0] == 0.0);
        for (Eigen::Index k = 0; k <= 30; ++k) {
            const double xk = (1.0 - std::pow(0.5, double(k))) / sigma;
            CHECK(run.iterates[std::size_t(k)][0] == doctest::Approx(xk).epsilon(1e-12));
            const double axk = sigma * xk;
            CHECK(std::abs(run.psi_residual[k] - axk * (1.0 - axk)) <= 1e-12);
        }
    }
    SUBCASE("doubling step identity at stepsize 1")
    {
        std::mt19937_64 rng(3);
        const auto d = noisy_random(rng, 30);
        const auto run = landweber_run(d, 40, 1.0);
        for (Eigen::Index k = 0; k < 40; ++k) {
            const auto& xk = run.iterates[std::size_t(k)];
            const double lhs = xk.dot(run.iterates[std::size_t(k + 1)] - xk);
            CHECK(std::abs(lhs - run.psi_residual[k]) <= 1e-13 * std::max(1.0, std::abs(lhs)));
        }
        for (Eigen::Index k = 0; k <= 20; ++k) {
            const auto& xk = run.iterates[std::size_t(k)];
            CHECK(run.psi_doubling[k] == xk.dot(run.iterates[std::size_t(2 * k)] - xk));
        }
    }
    SUBCASE("exact data residual is nonincreasing")
    {
        const auto problem = std::make_shared<const SpectralProblem<double>>(make_diagonal_problem<double>(200, 1.0, 1.5));
        const auto run = landweber_run(exact_data(problem), 500, 1.0);
        for (Eigen::Index k = 1; k <= 500; ++k)
            CHECK(run.residual_norm[k] <= run.residual_norm[k - 1]);
    }
    SUBCASE("selection finds the smallest interior minimum")
    {
        std::mt19937_64 rng(12);
        const auto problem = std::make_shared<const SpectralProblem<double>>(make_diagonal_problem<double>(200, 1.0, 1.5));
        const auto d = add_noise<double>(problem, 0.01, 0.6, 77);
        const auto run = landweber_run(d, 400, 1.0);
        const auto& psi = run.psi_residual;
        Eigen::Index best = -1;
        for (Eigen::Index k = 2; k < 400; ++k)
            if (psi[k] < psi[k - 1] && psi[k] < psi[k + 1] && (best < 0 || psi[k] < psi[best]))
                best = k;
        if (best > 0) {
            CHECK(run.residual_interior);
            CHECK(run.selected_residual == best);
        } else {
            CHECK_FALSE(run.residual_interior);
        }
    }
    SUBCASE("stepsize bounds")
    {
        const auto d = exact_data(single(1.0, 1.0));
        CHECK_THROWS_AS(landweber_run(d, 10, 0.0), ParameterError);
        CHECK_THROWS_AS(landweber_run(d, 10, 2.0), ParameterError);
        CHECK_THROWS_AS(landweber_run(d, 1, 1.0), ParameterError);
    }
}
