#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rud/objectives.hpp"

using namespace rud;

TEST_CASE("scalar quadratic") {
    const Objective f = scalar_quadratic();
    CHECK(f.dim() == 1);
    const Vector x = Vector::Constant(1, -3.0);
    CHECK(f.value(x) == 4.5);
    CHECK(f.gradient(x)[0] == -3.0);
    CHECK_THROWS_AS(f.value(Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("make_random_spd") {
    SUBCASE("spectrum lies in the requested band") {
        const MatrixQuadratic q = make_random_spd(50, 7);
        CHECK(q.A.rows() == 50);
        CHECK(q.A.cols() == 50);
        CHECK((q.A - q.A.transpose()).norm() == 0.0);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(q.A);
        REQUIRE(eig.info() == Eigen::Success);
        CHECK(eig.eigenvalues().minCoeff() >= 0.01 - 1e-10);
        CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
    }
    SUBCASE("custom band") {
        const MatrixQuadratic q = make_random_spd(20, 3, 0.5, 2.0);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(q.A);
        CHECK(eig.eigenvalues().minCoeff() >= 0.5 - 1e-10);
        CHECK(eig.eigenvalues().maxCoeff() <= 2.0 + 1e-10);
    }
    SUBCASE("deterministic in the seed") {
        const MatrixQuadratic a = make_random_spd(30, 42), b = make_random_spd(30, 42);
        CHECK(a.A == b.A);
        CHECK(a.b == b.b);
        const MatrixQuadratic c = make_random_spd(30, 43);
        CHECK(a.A != c.A);
    }
    SUBCASE("one-dimensional unit band") {
        const MatrixQuadratic q = make_random_spd(1, 5, 1.0, 1.0);
        CHECK(q.A(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(make_random_spd(0, 1), std::invalid_argument);
        CHECK_THROWS_AS(make_random_spd(4, 1, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_random_spd(4, 1, 2.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("minimizer solves A theta = b") {
    const MatrixQuadratic q = make_random_spd(40, 9);
    const Vector x = q.minimizer();
    CHECK((q.A * x - q.b).lpNorm<Eigen::Infinity>() < 1e-10);
    const auto [value, grad] = quad_eval_grad(q, x);
    CHECK(grad.lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(value == doctest::Approx(q.minimum_value()).epsilon(1e-12));
    CHECK(q.minimum_value() == doctest::Approx(-0.5 * q.b.dot(x)).epsilon(1e-12));
}

TEST_CASE("quad_eval_grad") {
    const MatrixQuadratic q = make_random_spd(10, 2);
    const Vector theta = Vector::LinSpaced(10, -1.0, 2.0);
    const auto [value, grad] = quad_eval_grad(q, theta);
    CHECK(value == doctest::Approx(0.5 * theta.dot(q.A * theta) - q.b.dot(theta)).epsilon(1e-14));
    CHECK((grad - (q.A * theta - q.b)).lpNorm<Eigen::Infinity>() < 1e-14);
    const Objective f = as_objective(q);
    CHECK(f.value(theta) == value);
    CHECK(f.gradient(theta) == grad);
}

TEST_CASE("finite differences agree with the analytic gradient") {
    const MatrixQuadratic q = make_random_spd(30, 3);
    const Objective f = as_objective(q);
    const Vector theta = Vector::LinSpaced(30, -2.0, 3.0);
    const Vector fd = finite_diff_grad(f, theta, 1e-6);
    const Vector g = f.gradient(theta);
    for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(relative_error(g[i], fd[i]) < 1e-6);
}

TEST_CASE("relative_error") {
    CHECK(relative_error(1.0, 1.0) == 0.0);
    CHECK(relative_error(2.0, 1.0) == doctest::Approx(0.5));
    CHECK(relative_error(0.0, 1e-12) == doctest::Approx(1e-4));
    CHECK(relative_error(0.0, 1e-12, 1e-6) == doctest::Approx(1e-6));
}
