#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

#include "rud/optimizers.hpp"

namespace rud {

using Matrix = Eigen::MatrixXd;

/// J(theta) = theta^2 / 2 in one dimension; the gradient is theta itself.
Objective scalar_quadratic();

/// J(theta) = theta' A theta / 2 - theta' b with A symmetric positive definite.
struct MatrixQuadratic {
    Matrix A;
    Vector b;

    Eigen::Index dim() const noexcept { return b.size(); }
    /// Solution of A theta = b (Cholesky).
    Vector minimizer() const;
    /// J at the minimizer, -b' theta* / 2.
    double minimum_value() const;
};

/// A = Q' D Q with Q orthogonal (sign-fixed QR of a standard-normal matrix)
/// and D log-uniform in [eig_low, eig_high]; b is standard normal / sqrt(dim).
/// Bitwise reproducible for a given seed.
MatrixQuadratic make_random_spd(Eigen::Index dim, std::uint64_t seed, double eig_low = 0.01,
                                double eig_high = 1.0);

std::pair<double, Vector> quad_eval_grad(const MatrixQuadratic& q, const Vector& theta);

/// Wraps the instance by value; the result may outlive `q`.
Objective as_objective(const MatrixQuadratic& q);

/// Central differences (f(theta + h e_i) - f(theta - h e_i)) / 2h.
Vector finite_diff_grad(const Objective& f, const Vector& theta, double h);

/// |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor = 1e-8);

}  // namespace rud
