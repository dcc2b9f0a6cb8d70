#include "rud/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

namespace rud {

Objective scalar_quadratic() {
    return Objective(
        1, [](const Vector& theta) { return 0.5 * theta[0] * theta[0]; },
        [](const Vector& theta) { return theta; });
}

Vector MatrixQuadratic::minimizer() const {
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("matrix quadratic: A is not positive definite");
    }
    return llt.solve(b);
}

double MatrixQuadratic::minimum_value() const { return -0.5 * b.dot(minimizer()); }

MatrixQuadratic make_random_spd(Eigen::Index dim, std::uint64_t seed, double eig_low,
                                double eig_high) {
    if (dim < 1) throw std::invalid_argument("make_random_spd: dim must be positive");
    if (!(eig_low > 0.0) || !(eig_low <= eig_high) || !std::isfinite(eig_high)) {
        throw std::invalid_argument("make_random_spd: need 0 < eig_low <= eig_high");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Matrix gaussian(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) gaussian(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the column signs so that diag(R) > 0; this makes Q unique.
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    }

    Vector eig(dim);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_lo = std::log(eig_low);
    const double log_hi = std::log(eig_high);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double u = unit(rng);
        eig[i] = eig_low == eig_high ? eig_low
                                     : std::clamp(std::exp(log_lo + u * (log_hi - log_lo)),
                                                  eig_low, eig_high);
    }

    MatrixQuadratic q;
    q.A = Q.transpose() * eig.asDiagonal() * Q;
    q.A = (0.5 * (q.A + q.A.transpose())).eval();

    q.b.resize(dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) q.b[i] = scale * normal(rng);
    return q;
}

std::pair<double, Vector> quad_eval_grad(const MatrixQuadratic& q, const Vector& theta) {
    if (theta.size() != q.dim()) throw std::invalid_argument("quad_eval_grad: dimension mismatch");
    const Vector a_theta = q.A * theta;
    const double value = 0.5 * theta.dot(a_theta) - theta.dot(q.b);
    return {value, a_theta - q.b};
}

Objective as_objective(const MatrixQuadratic& q) {
    auto shared = std::make_shared<const MatrixQuadratic>(q);
    return Objective(
        q.dim(), [shared](const Vector& theta) { return quad_eval_grad(*shared, theta).first; },
        [shared](const Vector& theta) { return Vector(shared->A * theta - shared->b); });
}

Vector finite_diff_grad(const Objective& f, const Vector& theta, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be positive");
    Vector g(theta.size());
    Vector probe = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double keep = probe[i];
        probe[i] = keep + h;
        const double up = f.value(probe);
        probe[i] = keep - h;
        const double down = f.value(probe);
        probe[i] = keep;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double relative_error(double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace rud
