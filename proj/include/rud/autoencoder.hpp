#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "rud/optimizers.hpp"

namespace rud {

/// Fully connected autoencoder: tanh on every hidden layer, logistic sigmoid
/// on the output, mean binary cross-entropy against the input.
///
/// Parameters live in one flat vector. Layer l (mapping sizes[l] to
/// sizes[l+1]) contributes its weight matrix in column-major order followed
/// by its bias vector.
class MlpAutoencoder {
public:
    struct Layer {
        Eigen::MatrixXd weights;  // out x in
        Eigen::VectorXd bias;     // out
    };

    /// Probabilities are clamped to [kEpsilon, 1 - kEpsilon] before the logs.
    static constexpr double kEpsilon = 1e-7;

    /// At least two sizes; the first and last must match.
    explicit MlpAutoencoder(std::vector<int> layer_sizes);

    /// Parses "784-64-16-64-784".
    static MlpAutoencoder from_spec(std::string_view spec);

    const std::vector<int>& layer_sizes() const noexcept { return sizes_; }
    Eigen::Index parameter_count() const noexcept { return parameter_count_; }

    std::vector<Layer> unflatten(const Vector& theta) const;
    Vector flatten(const std::vector<Layer>& layers) const;

    /// Glorot-uniform weights in [-s, s], s = sqrt(6 / (fan_in + fan_out)),
    /// zero biases.
    Vector initial_parameters(std::uint64_t seed) const;

    /// Reconstruction (pixels x batch), each entry in (0, 1).
    Eigen::MatrixXd forward(const Vector& theta, const Eigen::MatrixXd& batch) const;

    double loss(const Vector& theta, const Eigen::MatrixXd& batch) const;

    /// Loss and its gradient by backpropagation. Throws NumericalError on a
    /// non-finite loss.
    std::pair<double, Vector> loss_and_gradient(const Vector& theta,
                                                const Eigen::MatrixXd& batch) const;

private:
    std::vector<int> sizes_;
    Eigen::Index parameter_count_ = 0;
};

std::pair<double, Vector> mlp_eval_grad(const MlpAutoencoder& model, const Vector& theta,
                                        const Eigen::MatrixXd& batch);

/// Objective over a fixed batch. Copies the model and batch.
Objective as_objective(const MlpAutoencoder& model, const Eigen::MatrixXd& batch);

}  // namespace rud
