#include "rud/autoencoder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace rud {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

}  // namespace

MlpAutoencoder::MlpAutoencoder(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("autoencoder: need at least two layer sizes");
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("autoencoder: layer sizes must be positive");
    }
    if (sizes_.front() != sizes_.back()) {
        throw std::invalid_argument("autoencoder: input and output sizes must match");
    }
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        parameter_count_ += Eigen::Index{sizes_[l + 1]} * (sizes_[l] + 1);
    }
}

MlpAutoencoder MlpAutoencoder::from_spec(std::string_view spec) {
    std::vector<int> sizes;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t end = std::min(spec.find('-', pos), spec.size());
        int value = 0;
        const auto [ptr, ec] = std::from_chars(spec.data() + pos, spec.data() + end, value);
        if (ec != std::errc() || ptr != spec.data() + end) {
            throw std::invalid_argument("autoencoder: bad layer spec '" + std::string(spec) + "'");
        }
        sizes.push_back(value);
        pos = end + 1;
    }
    return MlpAutoencoder(std::move(sizes));
}

std::vector<MlpAutoencoder::Layer> MlpAutoencoder::unflatten(const Vector& theta) const {
    if (theta.size() != parameter_count_) {
        throw std::invalid_argument("autoencoder: parameter vector has wrong length");
    }
    std::vector<Layer> layers;
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        Layer layer;
        layer.weights = Eigen::Map<const Eigen::MatrixXd>(theta.data() + offset, out, in);
        offset += Eigen::Index{out} * in;
        layer.bias = theta.segment(offset, out);
        offset += out;
        layers.push_back(std::move(layer));
    }
    return layers;
}

Vector MlpAutoencoder::flatten(const std::vector<Layer>& layers) const {
    if (layers.size() + 1 != sizes_.size()) throw std::invalid_argument("autoencoder: layer count");
    Vector theta(parameter_count_);
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        if (layers[l].weights.rows() != out || layers[l].weights.cols() != in ||
            layers[l].bias.size() != out) {
            throw std::invalid_argument("autoencoder: layer " + std::to_string(l) + " has wrong shape");
        }
        Eigen::Map<Eigen::MatrixXd>(theta.data() + offset, out, in) = layers[l].weights;
        offset += Eigen::Index{out} * in;
        theta.segment(offset, out) = layers[l].bias;
        offset += out;
    }
    return theta;
}

Vector MlpAutoencoder::initial_parameters(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<Layer> layers;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double s = std::sqrt(6.0 / (in + out));
        std::uniform_real_distribution<double> uniform(-s, s);
        Layer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
        for (Eigen::Index j = 0; j < in; ++j) {
            for (Eigen::Index i = 0; i < out; ++i) layer.weights(i, j) = uniform(rng);
        }
        layers.push_back(std::move(layer));
    }
    return flatten(layers);
}

Eigen::MatrixXd MlpAutoencoder::forward(const Vector& theta, const Eigen::MatrixXd& batch) const {
    if (batch.rows() != sizes_.front()) throw std::invalid_argument("autoencoder: batch has wrong pixel count");
    const auto layers = unflatten(theta);
    Eigen::MatrixXd a = batch;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        Eigen::MatrixXd z = layers[l].weights * a;
        z.colwise() += layers[l].bias;
        a = l + 1 == layers.size() ? sigmoid(z) : Eigen::MatrixXd(z.array().tanh());
    }
    return a;
}

namespace {

double bce(const Eigen::MatrixXd& p, const Eigen::MatrixXd& x) {
    constexpr double eps = MlpAutoencoder::kEpsilon;
    const Eigen::ArrayXXd q = p.array().max(eps).min(1.0 - eps);
    const Eigen::ArrayXXd per = -(x.array() * q.log() + (1.0 - x.array()) * (1.0 - q).log());
    return per.sum() / static_cast<double>(p.size());
}

}  // namespace

double MlpAutoencoder::loss(const Vector& theta, const Eigen::MatrixXd& batch) const {
    if (batch.cols() == 0) throw std::invalid_argument("autoencoder: empty batch");
    return bce(forward(theta, batch), batch);
}

std::pair<double, Vector> MlpAutoencoder::loss_and_gradient(const Vector& theta,
                                                            const Eigen::MatrixXd& batch) const {
    if (batch.cols() == 0) throw std::invalid_argument("autoencoder: empty batch");
    if (batch.rows() != sizes_.front()) throw std::invalid_argument("autoencoder: batch has wrong pixel count");
    const auto layers = unflatten(theta);
    const std::size_t depth = layers.size();

    // activations[l] is the input to layer l; activations[depth] the output.
    std::vector<Eigen::MatrixXd> activations{batch};
    for (std::size_t l = 0; l < depth; ++l) {
        Eigen::MatrixXd z = layers[l].weights * activations.back();
        z.colwise() += layers[l].bias;
        activations.push_back(l + 1 == depth ? sigmoid(z) : Eigen::MatrixXd(z.array().tanh()));
    }
    const Eigen::MatrixXd& p = activations.back();
    const double value = bce(p, batch);
    if (!std::isfinite(value)) throw NumericalError("autoencoder: non-finite loss");

    // Sigmoid + BCE: dL/dz = (p - x) / N inside the clamp band, zero outside.
    constexpr double eps = kEpsilon;
    const double n = static_cast<double>(p.size());
    Eigen::MatrixXd delta = (p - batch) / n;
    for (Eigen::Index k = 0; k < delta.size(); ++k) {
        const double pk = p.data()[k];
        if (pk < eps || pk > 1.0 - eps) delta.data()[k] = 0.0;
    }

    std::vector<Layer> grads(depth);
    for (std::size_t l = depth; l-- > 0;) {
        grads[l].weights = delta * activations[l].transpose();
        grads[l].bias = delta.rowwise().sum();
        if (l > 0) {
            const Eigen::ArrayXXd a = activations[l].array();
            delta = ((layers[l].weights.transpose() * delta).array() * (1.0 - a * a)).matrix();
        }
    }
    return {value, flatten(grads)};
}

std::pair<double, Vector> mlp_eval_grad(const MlpAutoencoder& model, const Vector& theta,
                                        const Eigen::MatrixXd& batch) {
    return model.loss_and_gradient(theta, batch);
}

Objective as_objective(const MlpAutoencoder& model, const Eigen::MatrixXd& batch) {
    auto m = std::make_shared<const MlpAutoencoder>(model);
    auto x = std::make_shared<const Eigen::MatrixXd>(batch);
    return Objective(
        m->parameter_count(), [m, x](const Vector& theta) { return m->loss(theta, *x); },
        [m, x](const Vector& theta) { return m->loss_and_gradient(theta, *x).second; });
}

}  // namespace rud
