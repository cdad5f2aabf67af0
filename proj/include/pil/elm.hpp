#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "pil/matrix.hpp"
#include "pil/solver_kind.hpp"

namespace pil {

enum class ActivationKind { logistic_sigmoid, hyperbolic_tangent, identity };

std::string_view activation_name(ActivationKind kind) noexcept;
std::optional<ActivationKind> parse_activation(std::string_view name) noexcept;
double activate(ActivationKind kind, double x) noexcept;

struct ElmConfig {
    std::size_t hidden_neurons = 100;
    ActivationKind activation = ActivationKind::logistic_sigmoid;
    SolverKind solver = SolverKind::svd;
    std::uint64_t rng_seed = 0;
    double ridge_lambda = 0.0;  // 0 disables regularization
};

// Per-feature min/max learned from training data.
struct Normalizer {
    Vector min_vals;
    Vector max_vals;

    bool operator==(const Normalizer&) const = default;
};

Normalizer fit_normalizer(const DenseMatrix& train_features);
// (x - min) / (max - min); constant features map to 0, no clipping.
DenseMatrix apply_normalizer(const Normalizer& nrm, const DenseMatrix& features);

struct RandomLayer {
    DenseMatrix input_weights;  // n_features x hidden_neurons
    Vector biases;              // hidden_neurons
};

// Uniform [-1, 1] draws from a generator seeded with cfg.rng_seed.
RandomLayer init_random_layer(const ElmConfig& cfg, std::size_t n_features);

// H(i, k) = phi(<x_i, weight column k> + b_k)
DenseMatrix hidden_output(const DenseMatrix& features, const DenseMatrix& input_weights,
                          std::span<const double> biases, ActivationKind activation);

// Least-squares (or ridge, when ridge_lambda > 0) output weights for h w = targets.
Vector solve_output_weights(const DenseMatrix& h, std::span<const double> targets, SolverKind solver,
                            double ridge_lambda = 0.0);

struct ElmModel {
    DenseMatrix input_weights;
    Vector biases;
    Vector output_weights;
    Normalizer normalizer;
    ActivationKind activation = ActivationKind::logistic_sigmoid;

    std::size_t hidden_neurons() const noexcept { return output_weights.size(); }
    std::size_t n_features() const noexcept { return input_weights.rows(); }

    bool operator==(const ElmModel&) const = default;
};

struct TrainResult {
    ElmModel model;
    double train_seconds = 0.0;  // wall clock for the whole pipeline
};

// fit_normalizer -> init_random_layer -> hidden_output -> solve_output_weights.
TrainResult train(const DenseMatrix& features, std::span<const double> targets, const ElmConfig& cfg);

struct Prediction {
    Vector scores;
    std::vector<int> labels;  // 1 when score >= decision_threshold
};

inline constexpr double decision_threshold = 0.5;

Prediction predict(const ElmModel& model, const DenseMatrix& features);

// 1 - diag(H (H^T H + lambda I)^-1 H^T); the inner solve goes through the
// decomposition selected by `route`.
Vector hat_diagnostic(const DenseMatrix& h, double ridge_lambda, SolverKind route = SolverKind::lu);

}  // namespace pil
