#include "pil/elm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

namespace {

// Solves a x = b (b may hold several right-hand sides) for the symmetric
// positive (semi-)definite normal matrix a, through the factorization that
// belongs to `route`.
DenseMatrix normal_solve(const DenseMatrix& a, const DenseMatrix& b, SolverKind route) {
    switch (route) {
    case SolverKind::lu: {
        const auto f = lu_decompose(a);
        DenseMatrix x(b.rows(), b.cols());
        for (std::size_t c = 0; c < b.cols(); ++c) {
            const Vector col = lu_solve(f, b.col(c));
            for (std::size_t i = 0; i < col.size(); ++i) x(i, c) = col[i];
        }
        return x;
    }
    case SolverKind::mgs_qr:
    case SolverKind::hh_qr: {
        const auto f = route == SolverKind::mgs_qr ? mgs_qr(a) : householder_qr(a);
        return triangular_inverse(f.r) * (f.q.transpose() * b);
    }
    case SolverKind::hessenberg: {
        const auto f = hessenberg_reduce(a);
        return f.q * tridiagonal_solve(f.t, f.q.transpose() * b);
    }
    case SolverKind::schur: {
        const auto f = schur_decompose(a);
        const std::size_t m = a.rows();
        const double top = std::abs(f.t(0, 0));
        DenseMatrix y = f.q.transpose() * b;
        for (std::size_t i = 0; i < m; ++i) {
            const double ev = f.t(i, i);
            if (std::abs(ev) < pivot_tolerance * top || ev == 0.0)
                throw Error(Errc::singular_matrix,
                            "schur route: eigenvalue " + std::to_string(i) + " vanishes");
            for (auto& e : y.row(i)) e /= ev;
        }
        return f.q * y;
    }
    case SolverKind::svd: {
        const auto f = svd(a);
        const double top = f.sigma.front();
        DenseMatrix y = f.u.transpose() * b;
        for (std::size_t i = 0; i < f.sigma.size(); ++i) {
            const double s = f.sigma[i];
            if (s < pivot_tolerance * top || s == 0.0)
                throw Error(Errc::singular_matrix,
                            "svd route: singular value " + std::to_string(i) + " vanishes");
            for (auto& e : y.row(i)) e /= s;
        }
        return f.v * y;
    }
    }
    throw Error(Errc::invalid_argument, "unknown solver");
}

DenseMatrix regularized_gram(const DenseMatrix& h, double ridge_lambda) {
    DenseMatrix a = gram(h);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += ridge_lambda;
    return a;
}

Vector column_vector(const DenseMatrix& x) {
    Vector out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = x(i, 0);
    return out;
}

}  // namespace

std::string_view activation_name(ActivationKind kind) noexcept {
    switch (kind) {
    case ActivationKind::logistic_sigmoid: return "sigmoid";
    case ActivationKind::hyperbolic_tangent: return "tanh";
    case ActivationKind::identity: return "identity";
    }
    return "unknown";
}

std::optional<ActivationKind> parse_activation(std::string_view name) noexcept {
    for (auto k : {ActivationKind::logistic_sigmoid, ActivationKind::hyperbolic_tangent,
                   ActivationKind::identity})
        if (activation_name(k) == name) return k;
    return std::nullopt;
}

double activate(ActivationKind kind, double x) noexcept {
    switch (kind) {
    case ActivationKind::logistic_sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::hyperbolic_tangent: return std::tanh(x);
    case ActivationKind::identity: return x;
    }
    return x;
}

Normalizer fit_normalizer(const DenseMatrix& train_features) {
    Normalizer nrm;
    nrm.min_vals.assign(train_features.row(0).begin(), train_features.row(0).end());
    nrm.max_vals = nrm.min_vals;
    for (std::size_t i = 1; i < train_features.rows(); ++i) {
        auto r = train_features.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            nrm.min_vals[j] = std::min(nrm.min_vals[j], r[j]);
            nrm.max_vals[j] = std::max(nrm.max_vals[j], r[j]);
        }
    }
    return nrm;
}

DenseMatrix apply_normalizer(const Normalizer& nrm, const DenseMatrix& features) {
    if (features.cols() != nrm.min_vals.size() || nrm.max_vals.size() != nrm.min_vals.size())
        throw Error(Errc::dimension_mismatch,
                    "normalizer expects " + std::to_string(nrm.min_vals.size()) + " features, got " +
                        std::to_string(features.cols()));
    DenseMatrix out(features.rows(), features.cols());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto src = features.row(i);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < src.size(); ++j) {
            const double span = nrm.max_vals[j] - nrm.min_vals[j];
            dst[j] = span > 0.0 ? (src[j] - nrm.min_vals[j]) / span : 0.0;
        }
    }
    return out;
}

RandomLayer init_random_layer(const ElmConfig& cfg, std::size_t n_features) {
    if (n_features == 0 || cfg.hidden_neurons == 0)
        throw Error(Errc::invalid_argument, "init_random_layer: empty layer");
    std::mt19937_64 gen(cfg.rng_seed);
    // 53 random mantissa bits mapped onto [-1, 1).
    auto draw = [&gen] { return 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0; };

    RandomLayer layer{DenseMatrix(n_features, cfg.hidden_neurons), Vector(cfg.hidden_neurons)};
    for (auto& w : layer.input_weights.data()) w = draw();
    for (auto& b : layer.biases) b = draw();
    return layer;
}

DenseMatrix hidden_output(const DenseMatrix& features, const DenseMatrix& input_weights,
                          std::span<const double> biases, ActivationKind activation) {
    if (features.cols() != input_weights.rows() || biases.size() != input_weights.cols())
        throw Error(Errc::dimension_mismatch, "hidden_output: nonconforming shapes");
    DenseMatrix h = features * input_weights;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        auto hi = h.row(i);
        for (std::size_t k = 0; k < hi.size(); ++k) hi[k] = activate(activation, hi[k] + biases[k]);
    }
    return h;
}

Vector solve_output_weights(const DenseMatrix& h, std::span<const double> targets, SolverKind solver,
                            double ridge_lambda) {
    if (targets.size() != h.rows())
        throw Error(Errc::dimension_mismatch, "solve_output_weights: " + std::to_string(targets.size()) +
                                                  " targets for " + std::to_string(h.rows()) + " rows");
    if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda))
        throw Error(Errc::invalid_argument, "ridge_lambda must be a finite non-negative number");
    if (ridge_lambda == 0.0 && h.rows() < h.cols())
        throw Error(Errc::dimension_mismatch,
                    "solve_output_weights: fewer samples than hidden neurons without regularization");

    if (solver == SolverKind::mgs_qr || solver == SolverKind::hh_qr || solver == SolverKind::svd) {
        // Ridge as plain least squares on [H; sqrt(lambda) I], which keeps these
        // routes away from the squared condition number of the normal matrix.
        DenseMatrix stacked = h;
        Vector rhs(targets.begin(), targets.end());
        if (ridge_lambda > 0.0) {
            const std::size_t n = h.rows(), m = h.cols();
            stacked = DenseMatrix(n + m, m);
            for (std::size_t i = 0; i < n; ++i)
                std::copy(h.row(i).begin(), h.row(i).end(), stacked.row(i).begin());
            const double root = std::sqrt(ridge_lambda);
            for (std::size_t j = 0; j < m; ++j) stacked(n + j, j) = root;
            rhs.resize(n + m, 0.0);
        }
        switch (solver) {
        case SolverKind::mgs_qr:
        case SolverKind::hh_qr: {
            const auto f = solver == SolverKind::mgs_qr ? mgs_qr(stacked) : householder_qr(stacked);
            return multiply(triangular_inverse(f.r), multiply_transposed(f.q, rhs));
        }
        case SolverKind::svd: {
            const auto f = svd(stacked);
            const double cutoff = pivot_tolerance * f.sigma.front();
            const Vector ut = multiply_transposed(f.u, rhs);
            Vector w(h.cols(), 0.0);
            for (std::size_t k = 0; k < f.sigma.size(); ++k) {
                if (f.sigma[k] <= cutoff || f.sigma[k] == 0.0) continue;
                const double coef = ut[k] / f.sigma[k];
                for (std::size_t i = 0; i < w.size(); ++i) w[i] += coef * f.v(i, k);
            }
            return w;
        }
        default: break;
        }
    }

    const DenseMatrix a = regularized_gram(h, ridge_lambda);
    const Vector rhs = multiply_transposed(h, targets);
    return column_vector(normal_solve(a, DenseMatrix::column(rhs), solver));
}

TrainResult train(const DenseMatrix& features, std::span<const double> targets, const ElmConfig& cfg) {
    if (features.rows() < 2) throw Error(Errc::invalid_argument, "train: need at least 2 samples");
    if (targets.size() != features.rows())
        throw Error(Errc::length_mismatch, "train: targets length differs from sample count");
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i] != 0.0 && targets[i] != 1.0)
            throw Error(Errc::invalid_label, "train: target " + std::to_string(i) + " is not 0 or 1");

    const auto start = std::chrono::steady_clock::now();
    Normalizer nrm = fit_normalizer(features);
    const DenseMatrix x = apply_normalizer(nrm, features);
    RandomLayer layer = init_random_layer(cfg, features.cols());
    const DenseMatrix h = hidden_output(x, layer.input_weights, layer.biases, cfg.activation);
    Vector w = solve_output_weights(h, targets, cfg.solver, cfg.ridge_lambda);
    const auto stop = std::chrono::steady_clock::now();

    return {ElmModel{std::move(layer.input_weights), std::move(layer.biases), std::move(w),
                     std::move(nrm), cfg.activation},
            std::chrono::duration<double>(stop - start).count()};
}

Prediction predict(const ElmModel& model, const DenseMatrix& features) {
    if (features.cols() != model.n_features())
        throw Error(Errc::dimension_mismatch, "predict: model expects " + std::to_string(model.n_features()) +
                                                  " features, got " + std::to_string(features.cols()));
    const DenseMatrix x = apply_normalizer(model.normalizer, features);
    const DenseMatrix h = hidden_output(x, model.input_weights, model.biases, model.activation);
    Prediction out;
    out.scores = multiply(h, model.output_weights);
    out.labels.reserve(out.scores.size());
    for (double s : out.scores) out.labels.push_back(s >= decision_threshold ? 1 : 0);
    return out;
}

Vector hat_diagnostic(const DenseMatrix& h, double ridge_lambda, SolverKind route) {
    if (!(ridge_lambda > 0.0) || !std::isfinite(ridge_lambda))
        throw Error(Errc::invalid_argument, "hat_diagnostic: ridge_lambda must be positive");
    const DenseMatrix a = regularized_gram(h, ridge_lambda);
    // x = (H^T H + lambda I)^-1 H^T, so diag(H x)_i = <row i of H, column i of x>.
    const DenseMatrix x = normal_solve(a, h.transpose(), route);
    Vector out(h.rows());
    for (std::size_t i = 0; i < h.rows(); ++i) {
        auto hi = h.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < hi.size(); ++k) s += hi[k] * x(k, i);
        out[i] = 1.0 - s;
    }
    return out;
}

}  // namespace pil
