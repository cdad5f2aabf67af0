#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "pil/elm.hpp"
#include "pil/error.hpp"
#include "pil/linalg.hpp"
#include "support.hpp"

using namespace pil;
using pil::test::random_matrix;
using pil::test::random_vector;
using pil::test::reference_inverse;
using pil::test::reference_least_squares;
using pil::test::rel_diff;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected pil::Error");
    return Errc::invalid_argument;
}

Vector binary_targets(std::size_t n, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(0.3);
    Vector t(n);
    for (auto& x : t) x = coin(gen) ? 1.0 : 0.0;
    return t;
}

// Two Gaussian blobs, label 1 around (2, 2) and label 0 around (-2, -2).
void blobs(std::size_t n, std::mt19937_64& gen, DenseMatrix& x, Vector& y) {
    std::normal_distribution<double> noise(0.0, 0.5);
    x = DenseMatrix(n, 2);
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = i % 2 == 0 ? 2.0 : -2.0;
        x(i, 0) = c + noise(gen);
        x(i, 1) = c + noise(gen);
        y[i] = i % 2 == 0 ? 1.0 : 0.0;
    }
}

double train_mse(const ElmModel& model, const DenseMatrix& x, const Vector& y) {
    const auto p = predict(model, x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (p.scores[i] - y[i]) * (p.scores[i] - y[i]);
    return s / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("activation functions") {
    CHECK(activate(ActivationKind::logistic_sigmoid, 0.0) == 0.5);
    CHECK(activate(ActivationKind::identity, -3.25) == -3.25);
    CHECK(activate(ActivationKind::hyperbolic_tangent, 0.0) == 0.0);
    for (double x : {-40.0, -1.0, 0.3, 12.0}) {
        const double s = activate(ActivationKind::logistic_sigmoid, x);
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }
    CHECK(parse_activation("tanh") == ActivationKind::hyperbolic_tangent);
    CHECK_FALSE(parse_activation("relu").has_value());
}

TEST_CASE("fit_normalizer and apply_normalizer") {
    SUBCASE("unit column") {
        const auto n = fit_normalizer(DenseMatrix{{0}, {1}});
        CHECK(n.min_vals == Vector{0});
        CHECK(n.max_vals == Vector{1});
    }
    SUBCASE("constant feature maps to zero") {
        const auto n = fit_normalizer(DenseMatrix{{5}, {5}, {5}});
        CHECK(n.min_vals == Vector{5});
        CHECK(n.max_vals == Vector{5});
        CHECK(apply_normalizer(n, DenseMatrix{{5}, {7}})(1, 0) == 0.0);
    }
    SUBCASE("symmetric range") {
        const auto n = fit_normalizer(DenseMatrix{{-2}, {0}, {2}});
        CHECK(n.min_vals == Vector{-2});
        CHECK(n.max_vals == Vector{2});
        const auto x = apply_normalizer(n, DenseMatrix{{0}, {1}, {-2}, {2}});
        CHECK(x(0, 0) == 0.5);
        CHECK(x(1, 0) == 0.75);
        CHECK(x(2, 0) == 0.0);
        CHECK(x(3, 0) == 1.0);
    }
    SUBCASE("no clipping outside the training range") {
        const Normalizer n{{0}, {10}};
        CHECK(apply_normalizer(n, DenseMatrix{{15}})(0, 0) == 1.5);
        CHECK(apply_normalizer(n, DenseMatrix{{-5}})(0, 0) == -0.5);
    }
    SUBCASE("training data lands exactly on [0, 1]") {
        std::mt19937_64 gen(41);
        const auto raw = random_matrix(30, 6, gen, -50.0, 80.0);
        const auto x = apply_normalizer(fit_normalizer(raw), raw);
        for (std::size_t j = 0; j < 6; ++j) {
            const auto c = x.col(j);
            CHECK(*std::min_element(c.begin(), c.end()) == 0.0);
            CHECK(*std::max_element(c.begin(), c.end()) == 1.0);
        }
    }
    SUBCASE("column count mismatch") {
        const Normalizer n{{0, 0}, {1, 1}};
        CHECK(code_of([&] { apply_normalizer(n, DenseMatrix(2, 3)); }) == Errc::dimension_mismatch);
    }
}

TEST_CASE("init_random_layer") {
    ElmConfig cfg;
    cfg.hidden_neurons = 3;
    cfg.rng_seed = 42;
    const auto a = init_random_layer(cfg, 4);
    const auto b = init_random_layer(cfg, 4);
    CHECK(a.input_weights == b.input_weights);
    CHECK(a.biases == b.biases);
    CHECK(a.input_weights.rows() == 4);
    CHECK(a.input_weights.cols() == 3);
    CHECK(a.biases.size() == 3);

    cfg.rng_seed = 43;
    CHECK_FALSE(init_random_layer(cfg, 4).input_weights == a.input_weights);

    cfg.rng_seed = 42;
    cfg.hidden_neurons = 100;
    const auto big = init_random_layer(cfg, 100);
    double sum = 0.0;
    for (double w : big.input_weights.data()) {
        CHECK(w >= -1.0);
        CHECK(w <= 1.0);
        sum += w;
    }
    CHECK(std::abs(sum / 10000.0) < 0.1);
    for (double b : big.biases) {
        CHECK(b >= -1.0);
        CHECK(b <= 1.0);
    }
}

TEST_CASE("hidden_output") {
    CHECK(hidden_output(DenseMatrix{{1, 2}}, DenseMatrix(2, 3), Vector(3, 0.0), ActivationKind::identity) ==
          DenseMatrix(1, 3));
    const auto h = hidden_output(DenseMatrix{{4, -1}, {0, 2}}, DenseMatrix(2, 2), Vector(2, 0.0),
                                 ActivationKind::logistic_sigmoid);
    for (double v : h.data()) CHECK(v == 0.5);
    const auto one = hidden_output(DenseMatrix{{1, 2}}, DenseMatrix{{3}, {-1}}, Vector{0.5}, ActivationKind::identity);
    CHECK(one == DenseMatrix{{1.5}});
    CHECK(code_of([] { hidden_output(DenseMatrix(1, 2), DenseMatrix(3, 1), Vector{0}, ActivationKind::identity); }) ==
          Errc::dimension_mismatch);
}

TEST_CASE("solve_output_weights") {
    SUBCASE("identity system") {
        const Vector t{0.5, -1, 2, 3};
        for (auto s : all_solvers) {
            const auto w = solve_output_weights(DenseMatrix::identity(4), t, s);
            CHECK_MESSAGE(rel_diff(w, t) <= 1e-14, solver_name(s));
        }
    }
    SUBCASE("orthonormal columns") {
        std::mt19937_64 gen(43);
        const auto q = householder_qr(random_matrix(12, 4, gen)).q;
        const auto t = random_vector(12, gen);
        const auto expect = multiply_transposed(q, t);
        for (auto s : all_solvers) CHECK_MESSAGE(rel_diff(solve_output_weights(q, t, s), expect) <= 1e-12, solver_name(s));
    }
    SUBCASE("random 50x10: every route against svd and an extended-precision oracle") {
        std::mt19937_64 gen(47);
        for (int trial = 0; trial < 10; ++trial) {
            const auto h = random_matrix(50, 10, gen);
            const auto t = random_vector(50, gen);
            const auto ref = reference_least_squares(h, t);
            const auto w_svd = solve_output_weights(h, t, SolverKind::svd);
            CHECK(rel_diff(w_svd, ref) <= 1e-10);
            for (auto s : all_solvers) {
                const auto w = solve_output_weights(h, t, s);
                CHECK_MESSAGE(rel_diff(w, w_svd) <= 1e-8, solver_name(s));
                // Normal-equations residual.
                Vector r = multiply(h, w);
                for (std::size_t i = 0; i < r.size(); ++i) r[i] -= t[i];
                CHECK(norm2(multiply_transposed(h, r)) <= 1e-8 * norm2(multiply_transposed(h, t)));
            }
        }
    }
    SUBCASE("ridge solution matches the regularized normal equations") {
        std::mt19937_64 gen(53);
        const auto h = random_matrix(40, 8, gen);
        const auto t = random_vector(40, gen);
        const auto ref = reference_least_squares(h, t, 0.3);
        for (auto s : all_solvers) CHECK_MESSAGE(rel_diff(solve_output_weights(h, t, s, 0.3), ref) <= 1e-10, solver_name(s));
    }
    SUBCASE("ridge shrinks the weights") {
        std::mt19937_64 gen(59);
        const auto h = random_matrix(30, 6, gen);
        const auto t = random_vector(30, gen);
        for (auto s : all_solvers) {
            double previous = norm2(solve_output_weights(h, t, s, 0.0));
            for (double lambda : {1e-3, 1e-1, 1.0, 10.0, 1e3}) {
                const double current = norm2(solve_output_weights(h, t, s, lambda));
                CHECK(current <= previous * (1.0 + 1e-12));
                previous = current;
            }
        }
    }
    SUBCASE("ridge allows fewer samples than neurons") {
        std::mt19937_64 gen(61);
        const auto h = random_matrix(4, 9, gen);
        const auto t = random_vector(4, gen);
        const auto ref = reference_least_squares(h, t, 0.5);
        for (auto s : all_solvers) CHECK(rel_diff(solve_output_weights(h, t, s, 0.5), ref) <= 1e-10);
    }
    SUBCASE("errors") {
        const DenseMatrix dup{{1, 1}, {2, 2}, {3, 3}};
        const Vector t{1, 0, 1};
        CHECK(code_of([&] { solve_output_weights(dup, t, SolverKind::mgs_qr); }) == Errc::rank_deficient);
        CHECK(code_of([&] { solve_output_weights(dup, t, SolverKind::hh_qr); }) == Errc::rank_deficient);
        CHECK(code_of([&] { solve_output_weights(dup, t, SolverKind::lu); }) == Errc::singular_matrix);
        CHECK(code_of([&] { solve_output_weights(dup, t, SolverKind::schur); }) == Errc::singular_matrix);
        CHECK(code_of([&] { solve_output_weights(dup, t, SolverKind::hessenberg); }) == Errc::singular_matrix);
        // The svd route is a true pseudoinverse: minimum-norm solution w1 = w2.
        const auto w = solve_output_weights(dup, t, SolverKind::svd);
        CHECK(w[0] == doctest::Approx(w[1]));
        CHECK(code_of([&] { solve_output_weights(dup, Vector{1, 0}, SolverKind::svd); }) == Errc::dimension_mismatch);
        CHECK(code_of([&] { solve_output_weights(DenseMatrix(2, 3), Vector{1, 0}, SolverKind::svd); }) ==
              Errc::dimension_mismatch);
        CHECK(code_of([&] { solve_output_weights(dup, t, SolverKind::svd, -1.0); }) == Errc::invalid_argument);
    }
}

TEST_CASE("train") {
    SUBCASE("m = n reaches zero training error") {
        std::mt19937_64 gen(67);
        const auto x = random_matrix(64, 64, gen);
        const auto y = binary_targets(64, gen);
        for (auto s : all_solvers) {
            ElmConfig cfg;
            cfg.hidden_neurons = 64;
            cfg.solver = s;
            cfg.rng_seed = 1;
            const auto result = train(x, y, cfg);
            CHECK_MESSAGE(train_mse(result.model, x, y) <= 1e-6, solver_name(s));
            CHECK(result.train_seconds > 0.0);
        }
    }
    SUBCASE("duplicated samples") {
        for (auto s : all_solvers) {
            ElmConfig cfg;
            cfg.hidden_neurons = 1;
            cfg.solver = s;
            const auto result = train(DenseMatrix{{1, 2}, {1, 2}}, Vector{1, 1}, cfg);
            CHECK(result.model.output_weights.size() == 1);
        }
    }
    SUBCASE("deterministic") {
        std::mt19937_64 gen(71);
        const auto x = random_matrix(80, 5, gen);
        const auto y = binary_targets(80, gen);
        ElmConfig cfg;
        cfg.hidden_neurons = 12;
        cfg.rng_seed = 99;
        for (auto s : all_solvers) {
            cfg.solver = s;
            CHECK(train(x, y, cfg).model == train(x, y, cfg).model);
        }
    }
    SUBCASE("validation") {
        ElmConfig cfg;
        cfg.hidden_neurons = 1;
        CHECK(code_of([&] { train(DenseMatrix{{1}}, Vector{1}, cfg); }) == Errc::invalid_argument);
        CHECK(code_of([&] { train(DenseMatrix{{1}, {2}}, Vector{1}, cfg); }) == Errc::length_mismatch);
        CHECK(code_of([&] { train(DenseMatrix{{1}, {2}}, Vector{1, 2}, cfg); }) == Errc::invalid_label);
    }
}

TEST_CASE("predict") {
    SUBCASE("memorizes the training set") {
        std::mt19937_64 gen(73);
        const auto x = random_matrix(40, 40, gen);
        const auto y = binary_targets(40, gen);
        ElmConfig cfg;
        cfg.hidden_neurons = 40;
        cfg.solver = SolverKind::hh_qr;
        const auto model = train(x, y, cfg).model;
        const auto p = predict(model, x);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(p.labels[i] == static_cast<int>(y[i]));
    }
    SUBCASE("zero output weights") {
        std::mt19937_64 gen(79);
        ElmConfig cfg;
        cfg.hidden_neurons = 5;
        auto layer = init_random_layer(cfg, 3);
        const ElmModel model{layer.input_weights, layer.biases, Vector(5, 0.0), Normalizer{{0, 0, 0}, {1, 1, 1}},
                             ActivationKind::logistic_sigmoid};
        const auto p = predict(model, random_matrix(7, 3, gen));
        for (double s : p.scores) CHECK(s == 0.0);
        for (int l : p.labels) CHECK(l == 0);
    }
    SUBCASE("separable blobs") {
        std::mt19937_64 gen(83);
        DenseMatrix x_train(1, 1), x_test(1, 1);
        Vector y_train, y_test;
        blobs(200, gen, x_train, y_train);
        blobs(200, gen, x_test, y_test);
        // Two smooth inputs leave H numerically rank deficient, so the normal-equation
        // routes need a small ridge. The default svd route runs without one.
        for (auto s : all_solvers) {
            ElmConfig cfg;
            cfg.hidden_neurons = 20;
            cfg.solver = s;
            cfg.rng_seed = 5;
            cfg.ridge_lambda = s == SolverKind::svd ? 0.0 : 1e-8;
            const auto model = train(x_train, y_train, cfg).model;
            const auto p = predict(model, x_test);
            std::size_t correct = 0;
            for (std::size_t i = 0; i < y_test.size(); ++i) correct += p.labels[i] == static_cast<int>(y_test[i]);
            CHECK_MESSAGE(static_cast<double>(correct) / 200.0 >= 0.99, solver_name(s));
        }
    }
    SUBCASE("feature width mismatch") {
        ElmConfig cfg;
        cfg.hidden_neurons = 2;
        const auto model = train(DenseMatrix{{0, 1}, {1, 0}, {1, 1}}, Vector{0, 1, 1}, cfg).model;
        CHECK(code_of([&] { predict(model, DenseMatrix(1, 3)); }) == Errc::dimension_mismatch);
    }
}

TEST_CASE("hat_diagnostic") {
    SUBCASE("zero matrix") {
        for (auto s : all_solvers) {
            const auto v = hat_diagnostic(DenseMatrix(6, 3), 0.5, s);
            for (double x : v) CHECK(x == 1.0);
        }
    }
    SUBCASE("identity with vanishing lambda") {
        for (auto s : all_solvers) {
            const auto v = hat_diagnostic(DenseMatrix::identity(5), 1e-9, s);
            for (double x : v) {
                CHECK(x <= 1e-8);
                CHECK(x > 0.0);
            }
        }
    }
    SUBCASE("random 20x5 against an explicit inverse") {
        std::mt19937_64 gen(89);
        for (int trial = 0; trial < 5; ++trial) {
            const auto h = random_matrix(20, 5, gen);
            DenseMatrix a = gram(h);
            for (std::size_t i = 0; i < 5; ++i) a(i, i) += 0.1;
            const auto inv = reference_inverse(a);
            for (auto s : all_solvers) {
                const auto v = hat_diagnostic(h, 0.1, s);
                double trace = 0.0;
                for (std::size_t i = 0; i < 20; ++i) {
                    long double d = 0.0L;
                    for (std::size_t j = 0; j < 5; ++j)
                        for (std::size_t k = 0; k < 5; ++k) d += h(i, j) * inv[j][k] * h(i, k);
                    CHECK(std::abs(v[i] - static_cast<double>(1.0L - d)) <= 1e-10);
                    CHECK(v[i] > 0.0);
                    CHECK(v[i] <= 1.0);
                    trace += 1.0 - v[i];
                }
                CHECK(trace <= 5.0);
            }
        }
    }
    SUBCASE("lambda must be positive") {
        CHECK(code_of([] { hat_diagnostic(DenseMatrix(2, 1), 0.0); }) == Errc::invalid_argument);
    }
}
