#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pil/data.hpp"
#include "pil/elm.hpp"
#include "pil/error.hpp"
#include "pil/metrics.hpp"
#include "pil/solver_kind.hpp"

namespace pil {

struct BenchOptions {
    std::vector<SolverKind> solvers{all_solvers.begin(), all_solvers.end()};
    std::size_t hidden_neurons = 100;
    std::uint64_t seed = 7;
    double ridge_lambda = 0.0;
    std::size_t repeats = 5;  // timed repetitions after one warmup
    ActivationKind activation = ActivationKind::logistic_sigmoid;
    std::optional<double> snr;  // echoed only
};

struct SolverResult {
    SolverKind solver = SolverKind::svd;
    std::optional<Errc> error;
    std::string error_message;
    MetricReport metrics;  // arithmetic mean over folds
    std::vector<MetricReport> per_fold;
    double train_s = 0.0;  // median over folds of the per-fold median
    double test_s = 0.0;
    std::int64_t flops = 0;
    std::vector<std::uint64_t> fold_h_hashes;  // FNV-1a of the training H per fold
};

struct BenchReport {
    BenchOptions options;
    std::size_t samples = 0;
    std::size_t features = 0;
    std::size_t folds = 0;
    std::vector<SolverResult> rows;
};

// Session-structured cross-validation of every requested solver. Solver
// failures are captured per row; they never abort the other solvers.
BenchReport evaluate(const Dataset& dataset, const BenchOptions& opts);

// {config:{...}, solvers:[{name, sensitivity, ..., train_s, test_s, flops, error}]}
std::string report_json(const BenchReport& report);

std::uint64_t fnv1a(const DenseMatrix& m) noexcept;

double median(std::vector<double> values);

}  // namespace pil
