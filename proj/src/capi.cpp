#include "pil/pil.h"

#include <cmath>
#include <memory>
#include <new>
#include <string>

#include "pil/bench.hpp"
#include "pil/data.hpp"
#include "pil/elm.hpp"
#include "pil/error.hpp"
#include "pil/linalg.hpp"
#include "pil/metrics.hpp"

struct pil_matrix {
    pil::DenseMatrix value;
};

struct pil_model {
    pil::ElmModel value;
};

struct pil_fold_plan {
    pil::FoldPlan value;
};

struct pil_dataset {
    pil::Dataset value;
    pil_matrix features;
};

struct pil_bench_report {
    pil::BenchReport value;
    std::string json;
    std::vector<std::string> errors;
};

namespace {

thread_local std::string last_error;

struct NullArgument {};

template <typename T>
const T& require(const T* p) {
    if (p == nullptr) throw NullArgument{};
    return *p;
}

void require_ptr(const void* p) {
    if (p == nullptr) throw NullArgument{};
}

template <typename F>
pil_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return PIL_OK;
    } catch (const pil::Error& e) {
        last_error = e.what();
        return static_cast<pil_status>(static_cast<int>(e.code()));
    } catch (const NullArgument&) {
        last_error = "required argument is NULL";
        return PIL_ERR_NULL_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return PIL_ERR_OUT_OF_MEMORY;
    } catch (const std::exception& e) {
        last_error = e.what();
        return PIL_ERR_INTERNAL;
    }
}

pil::SolverKind to_solver(pil_solver s) {
    if (s < PIL_SOLVER_SVD || s > PIL_SOLVER_SCHUR)
        throw pil::Error(pil::Errc::invalid_argument, "unknown solver " + std::to_string(static_cast<int>(s)));
    return pil::all_solvers[static_cast<std::size_t>(s)];
}

pil_solver from_solver(pil::SolverKind s) {
    for (std::size_t i = 0; i < pil::all_solvers.size(); ++i)
        if (pil::all_solvers[i] == s) return static_cast<pil_solver>(i);
    return PIL_SOLVER_SVD;
}

pil::ActivationKind to_activation(pil_activation a) {
    switch (a) {
    case PIL_ACTIVATION_SIGMOID: return pil::ActivationKind::logistic_sigmoid;
    case PIL_ACTIVATION_TANH: return pil::ActivationKind::hyperbolic_tangent;
    case PIL_ACTIVATION_IDENTITY: return pil::ActivationKind::identity;
    }
    throw pil::Error(pil::Errc::invalid_argument, "unknown activation " + std::to_string(static_cast<int>(a)));
}

void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw pil::Error(pil::Errc::length_mismatch, std::string(what) + ": buffer length " + std::to_string(got) +
                                                         ", expected " + std::to_string(want));
}

pil_metrics to_c(const pil::MetricReport& r) {
    return {r.sensitivity, r.precision, r.f_measure,        r.specificity,
            r.mcc,         r.accuracy,  r.train_duration_s, r.test_duration_s};
}

const pil::Fold& fold_at(const pil_fold_plan* plan, std::size_t fold) {
    const auto& p = require(plan);
    if (fold >= p.value.folds.size())
        throw pil::Error(pil::Errc::invalid_argument, "fold index " + std::to_string(fold) + " out of range");
    return p.value.folds[fold];
}

}  // namespace

extern "C" {

const char* pil_status_name(pil_status status) {
    switch (status) {
    case PIL_OK: return "Ok";
    case PIL_ERR_NULL_ARGUMENT: return "NullArgument";
    case PIL_ERR_OUT_OF_MEMORY: return "OutOfMemory";
    case PIL_ERR_INTERNAL: return "Internal";
    default:
        if (status >= PIL_ERR_SINGULAR_MATRIX && status <= PIL_ERR_IO)
            return pil::errc_name(static_cast<pil::Errc>(status));
        return "Unknown";
    }
}

const char* pil_last_error(void) { return last_error.c_str(); }

const char* pil_solver_name(pil_solver solver) {
    if (solver < PIL_SOLVER_SVD || solver > PIL_SOLVER_SCHUR) return "unknown";
    return pil::solver_name(pil::all_solvers[static_cast<std::size_t>(solver)]).data();
}

pil_status pil_solver_from_name(const char* name, pil_solver* out) {
    return guarded([&] {
        require_ptr(name);
        require_ptr(out);
        auto kind = pil::parse_solver(name);
        if (!kind) throw pil::Error(pil::Errc::invalid_argument, std::string("unknown solver '") + name + "'");
        *out = from_solver(*kind);
    });
}

pil_status pil_matrix_create(size_t rows, size_t cols, const double* data, pil_matrix** out) {
    return guarded([&] {
        require_ptr(out);
        *out = nullptr;
        if (data == nullptr) {
            *out = new pil_matrix{pil::DenseMatrix(rows, cols)};
        } else {
            if (rows == 0 || cols == 0)
                throw pil::Error(pil::Errc::invalid_argument, "matrix dimensions must be at least 1x1");
            *out = new pil_matrix{pil::DenseMatrix(rows, cols, std::vector<double>(data, data + rows * cols))};
        }
    });
}

void pil_matrix_destroy(pil_matrix* m) { delete m; }
size_t pil_matrix_rows(const pil_matrix* m) { return m ? m->value.rows() : 0; }
size_t pil_matrix_cols(const pil_matrix* m) { return m ? m->value.cols() : 0; }
const double* pil_matrix_data(const pil_matrix* m) { return m ? m->value.data().data() : nullptr; }

pil_status pil_solve_output_weights(const pil_matrix* h, const double* targets, size_t n, pil_solver solver,
                                    double ridge_lambda, double* w, size_t m) {
    return guarded([&] {
        const auto& hm = require(h).value;
        require_ptr(targets);
        require_ptr(w);
        check_length(n, hm.rows(), "targets");
        check_length(m, hm.cols(), "weights");
        const auto out = pil::solve_output_weights(hm, {targets, n}, to_solver(solver), ridge_lambda);
        std::copy(out.begin(), out.end(), w);
    });
}

pil_status pil_hat_diagnostic(const pil_matrix* h, double ridge_lambda, pil_solver route, double* out, size_t n) {
    return guarded([&] {
        const auto& hm = require(h).value;
        require_ptr(out);
        check_length(n, hm.rows(), "hat output");
        const auto v = pil::hat_diagnostic(hm, ridge_lambda, to_solver(route));
        std::copy(v.begin(), v.end(), out);
    });
}

pil_status pil_flop_estimate(pil_solver solver, int64_t m, int64_t n, int64_t* out) {
    return guarded([&] {
        require_ptr(out);
        *out = pil::flop_estimate(to_solver(solver), m, n);
    });
}

void pil_elm_config_default(pil_elm_config* cfg) {
    if (!cfg) return;
    const pil::ElmConfig d;
    *cfg = {d.hidden_neurons, PIL_ACTIVATION_SIGMOID, from_solver(d.solver), d.rng_seed, d.ridge_lambda};
}

pil_status pil_train(const pil_matrix* features, const double* targets, size_t n, const pil_elm_config* cfg,
                     pil_model** out, double* train_seconds) {
    return guarded([&] {
        const auto& x = require(features).value;
        const auto& c = require(cfg);
        require_ptr(targets);
        require_ptr(out);
        *out = nullptr;
        check_length(n, x.rows(), "targets");
        pil::ElmConfig config{c.hidden_neurons, to_activation(c.activation), to_solver(c.solver), c.rng_seed,
                              c.ridge_lambda};
        auto result = pil::train(x, {targets, n}, config);
        *out = new pil_model{std::move(result.model)};
        if (train_seconds) *train_seconds = result.train_seconds;
    });
}

void pil_model_destroy(pil_model* model) { delete model; }
size_t pil_model_hidden_neurons(const pil_model* model) { return model ? model->value.hidden_neurons() : 0; }
size_t pil_model_features(const pil_model* model) { return model ? model->value.n_features() : 0; }

pil_status pil_model_output_weights(const pil_model* model, double* out, size_t len) {
    return guarded([&] {
        const auto& w = require(model).value.output_weights;
        require_ptr(out);
        check_length(len, w.size(), "output weights");
        std::copy(w.begin(), w.end(), out);
    });
}

pil_status pil_predict(const pil_model* model, const pil_matrix* features, double* scores, int* labels, size_t n) {
    return guarded([&] {
        const auto& x = require(features).value;
        check_length(n, x.rows(), "prediction");
        const auto p = pil::predict(require(model).value, x);
        if (scores) std::copy(p.scores.begin(), p.scores.end(), scores);
        if (labels) std::copy(p.labels.begin(), p.labels.end(), labels);
    });
}

pil_status pil_confusion_counts(const int* pred, const int* truth, size_t n, pil_confusion* out) {
    return guarded([&] {
        require_ptr(pred);
        require_ptr(truth);
        require_ptr(out);
        const auto cm = pil::confusion({pred, n}, {truth, n});
        *out = {cm.tp, cm.fp, cm.fn, cm.tn};
    });
}

pil_status pil_metric_report(const pil_confusion* cm, pil_metrics* out) {
    return guarded([&] {
        const auto& c = require(cm);
        require_ptr(out);
        *out = to_c(pil::metric_report({c.tp, c.fp, c.fn, c.tn}));
    });
}

pil_status pil_session_kfold(size_t n_sessions, size_t runs, size_t n_images, size_t n_samples,
                             pil_fold_plan** out) {
    return guarded([&] {
        require_ptr(out);
        *out = nullptr;
        *out = new pil_fold_plan{pil::session_kfold(n_sessions, runs, n_images, n_samples)};
    });
}

void pil_fold_plan_destroy(pil_fold_plan* plan) { delete plan; }
size_t pil_fold_plan_count(const pil_fold_plan* plan) { return plan ? plan->value.folds.size() : 0; }

size_t pil_fold_plan_test_size(const pil_fold_plan* plan, size_t fold) {
    return plan && fold < plan->value.folds.size() ? plan->value.folds[fold].test.size() : 0;
}

size_t pil_fold_plan_train_size(const pil_fold_plan* plan, size_t fold) {
    return plan && fold < plan->value.folds.size() ? plan->value.folds[fold].train.size() : 0;
}

pil_status pil_fold_plan_test_indices(const pil_fold_plan* plan, size_t fold, size_t* out, size_t len) {
    return guarded([&] {
        const auto& f = fold_at(plan, fold);
        require_ptr(out);
        check_length(len, f.test.size(), "test indices");
        std::copy(f.test.begin(), f.test.end(), out);
    });
}

pil_status pil_fold_plan_train_indices(const pil_fold_plan* plan, size_t fold, size_t* out, size_t len) {
    return guarded([&] {
        const auto& f = fold_at(plan, fold);
        require_ptr(out);
        check_length(len, f.train.size(), "train indices");
        std::copy(f.train.begin(), f.train.end(), out);
    });
}

void pil_synth_options_default(pil_synth_options* opts) {
    if (!opts) return;
    const pil::SynthOptions d;
    *opts = {d.seed, d.n_sessions, d.runs, d.n_images, d.snr, d.channels, d.samples};
}

pil_status pil_dataset_synthesize(const pil_synth_options* opts, pil_dataset** out) {
    return guarded([&] {
        const auto& o = require(opts);
        require_ptr(out);
        *out = nullptr;
        pil::SynthOptions so{o.seed, o.n_sessions, o.runs, o.n_images, o.snr, o.channels, o.samples};
        auto ds = pil::make_dataset(pil::synth_epochs(so));
        pil_matrix features{ds.features};
        *out = new pil_dataset{std::move(ds), std::move(features)};
    });
}

pil_status pil_dataset_create(const pil_matrix* features, const int* labels, const uint32_t* layout, size_t n,
                              pil_dataset** out) {
    return guarded([&] {
        const auto& x = require(features).value;
        require_ptr(labels);
        require_ptr(layout);
        require_ptr(out);
        *out = nullptr;
        check_length(n, x.rows(), "dataset rows");
        pil::Dataset ds{x, std::vector<int>(labels, labels + n), {}};
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] != 0 && labels[i] != 1)
                throw pil::Error(pil::Errc::invalid_label, "label on row " + std::to_string(i) + " is not 0 or 1");
            ds.layout.push_back({layout[3 * i], layout[3 * i + 1], layout[3 * i + 2]});
        }
        pil_matrix copy{ds.features};
        *out = new pil_dataset{std::move(ds), std::move(copy)};
    });
}

pil_status pil_dataset_load_csv(const char* path, pil_dataset** out) {
    return guarded([&] {
        require_ptr(path);
        require_ptr(out);
        *out = nullptr;
        auto ds = pil::load_csv(path);
        pil_matrix features{ds.features};
        *out = new pil_dataset{std::move(ds), std::move(features)};
    });
}

pil_status pil_dataset_write_csv(const pil_dataset* ds, const char* path) {
    return guarded([&] {
        const auto& d = require(ds);
        require_ptr(path);
        pil::write_csv(d.value, path);
    });
}

void pil_dataset_destroy(pil_dataset* ds) { delete ds; }
size_t pil_dataset_trials(const pil_dataset* ds) { return ds ? ds->value.features.rows() : 0; }
size_t pil_dataset_features(const pil_dataset* ds) { return ds ? ds->value.features.cols() : 0; }
const pil_matrix* pil_dataset_feature_matrix(const pil_dataset* ds) { return ds ? &ds->features : nullptr; }

pil_status pil_dataset_labels(const pil_dataset* ds, int* out, size_t len) {
    return guarded([&] {
        const auto& labels = require(ds).value.labels;
        require_ptr(out);
        check_length(len, labels.size(), "labels");
        std::copy(labels.begin(), labels.end(), out);
    });
}

void pil_bench_options_default(pil_bench_options* opts) {
    if (!opts) return;
    const pil::BenchOptions d;
    *opts = {nullptr, 0, d.hidden_neurons, d.seed, d.ridge_lambda, d.repeats, PIL_ACTIVATION_SIGMOID, 0, 0.0};
}

pil_status pil_evaluate(const pil_dataset* ds, const pil_bench_options* opts, pil_bench_report** out) {
    return guarded([&] {
        const auto& d = require(ds);
        const auto& o = require(opts);
        require_ptr(out);
        *out = nullptr;
        pil::BenchOptions bo;
        if (o.n_solvers > 0) {
            require_ptr(o.solvers);
            bo.solvers.clear();
            for (std::size_t i = 0; i < o.n_solvers; ++i) bo.solvers.push_back(to_solver(o.solvers[i]));
        }
        bo.hidden_neurons = o.hidden_neurons;
        bo.seed = o.seed;
        bo.ridge_lambda = o.ridge_lambda;
        bo.repeats = o.repeats;
        bo.activation = to_activation(o.activation);
        if (o.has_snr) bo.snr = o.snr;

        auto report = std::make_unique<pil_bench_report>();
        report->value = pil::evaluate(d.value, bo);
        report->json = pil::report_json(report->value);
        for (const auto& row : report->value.rows)
            report->errors.push_back(row.error ? std::string(pil::errc_name(*row.error)) : std::string());
        *out = report.release();
    });
}

void pil_bench_report_destroy(pil_bench_report* report) { delete report; }
size_t pil_bench_report_rows(const pil_bench_report* report) { return report ? report->value.rows.size() : 0; }

pil_status pil_bench_report_row(const pil_bench_report* report, size_t i, pil_bench_row* out) {
    return guarded([&] {
        const auto& r = require(report);
        require_ptr(out);
        if (i >= r.value.rows.size())
            throw pil::Error(pil::Errc::invalid_argument, "row index " + std::to_string(i) + " out of range");
        const auto& row = r.value.rows[i];
        *out = {from_solver(row.solver),
                row.error ? static_cast<pil_status>(static_cast<int>(*row.error)) : PIL_OK,
                to_c(row.metrics),
                row.train_s,
                row.test_s,
                row.flops};
    });
}

const char* pil_bench_report_row_error(const pil_bench_report* report, size_t i) {
    if (!report || i >= report->errors.size()) return "";
    return report->errors[i].c_str();
}

const char* pil_bench_report_json(const pil_bench_report* report) { return report ? report->json.c_str() : ""; }

uint64_t pil_bench_report_fold_hash(const pil_bench_report* report, size_t row, size_t fold) {
    if (!report || row >= report->value.rows.size()) return 0;
    const auto& hashes = report->value.rows[row].fold_h_hashes;
    return fold < hashes.size() ? hashes[fold] : 0;
}

}  // extern "C"
