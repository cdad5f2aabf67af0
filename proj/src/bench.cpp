#include "pil/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <cstdio>

#include <json.hpp>

#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

namespace {

using Clock = std::chrono::steady_clock;

struct FoldData {
    DenseMatrix x_train;
    DenseMatrix x_test;
    Vector y_train;
    std::vector<int> y_test;
};

DenseMatrix select_rows(const DenseMatrix& m, const std::vector<std::size_t>& idx) {
    DenseMatrix out(idx.size(), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto src = m.row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

std::uint64_t fnv1a(const DenseMatrix& m) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    const std::uint64_t shape[2] = {m.rows(), m.cols()};
    mix(shape, sizeof shape);
    mix(m.data().data(), m.data().size() * sizeof(double));
    return h;
}

BenchReport evaluate(const Dataset& dataset, const BenchOptions& opts) {
    if (opts.solvers.empty()) throw Error(Errc::invalid_argument, "evaluate: no solvers requested");
    if (opts.hidden_neurons == 0) throw Error(Errc::invalid_argument, "evaluate: hidden neurons must be >= 1");
    if (opts.repeats == 0) throw Error(Errc::invalid_argument, "evaluate: repeats must be >= 1");
    if (!(opts.ridge_lambda >= 0.0)) throw Error(Errc::invalid_argument, "evaluate: lambda must be >= 0");
    if (dataset.labels.size() != dataset.features.rows())
        throw Error(Errc::schema_error, "evaluate: label count differs from feature rows");

    const LayoutShape shape = validate_layout(dataset.layout);
    const FoldPlan plan = session_kfold(shape.n_sessions, shape.runs, shape.n_images, dataset.features.rows());

    ElmConfig cfg;
    cfg.hidden_neurons = opts.hidden_neurons;
    cfg.activation = opts.activation;
    cfg.rng_seed = opts.seed;
    cfg.ridge_lambda = opts.ridge_lambda;
    const RandomLayer layer = init_random_layer(cfg, dataset.features.cols());

    std::vector<FoldData> folds;
    folds.reserve(plan.folds.size());
    for (const auto& f : plan.folds) {
        const DenseMatrix raw_train = select_rows(dataset.features, f.train);
        const Normalizer nrm = fit_normalizer(raw_train);
        FoldData fd{apply_normalizer(nrm, raw_train),
                    apply_normalizer(nrm, select_rows(dataset.features, f.test)), {}, {}};
        for (auto i : f.train) fd.y_train.push_back(dataset.labels[i]);
        for (auto i : f.test) fd.y_test.push_back(dataset.labels[i]);
        folds.push_back(std::move(fd));
    }

    BenchReport report;
    report.options = opts;
    report.samples = dataset.features.rows();
    report.features = dataset.features.cols();
    report.folds = folds.size();

    for (const SolverKind solver : opts.solvers) {
        SolverResult row;
        row.solver = solver;
        row.flops = flop_estimate(solver, static_cast<std::int64_t>(opts.hidden_neurons),
                                  static_cast<std::int64_t>(folds.front().x_train.rows()));
        std::vector<double> fold_train;
        std::vector<double> fold_test;
        std::vector<MetricReport> fold_metrics;
        try {
            for (const auto& fd : folds) {
                std::vector<double> train_times;
                std::vector<double> test_times;
                Vector w;
                std::vector<int> labels;
                for (std::size_t rep = 0; rep <= opts.repeats; ++rep) {
                    auto t0 = Clock::now();
                    const DenseMatrix h = hidden_output(fd.x_train, layer.input_weights, layer.biases, opts.activation);
                    w = solve_output_weights(h, fd.y_train, solver, opts.ridge_lambda);
                    const double train_s = seconds_since(t0);

                    t0 = Clock::now();
                    const DenseMatrix ht = hidden_output(fd.x_test, layer.input_weights, layer.biases, opts.activation);
                    const Vector scores = multiply(ht, w);
                    labels.assign(scores.size(), 0);
                    for (std::size_t i = 0; i < scores.size(); ++i)
                        labels[i] = scores[i] >= decision_threshold ? 1 : 0;
                    const double test_s = seconds_since(t0);

                    if (rep == 0) {
                        row.fold_h_hashes.push_back(fnv1a(h));  // warmup run is untimed
                        continue;
                    }
                    train_times.push_back(train_s);
                    test_times.push_back(test_s);
                }
                fold_train.push_back(median(train_times));
                fold_test.push_back(median(test_times));
                auto m = metric_report(confusion(labels, fd.y_test));
                m.train_duration_s = fold_train.back();
                m.test_duration_s = fold_test.back();
                fold_metrics.push_back(m);
            }
        } catch (const Error& e) {
            row.error = e.code();
            row.error_message = e.what();
            report.rows.push_back(std::move(row));
            continue;
        }

        const double k = static_cast<double>(fold_metrics.size());
        for (const auto& m : fold_metrics) {
            row.metrics.sensitivity += m.sensitivity / k;
            row.metrics.precision += m.precision / k;
            row.metrics.f_measure += m.f_measure / k;
            row.metrics.specificity += m.specificity / k;
            row.metrics.mcc += m.mcc / k;
            row.metrics.accuracy += m.accuracy / k;
        }
        row.train_s = median(fold_train);
        row.test_s = median(fold_test);
        row.metrics.train_duration_s = row.train_s;
        row.metrics.test_duration_s = row.test_s;
        row.per_fold = std::move(fold_metrics);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string report_json(const BenchReport& report) {
    using nlohmann::json;
    const auto& o = report.options;
    json config = {
        {"seed", o.seed},
        {"hidden", o.hidden_neurons},
        {"lambda", o.ridge_lambda},
        {"snr", o.snr ? json(*o.snr) : json(nullptr)},
        {"repeats", o.repeats},
        {"activation", std::string(activation_name(o.activation))},
        {"samples", report.samples},
        {"features", report.features},
        {"folds", report.folds},
    };
    json rows = json::array();
    for (const auto& r : report.rows) {
        const bool ok = !r.error.has_value();
        auto metric = [ok](double v) { return ok ? json(v) : json(nullptr); };
        json hashes = json::array();
        for (auto h : r.fold_h_hashes) hashes.push_back(hex64(h));
        rows.push_back({
            {"name", std::string(solver_name(r.solver))},
            {"sensitivity", metric(r.metrics.sensitivity)},
            {"precision", metric(r.metrics.precision)},
            {"f_measure", metric(r.metrics.f_measure)},
            {"specificity", metric(r.metrics.specificity)},
            {"mcc", metric(r.metrics.mcc)},
            {"accuracy", metric(r.metrics.accuracy)},
            {"train_s", metric(r.train_s)},
            {"test_s", metric(r.test_s)},
            {"flops", r.flops},
            {"error", ok ? json(nullptr) : json(std::string(errc_name(*r.error)) + ": " + r.error_message)},
            {"fold_h_hashes", hashes},
        });
    }
    return json{{"config", config}, {"solvers", rows}}.dump(2);
}

}  // namespace pil
