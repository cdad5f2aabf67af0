// Command-line front end over the C API: synthetic data generation,
// session-structured cross-validation of the solvers, and the flop model.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pil/pil.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_runtime = 2;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(pil_status st, const std::string& context) {
    if (st == PIL_OK) return;
    const std::string msg = context + ": " + pil_status_name(st) + ": " + pil_last_error();
    if (st == PIL_ERR_INVALID_ARGUMENT) throw ValidationError(msg);
    throw RuntimeFailure(msg);
}

std::string with_commas(long long v) {
    std::string digits = std::to_string(v < 0 ? -v : v);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
        out += digits[i];
    }
    return v < 0 ? "-" + out : out;
}

std::vector<pil_solver> parse_solver_list(const std::string& list) {
    std::vector<pil_solver> out;
    if (list == "all") {
        for (int i = 0; i < PIL_SOLVER_COUNT; ++i) out.push_back(static_cast<pil_solver>(i));
        return out;
    }
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        pil_solver s;
        if (pil_solver_from_name(name.c_str(), &s) != PIL_OK)
            throw ValidationError("unknown solver '" + name + "' (expected svd, lu, mgs-qr, hh-qr, hessenberg, schur or all)");
        out.push_back(s);
    }
    if (out.empty()) throw ValidationError("--solvers must name at least one solver");
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) throw RuntimeFailure("cannot write " + path);
}

struct GenerateArgs {
    uint64_t seed = 0;
    std::string out;
    double snr = 3.0;
    size_t sessions = 12;
    size_t runs = 6;
    size_t images = 12;
};

int run_generate(const GenerateArgs& a) {
    if (!(a.snr > 0.0)) throw ValidationError("snr must be positive");
    pil_synth_options opts;
    pil_synth_options_default(&opts);
    opts.seed = a.seed;
    opts.snr = a.snr;
    opts.n_sessions = a.sessions;
    opts.runs = a.runs;
    opts.n_images = a.images;

    pil_dataset* ds = nullptr;
    check(pil_dataset_synthesize(&opts, &ds), "generate");
    std::unique_ptr<pil_dataset, decltype(&pil_dataset_destroy)> guard(ds, pil_dataset_destroy);
    check(pil_dataset_write_csv(ds, a.out.c_str()), "generate");
    std::cout << "wrote " << pil_dataset_trials(ds) << " trials x " << pil_dataset_features(ds) << " features to "
              << a.out << "\n";
    return exit_ok;
}

struct EvaluateArgs {
    std::string dataset;
    std::string solvers = "all";
    size_t hidden = 100;
    uint64_t seed = 7;
    double lambda = 0.0;
    size_t repeats = 5;
    std::string json;
    std::optional<double> snr;
};

int run_evaluate(const EvaluateArgs& a) {
    const auto solvers = parse_solver_list(a.solvers);
    if (a.hidden == 0) throw ValidationError("--hidden must be at least 1");
    if (a.repeats == 0) throw ValidationError("--repeats must be at least 1");
    if (!(a.lambda >= 0.0)) throw ValidationError("--lambda must be non-negative");

    pil_dataset* ds = nullptr;
    check(pil_dataset_load_csv(a.dataset.c_str(), &ds), "evaluate");
    std::unique_ptr<pil_dataset, decltype(&pil_dataset_destroy)> ds_guard(ds, pil_dataset_destroy);

    pil_bench_options opts;
    pil_bench_options_default(&opts);
    opts.solvers = solvers.data();
    opts.n_solvers = solvers.size();
    opts.hidden_neurons = a.hidden;
    opts.seed = a.seed;
    opts.ridge_lambda = a.lambda;
    opts.repeats = a.repeats;
    opts.has_snr = a.snr.has_value();
    opts.snr = a.snr.value_or(0.0);

    pil_bench_report* report = nullptr;
    const pil_status st = pil_evaluate(ds, &opts, &report);
    if (st == PIL_ERR_INVALID_ARGUMENT) check(st, "evaluate");
    if (st != PIL_OK) throw RuntimeFailure(std::string("evaluate: ") + pil_status_name(st) + ": " + pil_last_error());
    std::unique_ptr<pil_bench_report, decltype(&pil_bench_report_destroy)> guard(report, pil_bench_report_destroy);

    std::printf("%-11s %8s %8s %8s %8s %8s %8s %11s %11s %16s\n", "solver", "sens", "prec", "f", "spec", "mcc", "acc",
                "train_s", "test_s", "flops");
    for (size_t i = 0; i < pil_bench_report_rows(report); ++i) {
        pil_bench_row row;
        check(pil_bench_report_row(report, i, &row), "evaluate");
        if (row.error != PIL_OK) {
            std::printf("%-11s error: %s\n", pil_solver_name(row.solver), pil_bench_report_row_error(report, i));
            continue;
        }
        const auto& m = row.metrics;
        std::printf("%-11s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %11.6f %11.6f %16s\n", pil_solver_name(row.solver),
                    m.sensitivity, m.precision, m.f_measure, m.specificity, m.mcc, m.accuracy, row.train_s, row.test_s,
                    with_commas(row.flops).c_str());
    }
    if (!a.json.empty()) write_text(a.json, std::string(pil_bench_report_json(report)) + "\n");
    return exit_ok;
}

struct FlopsArgs {
    int64_t m = 0;
    int64_t n = 0;
    std::string json;
};

int run_flops(const FlopsArgs& a) {
    if (a.m <= 0 || a.n <= 0) throw ValidationError("--m and --n must be positive");
    nlohmann::json rows = nlohmann::json::array();
    int64_t values[PIL_SOLVER_COUNT];
    int argmax = 0;
    for (int i = 0; i < PIL_SOLVER_COUNT; ++i) {
        check(pil_flop_estimate(static_cast<pil_solver>(i), a.m, a.n, &values[i]), "flops");
        if (values[i] > values[argmax]) argmax = i;
    }
    bool svd_strict_max = true;
    for (int i = 0; i < PIL_SOLVER_COUNT; ++i)
        if (i != PIL_SOLVER_SVD && values[i] >= values[PIL_SOLVER_SVD]) svd_strict_max = false;

    std::printf("flop counts for m=%lld, n=%lld\n", static_cast<long long>(a.m), static_cast<long long>(a.n));
    for (int i = 0; i < PIL_SOLVER_COUNT; ++i) {
        const auto s = static_cast<pil_solver>(i);
        std::printf("  %-11s %20s%s\n", pil_solver_name(s), with_commas(values[i]).c_str(),
                    i == argmax ? "  (max)" : "");
        rows.push_back({{"name", pil_solver_name(s)}, {"flops", values[i]}});
    }
    if (svd_strict_max) std::printf("svd is the most expensive method at this size\n");
    if (!a.json.empty()) {
        nlohmann::json doc = {{"m", a.m}, {"n", a.n}, {"solvers", rows}, {"svd_is_max", svd_strict_max}};
        write_text(a.json, doc.dump(2) + "\n");
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudoinverse-learning ELM solver benchmark"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic ERP dataset as CSV");
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("--out", gen.out, "output CSV path")->required();
    generate->add_option("--snr", gen.snr, "P3 peak amplitude in noise standard deviations");
    generate->add_option("--sessions", gen.sessions, "number of sessions");
    generate->add_option("--runs", gen.runs, "runs per session");
    generate->add_option("--images", gen.images, "images per run");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "cross-validate solvers on a CSV dataset");
    evaluate->add_option("dataset", ev.dataset, "dataset CSV")->required();
    evaluate->add_option("--solvers", ev.solvers, "comma-separated solver list or 'all'");
    evaluate->add_option("--hidden", ev.hidden, "hidden neurons");
    evaluate->add_option("--seed", ev.seed, "hidden layer seed");
    evaluate->add_option("--lambda", ev.lambda, "ridge regularization");
    evaluate->add_option("--repeats", ev.repeats, "timed repetitions per fold (after one warmup)");
    evaluate->add_option("--json", ev.json, "write the JSON report here");
    evaluate->add_option("--snr", ev.snr, "snr to echo in the report config");

    FlopsArgs fl;
    auto* flops = app.add_subcommand("flops", "print the flop model of every solver");
    flops->add_option("--m", fl.m, "m")->required();
    flops->add_option("--n", fl.n, "n")->required();
    flops->add_option("--json", fl.json, "write the table as JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (generate->parsed()) return run_generate(gen);
        if (evaluate->parsed()) return run_evaluate(ev);
        return run_flops(fl);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}
