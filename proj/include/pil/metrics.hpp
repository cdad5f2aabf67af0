#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pil {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

struct MetricReport {
    double sensitivity = 0.0;
    double precision = 0.0;
    double f_measure = 0.0;
    double specificity = 0.0;
    double mcc = 0.0;
    double accuracy = 0.0;
    double train_duration_s = 0.0;
    double test_duration_s = 0.0;
};

// Positive class is label 1 (target).
ConfusionCounts confusion(std::span<const int> pred_labels, std::span<const int> true_labels);

// Any 0/0 ratio evaluates to 0.
MetricReport metric_report(const ConfusionCounts& cm);

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct FoldPlan {
    std::vector<Fold> folds;
};

// One fold per session over samples ordered by (session, run, image). When
// n_samples is given it must equal the layout product.
FoldPlan session_kfold(std::size_t n_sessions = 12, std::size_t runs_per_session = 6,
                       std::size_t n_images = 12, std::size_t n_samples = 0);

}  // namespace pil
