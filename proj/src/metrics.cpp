#include "pil/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pil/error.hpp"

namespace pil {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionCounts confusion(std::span<const int> pred_labels, std::span<const int> true_labels) {
    if (pred_labels.size() != true_labels.size())
        throw Error(Errc::length_mismatch, "confusion: " + std::to_string(pred_labels.size()) +
                                               " predictions for " + std::to_string(true_labels.size()) +
                                               " labels");
    ConfusionCounts cm;
    for (std::size_t i = 0; i < pred_labels.size(); ++i) {
        const int p = pred_labels[i];
        const int t = true_labels[i];
        if ((p != 0 && p != 1) || (t != 0 && t != 1))
            throw Error(Errc::invalid_label, "confusion: label at index " + std::to_string(i) +
                                                 " is not 0 or 1");
        if (p == 1 && t == 1) ++cm.tp;
        else if (p == 1) ++cm.fp;
        else if (t == 1) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

MetricReport metric_report(const ConfusionCounts& cm) {
    const double tp = static_cast<double>(cm.tp);
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);
    const double tn = static_cast<double>(cm.tn);

    MetricReport r;
    r.sensitivity = ratio(tp, tp + fn);
    r.precision = ratio(tp, tp + fp);
    r.specificity = ratio(tn, tn + fp);
    r.accuracy = ratio(tp + tn, tp + fp + fn + tn);
    r.f_measure = ratio(2.0 * r.precision * r.sensitivity, r.precision + r.sensitivity);
    // One square root of the full product stays exact while the product fits in 53 bits.
    const double den = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
    r.mcc = std::clamp(ratio(tp * tn - fp * fn, den), -1.0, 1.0);
    return r;
}

FoldPlan session_kfold(std::size_t n_sessions, std::size_t runs_per_session, std::size_t n_images,
                       std::size_t n_samples) {
    if (n_sessions < 2 || runs_per_session == 0 || n_images == 0)
        throw Error(Errc::invalid_argument, "session_kfold: need at least 2 sessions and non-empty runs/images");
    const std::size_t per_session = runs_per_session * n_images;
    const std::size_t total = n_sessions * per_session;
    if (n_samples != 0 && n_samples != total)
        throw Error(Errc::layout_mismatch, "session_kfold: " + std::to_string(n_samples) +
                                               " samples but layout implies " + std::to_string(total));
    FoldPlan plan;
    plan.folds.reserve(n_sessions);
    for (std::size_t k = 0; k < n_sessions; ++k) {
        Fold fold;
        fold.test.reserve(per_session);
        fold.train.reserve(total - per_session);
        for (std::size_t i = 0; i < total; ++i) {
            if (i / per_session == k) fold.test.push_back(i);
            else fold.train.push_back(i);
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

}  // namespace pil
