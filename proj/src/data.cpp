#include "pil/data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pil/error.hpp"

namespace pil {

std::uint32_t target_image(std::uint32_t session, std::size_t n_images) noexcept {
    return static_cast<std::uint32_t>(session % n_images);
}

EpochSet synth_epochs(const SynthOptions& opts) {
    if (!(opts.snr > 0.0) || !std::isfinite(opts.snr))
        throw Error(Errc::invalid_argument, "snr must be positive");
    if (opts.n_sessions == 0 || opts.runs == 0 || opts.n_images == 0 || opts.channels == 0 || opts.samples == 0)
        throw Error(Errc::invalid_argument, "synth_epochs: every dimension must be at least 1");

    EpochSet set;
    set.trials = opts.n_sessions * opts.runs * opts.n_images;
    set.channels = opts.channels;
    set.samples = opts.samples;
    set.data.resize(set.trials * set.channels * set.samples);
    set.labels.reserve(set.trials);
    set.layout.reserve(set.trials);

    Vector bump(opts.samples);
    for (std::size_t s = 0; s < opts.samples; ++s) {
        const double t_ms = 1000.0 * static_cast<double>(s) / sampling_rate_hz;
        const double z = (t_ms - p3_center_ms) / p3_width_ms;
        bump[s] = opts.snr * std::exp(-0.5 * z * z);
    }

    std::mt19937_64 gen(opts.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::size_t trial = 0;
    for (std::uint32_t session = 0; session < opts.n_sessions; ++session) {
        const std::uint32_t target = target_image(session, opts.n_images);
        for (std::uint32_t run = 0; run < opts.runs; ++run) {
            for (std::uint32_t image = 0; image < opts.n_images; ++image, ++trial) {
                const int label = image == target ? 1 : 0;
                set.labels.push_back(label);
                set.layout.push_back({session, run, image});
                double* out = set.data.data() + trial * set.channels * set.samples;
                for (std::size_t c = 0; c < set.channels; ++c) {
                    for (std::size_t s = 0; s < set.samples; ++s) {
                        *out++ = noise(gen) + (label ? bump[s] : 0.0);
                    }
                }
            }
        }
    }
    return set;
}

DenseMatrix grand_average(const EpochSet& epochs) {
    if (epochs.trials == 0 || epochs.channels == 0 || epochs.samples == 0 ||
        epochs.data.size() != epochs.trials * epochs.channels * epochs.samples)
        throw Error(Errc::shape_mismatch, "grand_average: epoch tensor does not match its declared shape");
    DenseMatrix out(epochs.trials, epochs.samples);
    const double inv = 1.0 / static_cast<double>(epochs.channels);
    for (std::size_t t = 0; t < epochs.trials; ++t) {
        auto row = out.row(t);
        for (std::size_t c = 0; c < epochs.channels; ++c)
            for (std::size_t s = 0; s < epochs.samples; ++s) row[s] += epochs.at(t, c, s);
        for (auto& v : row) v *= inv;
    }
    return out;
}

Dataset make_dataset(const EpochSet& epochs) {
    if (epochs.labels.size() != epochs.trials || epochs.layout.size() != epochs.trials)
        throw Error(Errc::shape_mismatch, "make_dataset: labels/layout do not match trial count");
    return {grand_average(epochs), epochs.labels, epochs.layout};
}

LayoutShape validate_layout(const std::vector<TrialKey>& layout) {
    if (layout.empty()) throw Error(Errc::layout_mismatch, "empty layout");
    LayoutShape shape;
    for (const auto& k : layout) {
        shape.n_sessions = std::max<std::size_t>(shape.n_sessions, k.session + 1);
        shape.runs = std::max<std::size_t>(shape.runs, k.run + 1);
        shape.n_images = std::max<std::size_t>(shape.n_images, k.image + 1);
    }
    if (shape.n_sessions * shape.runs * shape.n_images != layout.size())
        throw Error(Errc::layout_mismatch,
                    std::to_string(layout.size()) + " rows do not fill a " + std::to_string(shape.n_sessions) +
                        "x" + std::to_string(shape.runs) + "x" + std::to_string(shape.n_images) +
                        " (session, run, image) grid");
    std::size_t i = 0;
    for (std::uint32_t s = 0; s < shape.n_sessions; ++s)
        for (std::uint32_t r = 0; r < shape.runs; ++r)
            for (std::uint32_t im = 0; im < shape.n_images; ++im, ++i)
                if (layout[i] != TrialKey{s, r, im})
                    throw Error(Errc::layout_mismatch,
                                "row " + std::to_string(i) + " is out of (session, run, image) order");
    return shape;
}

}  // namespace pil
