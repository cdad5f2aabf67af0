#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "pil/matrix.hpp"

namespace pil {

struct TrialKey {
    std::uint32_t session = 0;
    std::uint32_t run = 0;
    std::uint32_t image = 0;

    auto operator<=>(const TrialKey&) const = default;
};

// trials x channels x samples voltages (microvolts), trial-major.
struct EpochSet {
    std::size_t trials = 0;
    std::size_t channels = 14;
    std::size_t samples = 64;
    std::vector<double> data;
    std::vector<int> labels;
    std::vector<TrialKey> layout;

    double at(std::size_t trial, std::size_t channel, std::size_t sample) const {
        return data[(trial * channels + channel) * samples + sample];
    }
};

struct Dataset {
    DenseMatrix features;
    std::vector<int> labels;
    std::vector<TrialKey> layout;
};

struct SynthOptions {
    std::uint64_t seed = 0;
    std::size_t n_sessions = 12;
    std::size_t runs = 6;
    std::size_t n_images = 12;
    double snr = 3.0;
    std::size_t channels = 14;
    std::size_t samples = 64;
};

inline constexpr double sampling_rate_hz = 128.0;
inline constexpr double p3_center_ms = 310.0;
inline constexpr double p3_width_ms = 25.0;

// Image that carries the target label in a given session.
std::uint32_t target_image(std::uint32_t session, std::size_t n_images) noexcept;

// Gaussian noise epochs; target trials get a positive bump of height snr
// centred at p3_center_ms.
EpochSet synth_epochs(const SynthOptions& opts);

// Per trial, the mean over channels of the segment (trials x samples).
DenseMatrix grand_average(const EpochSet& epochs);

Dataset make_dataset(const EpochSet& epochs);

// CSV columns: session,run,image,label,f0,...,f{k-1}
Dataset load_csv(const std::filesystem::path& path);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// Checks that rows follow (session, run, image) ascending over a full grid and
// returns the grid extents.
struct LayoutShape {
    std::size_t n_sessions = 0;
    std::size_t runs = 0;
    std::size_t n_images = 0;
};
LayoutShape validate_layout(const std::vector<TrialKey>& layout);

}  // namespace pil
