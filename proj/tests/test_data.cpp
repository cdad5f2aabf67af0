#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "pil/data.hpp"
#include "pil/error.hpp"

using namespace pil;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pil_data_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<Errc, std::string> error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return {e.code(), e.what()};
    }
    FAIL("expected pil::Error");
    return {Errc::invalid_argument, ""};
}

// Mean of target minus mean of non-target over the given sample window.
double class_gap(const EpochSet& e, std::size_t first, std::size_t last) {
    double pos = 0.0, neg = 0.0;
    std::size_t np = 0, nn = 0;
    for (std::size_t t = 0; t < e.trials; ++t)
        for (std::size_t c = 0; c < e.channels; ++c)
            for (std::size_t s = first; s < last; ++s) {
                (e.labels[t] ? pos : neg) += e.at(t, c, s);
                ++(e.labels[t] ? np : nn);
            }
    return pos / static_cast<double>(np) - neg / static_cast<double>(nn);
}

}  // namespace

TEST_CASE("synth_epochs defaults") {
    const auto e = synth_epochs(SynthOptions{.seed = 7});
    CHECK(e.trials == 864);
    CHECK(e.data.size() == 864u * 14u * 64u);
    CHECK(e.labels.size() == 864);
    CHECK(std::count(e.labels.begin(), e.labels.end(), 1) == 72);
    CHECK(std::count(e.labels.begin(), e.labels.end(), 0) == 792);
    REQUIRE(e.layout.size() == 864);
    CHECK(std::is_sorted(e.layout.begin(), e.layout.end()));
    for (std::size_t i = 0; i < 864; ++i) {
        const auto& k = e.layout[i];
        CHECK(e.labels[i] == (k.image == target_image(k.session, 12) ? 1 : 0));
    }
    CHECK(validate_layout(e.layout).n_sessions == 12);
}

TEST_CASE("synth_epochs determinism") {
    const auto a = synth_epochs(SynthOptions{.seed = 11, .n_sessions = 3});
    const auto b = synth_epochs(SynthOptions{.seed = 11, .n_sessions = 3});
    const auto c = synth_epochs(SynthOptions{.seed = 12, .n_sessions = 3});
    CHECK(a.data == b.data);
    CHECK(a.labels == b.labels);
    CHECK(a.data != c.data);
}

TEST_CASE("synth_epochs label arithmetic") {
    for (std::size_t s : {2u, 5u})
        for (std::size_t r : {1u, 3u})
            for (std::size_t m : {2u, 7u}) {
                const auto e = synth_epochs(SynthOptions{.seed = 1, .n_sessions = s, .runs = r, .n_images = m,
                                                         .channels = 2, .samples = 8});
                CHECK(e.trials == s * r * m);
                CHECK(static_cast<std::size_t>(std::count(e.labels.begin(), e.labels.end(), 1)) == s * r);
            }
}

TEST_CASE("synth_epochs signal strength") {
    SUBCASE("vanishing snr") {
        const auto e = synth_epochs(SynthOptions{.seed = 3, .snr = 1e-9});
        const double n_pos = 72.0 * 14 * 64, n_neg = 792.0 * 14 * 64;
        const double se = std::sqrt(1.0 / n_pos + 1.0 / n_neg);
        CHECK(std::abs(class_gap(e, 0, 64)) < 3.0 * se);
    }
    SUBCASE("snr 5 at the peak sample") {
        const auto e = synth_epochs(SynthOptions{.seed = 3, .snr = 5.0});
        const auto peak = static_cast<std::size_t>(std::lround(p3_center_ms * sampling_rate_hz / 1000.0));
        CHECK(class_gap(e, peak, peak + 1) >= 4.0);
        // Far from the bump the classes look alike.
        CHECK(std::abs(class_gap(e, 0, 8)) < 0.2);
    }
    SUBCASE("non-target noise has unit variance") {
        const auto e = synth_epochs(SynthOptions{.seed = 9});
        double sum = 0.0, sq = 0.0;
        std::size_t n = 0;
        for (std::size_t t = 0; t < e.trials; ++t) {
            if (e.labels[t]) continue;
            for (std::size_t i = 0; i < e.channels * e.samples; ++i) {
                const double v = e.data[t * e.channels * e.samples + i];
                sum += v;
                sq += v * v;
                ++n;
            }
        }
        const double mean = sum / static_cast<double>(n);
        CHECK(std::abs(mean) < 0.01);
        CHECK(sq / static_cast<double>(n) - mean * mean == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("snr must be positive") {
        for (double snr : {0.0, -1.0, std::nan("")}) {
            const auto [code, what] = error_of([&] { synth_epochs(SynthOptions{.snr = snr}); });
            CHECK(code == Errc::invalid_argument);
            CHECK(what.find("snr must be positive") != std::string::npos);
        }
    }
}

TEST_CASE("grand_average") {
    EpochSet e;
    e.trials = 1;
    e.channels = 1;
    e.samples = 3;
    e.data = {1, 2, 3};
    e.labels = {0};
    e.layout = {{}};
    CHECK(grand_average(e) == DenseMatrix{{1, 2, 3}});

    e.channels = 2;
    e.data = {1, -2, 3, -1, 2, -3};
    CHECK(grand_average(e) == DenseMatrix(1, 3));

    e.data.assign(6, 4.5);
    CHECK(grand_average(e) == DenseMatrix{{4.5, 4.5, 4.5}});

    SUBCASE("linearity") {
        std::mt19937_64 gen(5);
        std::normal_distribution<double> nd;
        EpochSet a;
        a.trials = 4;
        a.channels = 3;
        a.samples = 5;
        a.data.resize(60);
        a.labels.assign(4, 0);
        a.layout.resize(4);
        EpochSet b = a;
        for (auto& v : a.data) v = nd(gen);
        for (auto& v : b.data) v = nd(gen);
        EpochSet mix = a;
        for (std::size_t i = 0; i < 60; ++i) mix.data[i] = 2.0 * a.data[i] - 0.5 * b.data[i];
        const auto ga = grand_average(a), gb = grand_average(b), gm = grand_average(mix);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 5; ++j) CHECK(gm(i, j) == doctest::Approx(2.0 * ga(i, j) - 0.5 * gb(i, j)));
    }
    SUBCASE("shape mismatch") {
        e.data.pop_back();
        CHECK(error_of([&] { grand_average(e); }).first == Errc::shape_mismatch);
    }
}

TEST_CASE("pipeline shape") {
    const auto d = make_dataset(synth_epochs(SynthOptions{.seed = 7}));
    CHECK(d.features.rows() == 864);
    CHECK(d.features.cols() == 64);
    CHECK(d.labels.size() == 864);
    CHECK(d.layout.size() == 864);
}

TEST_CASE("load_csv") {
    TempDir dir;
    SUBCASE("three valid rows") {
        const auto p = dir.write("ok.csv",
                                 "session,run,image,label,f0,f1\n"
                                 "0,0,0,1,0.5,-1\n"
                                 "0,0,1,0,2e-3,4\n"
                                 "0,0,2,0,7,8.25\n");
        const auto d = load_csv(p);
        CHECK(d.features == DenseMatrix{{0.5, -1}, {2e-3, 4}, {7, 8.25}});
        CHECK(d.labels == std::vector<int>{1, 0, 0});
        CHECK(d.layout[2].image == 2);
    }
    SUBCASE("CRLF line endings") {
        const auto p = dir.write("crlf.csv", "session,run,image,label,f0\r\n0,0,0,1,3\r\n");
        CHECK(load_csv(p).features == DenseMatrix{{3}});
    }
    SUBCASE("label 2 names the row") {
        const auto p = dir.write("bad.csv", "session,run,image,label,f0\n0,0,0,0,1\n0,0,1,2,1\n");
        const auto [code, what] = error_of([&] { load_csv(p); });
        CHECK(code == Errc::invalid_label);
        CHECK(what.find("line 3") != std::string::npos);
    }
    SUBCASE("schema errors") {
        CHECK(error_of([&] { load_csv(dir.write("a.csv", "")); }).first == Errc::schema_error);
        CHECK(error_of([&] { load_csv(dir.write("b.csv", "session,run,label,f0\n0,0,0,1\n")); }).first ==
              Errc::schema_error);
        CHECK(error_of([&] { load_csv(dir.write("c.csv", "session,run,image,label\n0,0,0,1\n")); }).first ==
              Errc::schema_error);
        CHECK(error_of([&] { load_csv(dir.write("d.csv", "session,run,image,label,f1\n0,0,0,1,2\n")); }).first ==
              Errc::schema_error);
        CHECK(error_of([&] { load_csv(dir.write("e.csv", "session,run,image,label,f0\n")); }).first ==
              Errc::schema_error);
    }
    SUBCASE("parse errors carry line and column") {
        const auto [code, what] =
            error_of([&] { load_csv(dir.write("p.csv", "session,run,image,label,f0,f1\n0,0,0,1,1,abc\n")); });
        CHECK(code == Errc::parse_error);
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("column 6") != std::string::npos);
        CHECK(error_of([&] { load_csv(dir.write("q.csv", "session,run,image,label,f0\n0,0,0,1\n")); }).first ==
              Errc::parse_error);
        CHECK(error_of([&] { load_csv(dir.write("r.csv", "session,run,image,label,f0\n0,0,0,1,nan\n")); }).first ==
              Errc::parse_error);
    }
    SUBCASE("missing file") {
        CHECK(error_of([&] { load_csv(dir.path / "none.csv"); }).first == Errc::io_error);
    }
}

TEST_CASE("write_csv") {
    TempDir dir;
    SUBCASE("one trial") {
        const Dataset d{DenseMatrix{{1.5, -2}}, {1}, {{0, 0, 0}}};
        write_csv(d, dir.path / "one.csv");
        CHECK(slurp(dir.path / "one.csv") == "session,run,image,label,f0,f1\n0,0,0,1,1.5,-2\n");
    }
    SUBCASE("bit-equal round trip") {
        std::mt19937_64 gen(17);
        std::uniform_real_distribution<double> u(-1e6, 1e6);
        for (int trial = 0; trial < 5; ++trial) {
            auto d = make_dataset(synth_epochs(SynthOptions{.seed = gen(), .n_sessions = 2, .runs = 2,
                                                            .n_images = 3, .samples = 16}));
            for (auto& v : d.features.data()) v *= u(gen);
            d.features(0, 0) = 5e-324;
            d.features(1, 1) = -0.0;
            write_csv(d, dir.path / "rt.csv");
            const auto back = load_csv(dir.path / "rt.csv");
            CHECK(back.labels == d.labels);
            CHECK(back.layout == d.layout);
            REQUIRE(back.features.rows() == d.features.rows());
            const auto x = d.features.data();
            const auto y = back.features.data();
            CHECK(std::memcmp(x.data(), y.data(), x.size_bytes()) == 0);
        }
    }
    SUBCASE("malformed datasets rejected") {
        // A zero-column feature matrix cannot be built at all.
        CHECK(error_of([] { DenseMatrix(1, 0); }).first == Errc::invalid_argument);
        const Dataset short_labels{DenseMatrix{{1}, {2}}, {1}, {{0, 0, 0}, {0, 0, 1}}};
        CHECK(error_of([&] { write_csv(short_labels, dir.path / "x.csv"); }).first == Errc::schema_error);
        const Dataset bad_label{DenseMatrix{{1}}, {3}, {{0, 0, 0}}};
        CHECK(error_of([&] { write_csv(bad_label, dir.path / "x.csv"); }).first == Errc::invalid_label);
        CHECK_FALSE(fs::exists(dir.path / "x.csv"));
    }
    SUBCASE("unwritable path") {
        const Dataset d{DenseMatrix{{1}}, {0}, {{0, 0, 0}}};
        CHECK(error_of([&] { write_csv(d, dir.path / "missing" / "x.csv"); }).first == Errc::io_error);
    }
}

TEST_CASE("validate_layout") {
    const auto e = synth_epochs(SynthOptions{.seed = 1, .n_sessions = 3, .runs = 2, .n_images = 4, .samples = 4});
    const auto shape = validate_layout(e.layout);
    CHECK(shape.n_sessions == 3);
    CHECK(shape.runs == 2);
    CHECK(shape.n_images == 4);
    auto swapped = e.layout;
    std::swap(swapped[0], swapped[1]);
    CHECK(error_of([&] { validate_layout(swapped); }).first == Errc::layout_mismatch);
    auto truncated = e.layout;
    truncated.pop_back();
    CHECK(error_of([&] { validate_layout(truncated); }).first == Errc::layout_mismatch);
}
