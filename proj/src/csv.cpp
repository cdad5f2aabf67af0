#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include "pil/data.hpp"
#include "pil/error.hpp"

namespace pil {

namespace {

constexpr std::string_view fixed_columns[] = {"session", "run", "image", "label"};

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string where(std::size_t line_no, std::size_t column) {
    return "line " + std::to_string(line_no) + ", column " + std::to_string(column + 1);
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no, std::size_t column) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw Error(Errc::parse_error, "cannot parse '" + std::string(text) + "' at " + where(line_no, column));
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value))
            throw Error(Errc::parse_error, "non-finite value at " + where(line_no, column));
    }
    return value;
}

void check_dataset(const Dataset& d) {
    if (d.features.cols() == 0 || d.features.rows() == 0)
        throw Error(Errc::schema_error, "dataset has no features");
    if (d.labels.size() != d.features.rows() || d.layout.size() != d.features.rows())
        throw Error(Errc::schema_error, "labels/layout length differs from feature rows");
    for (std::size_t i = 0; i < d.labels.size(); ++i)
        if (d.labels[i] != 0 && d.labels[i] != 1)
            throw Error(Errc::invalid_label, "label on row " + std::to_string(i) + " is not 0 or 1");
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line()) throw Error(Errc::schema_error, path.string() + ": missing header row");
    const auto header = split(line);
    for (std::size_t c = 0; c < std::size(fixed_columns); ++c) {
        if (c >= header.size() || header[c] != fixed_columns[c])
            throw Error(Errc::schema_error, path.string() + ": header column " + std::to_string(c + 1) +
                                                " must be '" + std::string(fixed_columns[c]) + "'");
    }
    const std::size_t n_features = header.size() - std::size(fixed_columns);
    if (n_features == 0) throw Error(Errc::schema_error, path.string() + ": no feature columns");
    for (std::size_t f = 0; f < n_features; ++f) {
        if (header[4 + f] != "f" + std::to_string(f))
            throw Error(Errc::schema_error, path.string() + ": expected feature column 'f" + std::to_string(f) +
                                                "', found '" + std::string(header[4 + f]) + "'");
    }

    std::vector<double> values;
    std::vector<int> labels;
    std::vector<TrialKey> layout;
    while (next_line()) {
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw Error(Errc::parse_error, path.string() + ": line " + std::to_string(line_no) + " has " +
                                               std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(header.size()));
        TrialKey key{parse_field<std::uint32_t>(fields[0], line_no, 0),
                     parse_field<std::uint32_t>(fields[1], line_no, 1),
                     parse_field<std::uint32_t>(fields[2], line_no, 2)};
        const int label = parse_field<int>(fields[3], line_no, 3);
        if (label != 0 && label != 1)
            throw Error(Errc::invalid_label, path.string() + ": label " + std::to_string(label) + " on line " +
                                                 std::to_string(line_no) + " is not 0 or 1");
        for (std::size_t f = 0; f < n_features; ++f)
            values.push_back(parse_field<double>(fields[4 + f], line_no, 4 + f));
        labels.push_back(label);
        layout.push_back(key);
    }
    if (labels.empty()) throw Error(Errc::schema_error, path.string() + ": no data rows");

    return {DenseMatrix(labels.size(), n_features, std::move(values)), std::move(labels), std::move(layout)};
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    check_dataset(dataset);
    std::string out = "session,run,image,label";
    for (std::size_t f = 0; f < dataset.features.cols(); ++f) out += ",f" + std::to_string(f);
    out += '\n';
    for (std::size_t i = 0; i < dataset.features.rows(); ++i) {
        const auto& k = dataset.layout[i];
        out += std::to_string(k.session) + ',' + std::to_string(k.run) + ',' + std::to_string(k.image) + ',' +
               std::to_string(dataset.labels[i]);
        for (double v : dataset.features.row(i)) {
            out += ',';
            append_double(out, v);
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
    file << out;
    if (!file.flush()) throw Error(Errc::io_error, "write to " + path.string() + " failed");
}

}  // namespace pil
