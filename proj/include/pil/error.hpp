#pragma once

#include <stdexcept>
#include <string>

namespace pil {

// Error categories shared by every module. The C API maps these one-to-one
// onto pil_status codes.
enum class Errc {
    singular_matrix = 1,
    rank_deficient,
    not_symmetric,
    no_convergence,
    dimension_mismatch,
    invalid_argument,
    length_mismatch,
    invalid_label,
    layout_mismatch,
    shape_mismatch,
    parse_error,
    schema_error,
    io_error,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace pil
