#include "pil/error.hpp"

#include "pil/solver_kind.hpp"

namespace pil {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::invalid_label: return "InvalidLabel";
    case Errc::layout_mismatch: return "LayoutMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::parse_error: return "ParseError";
    case Errc::schema_error: return "SchemaError";
    case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

std::string_view solver_name(SolverKind kind) noexcept {
    switch (kind) {
    case SolverKind::svd: return "svd";
    case SolverKind::lu: return "lu";
    case SolverKind::mgs_qr: return "mgs-qr";
    case SolverKind::hh_qr: return "hh-qr";
    case SolverKind::hessenberg: return "hessenberg";
    case SolverKind::schur: return "schur";
    }
    return "unknown";
}

std::optional<SolverKind> parse_solver(std::string_view name) noexcept {
    for (auto kind : all_solvers) {
        if (solver_name(kind) == name) return kind;
    }
    return std::nullopt;
}

}  // namespace pil
