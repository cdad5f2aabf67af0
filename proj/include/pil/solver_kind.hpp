#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace pil {

// Route used to obtain the ELM output weights.
enum class SolverKind { svd, lu, mgs_qr, hh_qr, hessenberg, schur };

inline constexpr std::array<SolverKind, 6> all_solvers{
    SolverKind::svd, SolverKind::lu,         SolverKind::mgs_qr,
    SolverKind::hh_qr, SolverKind::hessenberg, SolverKind::schur};

// Canonical lowercase names: svd, lu, mgs-qr, hh-qr, hessenberg, schur.
std::string_view solver_name(SolverKind kind) noexcept;
std::optional<SolverKind> parse_solver(std::string_view name) noexcept;

}  // namespace pil
