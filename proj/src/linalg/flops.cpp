#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

namespace {

// Floor division that rounds toward negative infinity.
std::int64_t floor_div(std::int64_t num, std::int64_t den) {
    std::int64_t q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

}  // namespace

std::int64_t flop_estimate(SolverKind method, std::int64_t m, std::int64_t n) {
    if (m <= 0 || n <= 0) throw Error(Errc::invalid_argument, "flop_estimate: m and n must be positive");
    switch (method) {
    case SolverKind::hh_qr:  // 2n^2(m - n/3) = (6 n^2 m - 2 n^3) / 3
        return floor_div(6 * n * n * m - 2 * n * n * n, 3);
    case SolverKind::mgs_qr: return 2 * m * n * n;
    case SolverKind::svd: return 2 * m * n + 11 * n * n * n;
    case SolverKind::lu: return floor_div(2 * n * n * n, 3);
    case SolverKind::hessenberg: return floor_div(10 * n * n * n, 3);
    case SolverKind::schur: return 2 * m * n * n;
    }
    return 0;
}

}  // namespace pil
