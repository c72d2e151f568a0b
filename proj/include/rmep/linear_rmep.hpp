#pragma once

#include "rmep/pencil.hpp"
#include "rmep/types.hpp"

#include <cstdint>
#include <vector>

namespace rmep {

/// Generic number of eigenvalues of a linear (n+k-1) x n family in k
/// parameters: binom(n+k-1, k).
Index linear_eigenvalue_count(Index n, int k);

/// Solves a linear rectangular family by projecting it to k square
/// multiparameter problems, extracting the joint spectrum of their operator
/// determinants and keeping the candidates that drop rank of the original.
///
/// projections, when given, must hold k matrices of size cols() x rows();
/// otherwise random complex projections are drawn from seed, with up to
/// three redraws if the projected problem degenerates.  rejected, when
/// given, collects the filtered-out candidates.
EigSet solve_linear_projected(const RectPencil& pencil, const ToleranceConfig& cfg = {},
                              std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                              const std::vector<Matrix>* projections = nullptr,
                              EigSet* rejected = nullptr);

/// Solves a linear rectangular family through symmetry-compressed operator
/// determinants of size binom(n+k-1, k); no projections and no filtering,
/// every returned tuple is an eigenvalue of the regular part.
EigSet solve_linear_compressed(const RectPencil& pencil, const ToleranceConfig& cfg = {},
                               std::uint64_t seed = 0x9e3779b97f4a7c15ull);

}  // namespace rmep
