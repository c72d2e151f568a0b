#pragma once

#include "rmep/pencil.hpp"
#include "rmep/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rmep {

/// Exponent tuples in k variables of total degree at most m, degree graded,
/// earlier variables dominating within a degree:
/// 1, l1, l2, l1^2, l1 l2, l2^2, ...
std::vector<std::vector<int>> graded_monomials(int k, int m);

/// Shifted-copy matrix of a rectangular pencil: block row tau (degree up to
/// m - degree) places coefficient A_w at block column tau + w. Its nullspace
/// is spanned by monomial-structured vectors at the pencil's eigenvalues.
struct MacaulayMatrix {
  int degree = 0;                               ///< m
  std::vector<std::vector<int>> row_monomials;  ///< degree <= m - pencil degree
  std::vector<std::vector<int>> col_monomials;  ///< degree <= m
  Matrix data;
};

/// Dimensions of the degree-m matrix for a linear pencil with blocks of size
/// (n+k-1) x n. Requires m >= 1.
std::pair<Index, Index> mac_size(Index n, int k, int m);

/// Requires m >= pencil degree. The dense layout is capped at max_bytes.
MacaulayMatrix build_macaulay(const RectPencil& pencil, int m,
                              std::size_t max_bytes = std::size_t{1} << 31);

/// Nullity at each degree from the pencil degree up to m_max. The nullity is
/// nondecreasing and becomes the eigenvalue count once the degree suffices.
std::vector<Index> nullspace_profile(const RectPencil& pencil, int m_max,
                                     const ToleranceConfig& cfg = {},
                                     std::size_t max_bytes = std::size_t{1} << 31);

/// Eigenvalues extracted from the stabilized nullspace at degree m: the
/// basis restricted to monomials of degree < m is related to its variable
/// shifts by a commuting family whose joint spectrum gives the tuples;
/// candidates are then filtered by the rank drop test. Throws when the
/// nullity has not stabilized at m (raise m) or the basis exceeds 200
/// columns.
EigSet mac_solve_small(const RectPencil& pencil, int m, const ToleranceConfig& cfg = {},
                       std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                       std::size_t max_bytes = std::size_t{1} << 31);

}  // namespace rmep
