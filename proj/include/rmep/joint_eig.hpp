#pragma once

#include "rmep/types.hpp"

#include <cstdint>

namespace rmep {

/// Joint eigenvalue tuples of the commuting family G_i = d0^{-1} ds[i].
///
/// Draws unit-circle coefficients c_i, computes a clustered Schur form of
/// sum c_i G_i and reads lambda_i from the (block-)diagonal of the
/// similarity-transformed G_i; a cluster of size m yields its tuple repeated
/// m times (the block trace mean). One retry with fresh coefficients when the
/// clustering looks ambiguous.
///
/// d0 must be square and numerically nonsingular
/// (sigma_min > stair_tol * sigma_max); otherwise SolverError is thrown and
/// the caller should deflate with staircase_regular_part.
EigSet joint_commuting_eigs(const Matrix& d0, const std::vector<Matrix>& ds,
                            const ToleranceConfig& cfg = {},
                            std::uint64_t seed = 0x9e3779b97f4a7c15ull);

namespace detail {
/// Stable in-place regrouping of a complex Schur form so that positions with
/// equal labels become contiguous (unitary Givens swaps on t and u).
void group_schur_clusters(Matrix& t, Matrix& u, std::vector<int>& labels);

/// Union-find clustering of values under |a - b| <= tol * (1 + |a|).
std::vector<int> cluster_labels(const Vector& values, double tol);
}  // namespace detail

}  // namespace rmep
