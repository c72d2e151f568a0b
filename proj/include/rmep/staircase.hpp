#pragma once

#include "rmep/joint_eig.hpp"
#include "rmep/types.hpp"

#include <cstdint>

namespace rmep {

/// Finite eigenvalue tuples of the common regular part of the joint pencils
/// (ds[i] - lambda_i d0), which may be singular as long as the family shares
/// a regular part (true for every producer in this library).
///
/// Deflation loop, all transformations unitary:
///  * d0 rank-deficient: drop ker(d0) columns and the rows spanned by the
///    family's images of that kernel (infinite and common-singular structure),
///  * d0 tall with full column rank: drop rows outside the family's joint
///    column span; if none, restrict columns to the common kernel of the
///    family's off-range rows.
/// Terminates on a square nonsingular d0 (delegated to joint_commuting_eigs,
/// so multiplicities are kept) or on an empty block (no finite eigenvalues).
///
/// Throws SolverError when rank decisions become inconsistent or the loop
/// fails to converge within rows + cols iterations.
EigSet staircase_regular_part(const Matrix& d0, const std::vector<Matrix>& ds,
                              const ToleranceConfig& cfg = {},
                              std::uint64_t seed = 0x9e3779b97f4a7c15ull);

}  // namespace rmep
