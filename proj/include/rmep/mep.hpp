#pragma once

#include "rmep/kron.hpp"
#include "rmep/types.hpp"

namespace rmep {

/// Square k-parameter eigenvalue problem: equation i demands
/// (V_{i,0} + lambda_1 V_{i,1} + ... + lambda_k V_{i,k}) x_i = 0.
/// equations[i] holds the k+1 coefficients of equation i, all square of the
/// same size within an equation.
struct MepSystem {
  std::vector<std::vector<Matrix>> equations;

  int params() const {
    return equations.empty() ? 0 : static_cast<int>(equations[0].size()) - 1;
  }
};

/// Operator determinants Delta_0, ..., Delta_k of a square k-parameter
/// system with k equations. Delta_0 takes the parameter coefficients as grid
/// columns; Delta_i replaces column i by the negated constant column, so the
/// joint pencils satisfy Delta_i z = lambda_i Delta_0 z on decomposable
/// solutions z = x_1 (x) ... (x) x_k.
std::vector<Matrix> delta_family(const MepSystem& sys);

/// A k-parameter system mixing s small square equations with one rectangular
/// equation repeated r = k - s times. The rectangular pencil has k+1
/// coefficients of size (n + r - 1) x n so that the repeated Kronecker factor
/// admits the symmetric compression of order r.
struct MixedSystem {
  std::vector<std::vector<Matrix>> squares;  ///< s equations, k+1 coefficients each
  std::vector<Matrix> rect;                  ///< k+1 coefficients
  int repeats = 0;                           ///< r = k - squares.size()

  int params() const { return static_cast<int>(squares.size()) + repeats; }
};

/// Operator determinants of the mixed system on the k x k grid whose first s
/// rows hold the square equations and whose remaining r rows repeat the
/// rectangular one. Sizes: (prod d_j) (n+r-1)^r x (prod d_j) n^r.
std::vector<Matrix> mixed_delta_family(const MixedSystem& sys);

namespace detail {
/// Grid of parameter columns for the mixed system; column i <- constants
/// yields the Delta_i grid. Shared with the fused compression path.
std::vector<std::vector<Matrix>> mixed_grid(const MixedSystem& sys, int replace_col);
void validate_mixed(const MixedSystem& sys);
}  // namespace detail

}  // namespace rmep
