#pragma once

#include "rmep/types.hpp"

namespace rmep {

/// Kronecker product with the usual block convention:
/// (a (x) b)(i*rb + p, j*cb + q) = a(i,j) * b(p,q).
Matrix kron(const Matrix& a, const Matrix& b);

/// Left-associated chain f0 (x) f1 (x) ... (x) f_{m-1}.
Matrix kron_chain(const std::vector<Matrix>& factors);

/// Operator determinant of a k x k grid of matrices:
///
///   sum_{sigma in S_k} sgn(sigma) grid[0][sigma(0)] (x) ... (x) grid[k-1][sigma(k-1)]
///
/// Row i supplies the i-th Kronecker factor, the permutation picks one column
/// per row. All matrices within a grid row must share dimensions (rows of the
/// grid may differ in size); the result is (prod rows_i) x (prod cols_i).
Matrix op_det(const std::vector<std::vector<Matrix>>& grid);

namespace detail {
/// Sign of a permutation given as the image sequence p(0), ..., p(k-1).
int perm_sign(const std::vector<int>& p);
}  // namespace detail

}  // namespace rmep
