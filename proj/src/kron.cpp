#include "rmep/kron.hpp"

#include <algorithm>
#include <numeric>

namespace rmep {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_chain(const std::vector<Matrix>& factors) {
  if (factors.empty()) return Matrix::Identity(1, 1);
  Matrix acc = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i]);
  return acc;
}

namespace detail {

int perm_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace detail

Matrix op_det(const std::vector<std::vector<Matrix>>& grid) {
  const std::size_t k = grid.size();
  if (k == 0) throw std::invalid_argument("op_det: empty grid");
  Index rows = 1, cols = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (grid[i].size() != k) throw std::invalid_argument("op_det: grid is not k x k");
    for (std::size_t j = 0; j < k; ++j)
      if (grid[i][j].rows() != grid[i][0].rows() || grid[i][j].cols() != grid[i][0].cols())
        throw std::invalid_argument("op_det: dimension mismatch within a grid row");
    rows *= grid[i][0].rows();
    cols *= grid[i][0].cols();
  }

  Matrix acc = Matrix::Zero(rows, cols);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> factors(k);
  do {
    for (std::size_t i = 0; i < k; ++i) factors[i] = grid[i][perm[i]];
    const Matrix term = kron_chain(factors);
    if (detail::perm_sign(perm) > 0)
      acc += term;
    else
      acc -= term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

}  // namespace rmep
