#include "rmep/mep.hpp"

namespace rmep {

std::vector<Matrix> delta_family(const MepSystem& sys) {
  const std::size_t k = sys.equations.size();
  if (k == 0) throw std::invalid_argument("delta_family: no equations");
  for (const auto& eq : sys.equations) {
    if (eq.size() != k + 1)
      throw std::invalid_argument("delta_family: equation needs k+1 coefficients");
    for (const Matrix& v : eq)
      if (v.rows() != eq[0].rows() || v.cols() != eq[0].cols() || v.rows() != v.cols())
        throw std::invalid_argument("delta_family: coefficients must be square and equal-sized");
  }

  std::vector<std::vector<Matrix>> grid(k, std::vector<Matrix>(k));
  std::vector<Matrix> deltas;
  deltas.reserve(k + 1);
  for (std::size_t replace = 0; replace <= k; ++replace) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        grid[i][j] = sys.equations[i][j + 1 == replace ? 0 : j + 1];
    deltas.push_back(replace == 0 ? op_det(grid) : Matrix(-op_det(grid)));
  }
  return deltas;
}

namespace detail {

void validate_mixed(const MixedSystem& sys) {
  const int s = static_cast<int>(sys.squares.size());
  const int k = s + sys.repeats;
  if (sys.repeats < 1) throw std::invalid_argument("mixed system: needs repeats >= 1");
  if (sys.rect.size() != static_cast<std::size_t>(k + 1))
    throw std::invalid_argument("mixed system: rectangular equation needs k+1 coefficients");
  const Index n = sys.rect[0].cols();
  if (sys.rect[0].rows() != n + sys.repeats - 1)
    throw std::invalid_argument("mixed system: rectangular coefficients must be (n+r-1) x n");
  for (const Matrix& c : sys.rect)
    if (c.rows() != sys.rect[0].rows() || c.cols() != n)
      throw std::invalid_argument("mixed system: rectangular coefficient size mismatch");
  for (const auto& sq : sys.squares) {
    if (sq.size() != static_cast<std::size_t>(k + 1))
      throw std::invalid_argument("mixed system: square equation needs k+1 coefficients");
    for (const Matrix& v : sq)
      if (v.rows() != sq[0].rows() || v.cols() != v.rows())
        throw std::invalid_argument("mixed system: square coefficient size mismatch");
  }
}

std::vector<std::vector<Matrix>> mixed_grid(const MixedSystem& sys, int replace_col) {
  const int s = static_cast<int>(sys.squares.size());
  const int k = s + sys.repeats;
  std::vector<std::vector<Matrix>> grid(k, std::vector<Matrix>(k));
  for (int i = 0; i < k; ++i) {
    const std::vector<Matrix>& coeffs = i < s ? sys.squares[i] : sys.rect;
    for (int j = 0; j < k; ++j) grid[i][j] = coeffs[j + 1 == replace_col ? 0 : j + 1];
  }
  return grid;
}

}  // namespace detail

std::vector<Matrix> mixed_delta_family(const MixedSystem& sys) {
  detail::validate_mixed(sys);
  const int k = sys.params();
  std::vector<Matrix> deltas;
  deltas.reserve(k + 1);
  for (int replace = 0; replace <= k; ++replace) {
    Matrix d = op_det(detail::mixed_grid(sys, replace));
    deltas.push_back(replace == 0 ? std::move(d) : Matrix(-d));
  }
  return deltas;
}

}  // namespace rmep
