#pragma once

#include "rmep/types.hpp"

#include <map>

namespace rmep {

/// Rectangular matrix polynomial M(lambda) = sum_w lambda^w A_w in k
/// parameters, stored by exponent multi-index w (length k, |w| <= degree).
/// An eigenvalue is a tuple where M(lambda) loses full column rank.
struct RectPencil {
  int k = 0;
  int degree = 1;
  std::map<std::vector<int>, Matrix> terms;

  Index rows() const { return terms.empty() ? 0 : terms.begin()->second.rows(); }
  Index cols() const { return terms.empty() ? 0 : terms.begin()->second.cols(); }

  /// sum_w lambda^w A_w; throws on non-finite lambda.
  Matrix eval(const Vector& lambda) const;

  void add_term(std::vector<int> w, Matrix a);

  /// Coefficient of exponent w, or zero when the term is absent.
  Matrix term_or_zero(const std::vector<int>& w) const;

  /// Coefficient of a linear pencil: 0 selects the constant term, i in
  /// 1..k the matrix multiplying parameter i.
  Matrix linear_coeff(int i) const;

  /// Linear pencil A + lambda_1 B_1 + ... + lambda_k B_k.
  static RectPencil linear(Matrix a, std::vector<Matrix> bs);
};

struct RankDropResult {
  bool accepted = false;
  double residual = 0.0;  ///< sigma_min(M) / sigma_max(M)
  Vector vector;          ///< right singular vector of sigma_min
};

/// Accepts lambda when sigma_cols(M(lambda)) < rank_tol * ||M(lambda)||_2.
RankDropResult rank_drop_test(const RectPencil& pencil, const Vector& lambda,
                              const ToleranceConfig& cfg = {});

/// Gauss-Newton polish of an eigenvalue candidate against the rectangular
/// equation: x is the smallest right singular vector of M(lambda) and the
/// update solves min ||[dM/dlambda_i x] delta + M(lambda) x||.  Keeps the
/// original tuple when the iteration leaves its neighbourhood or does not
/// reduce the rank-drop residual, so spurious candidates stay rejectable.
Vector polish_eigenvalue(const RectPencil& pencil, const Vector& lambda);

}  // namespace rmep
