#pragma once

#include "rmep/types.hpp"

namespace rmep::detail {

/// Unitary Schur decomposition a = u t u^*, t upper triangular.
void schur_complex(const Matrix& a, Matrix& u, Matrix& t);

struct Svd {
  RealVector s;  // descending
  Matrix u;      // full, m x m (empty unless requested)
  Matrix v;      // full, n x n (empty unless requested); a = u diag(s) v^*
};

Svd svd_complex(const Matrix& a, bool need_u, bool need_v);

RealVector singular_values(const Matrix& a);

/// Count of singular values above tol * s_max; 0 for an empty or zero matrix.
Index rank_from_svd(const RealVector& s, double tol);

}  // namespace rmep::detail
