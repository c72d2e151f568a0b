#include "backend.hpp"

#ifdef RMEP_HAVE_LAPACK
#include <lapacke.h>
#else
#include <Eigen/Eigenvalues>
#endif

namespace rmep::detail {

#ifdef RMEP_HAVE_LAPACK

namespace {
lapack_complex_double* lp(Matrix& m) { return reinterpret_cast<lapack_complex_double*>(m.data()); }
}  // namespace

void schur_complex(const Matrix& a, Matrix& u, Matrix& t) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  t = a;
  u.resize(n, n);
  if (n == 0) return;
  Vector w(n);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, lp(t), n, &sdim,
                    reinterpret_cast<lapack_complex_double*>(w.data()), lp(u), n);
  if (info != 0) throw SolverError("complex Schur decomposition failed (zgees info != 0)");
}

Svd svd_complex(const Matrix& a, bool need_u, bool need_v) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  Svd out;
  out.s.resize(std::min(m, n));
  if (m == 0 || n == 0) {
    if (need_u) out.u = Matrix::Identity(m, m);
    if (need_v) out.v = Matrix::Identity(n, n);
    return out;
  }
  Matrix work = a;
  // zgesdd has no mode computing only one side's full basis; 'A' is cheap
  // enough at the sizes the solvers reach.
  if (need_u || need_v) {
    Matrix ufull(m, m), vt(n, n);
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, lp(work), m,
                                           out.s.data(), lp(ufull), m, lp(vt), n);
    if (info != 0) throw SolverError("complex SVD failed (zgesdd info != 0)");
    if (need_u) out.u = std::move(ufull);
    if (need_v) out.v = vt.adjoint();
  } else {
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(work), m,
                                           out.s.data(), nullptr, m, nullptr, n);
    if (info != 0) throw SolverError("complex SVD failed (zgesdd info != 0)");
  }
  return out;
}

#else  // pure Eigen kernels

void schur_complex(const Matrix& a, Matrix& u, Matrix& t) {
  if (a.rows() == 0) {
    u.resize(0, 0);
    t.resize(0, 0);
    return;
  }
  Eigen::ComplexSchur<Matrix> schur(a, true);
  if (schur.info() != Eigen::Success)
    throw SolverError("complex Schur decomposition did not converge");
  u = schur.matrixU();
  t = schur.matrixT();
}

Svd svd_complex(const Matrix& a, bool need_u, bool need_v) {
  Svd out;
  if (a.rows() == 0 || a.cols() == 0) {
    out.s.resize(0);
    if (need_u) out.u = Matrix::Identity(a.rows(), a.rows());
    if (need_v) out.v = Matrix::Identity(a.cols(), a.cols());
    return out;
  }
  unsigned opts = 0;
  if (need_u) opts |= Eigen::ComputeFullU;
  if (need_v) opts |= Eigen::ComputeFullV;
  if (std::min(a.rows(), a.cols()) <= 16) {
    Eigen::JacobiSVD<Matrix> svd(a, opts);
    out.s = svd.singularValues();
    if (need_u) out.u = svd.matrixU();
    if (need_v) out.v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Matrix> svd(a, opts);
    out.s = svd.singularValues();
    if (need_u) out.u = svd.matrixU();
    if (need_v) out.v = svd.matrixV();
  }
  return out;
}

#endif

RealVector singular_values(const Matrix& a) { return svd_complex(a, false, false).s; }

Index rank_from_svd(const RealVector& s, double tol) {
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  Index r = 0;
  while (r < s.size() && s[r] > tol * s[0]) ++r;
  return r;
}

}  // namespace rmep::detail
