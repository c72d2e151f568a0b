#include "rmep/staircase.hpp"

#include "backend.hpp"

#include <stdexcept>
#include <vector>

namespace rmep {

EigSet staircase_regular_part(const Matrix& d0_in, const std::vector<Matrix>& ds_in,
                              const ToleranceConfig& cfg, std::uint64_t seed) {
  if (ds_in.empty())
    throw std::invalid_argument("staircase_regular_part: empty pencil family");
  for (const Matrix& d : ds_in)
    if (d.rows() != d0_in.rows() || d.cols() != d0_in.cols())
      throw std::invalid_argument("staircase_regular_part: mismatched pencil sizes");

  Matrix d0 = d0_in;
  std::vector<Matrix> ds = ds_in;
  const Index k = static_cast<Index>(ds.size());

  // Deflation can produce blocks that are pure roundoff.  Ranks are judged
  // against the scale of the whole family, not each block alone, so such
  // blocks count as zero instead of full rank.
  double scale = d0.norm();
  for (const Matrix& d : ds) scale = std::max(scale, d.norm());
  const auto rank_of = [&](const RealVector& s) {
    const double thresh = cfg.stair_tol * std::max(s.size() > 0 ? s[0] : 0.0, scale);
    Index r = 0;
    while (r < s.size() && s[r] > thresh) ++r;
    return r;
  };

  // Every pass either returns or strictly shrinks rows + cols.
  const Index budget = d0.rows() + d0.cols() + 2;
  for (Index iter = 0; iter < budget; ++iter) {
    const Index m = d0.rows();
    const Index n = d0.cols();
    if (m == 0 || n == 0) return {};

    detail::Svd svd = detail::svd_complex(d0, true, true);
    const Index r = rank_of(svd.s);
    if (r == 0) return {};

    if (r == n) {
      if (m == n) return joint_commuting_eigs(d0, ds, cfg, seed);

      // Tall with full column rank.  Rows orthogonal to the joint column
      // span of the whole family carry no constraint; drop them first.
      Matrix h(m, (k + 1) * n);
      h.leftCols(n) = d0;
      for (Index i = 0; i < k; ++i) h.middleCols((i + 1) * n, n) = ds[i];
      detail::Svd hsvd = detail::svd_complex(h, true, false);
      const Index t = rank_of(hsvd.s);
      if (t < m) {
        Matrix p = hsvd.u.leftCols(t).adjoint();
        d0 = p * d0;
        for (Matrix& d : ds) d = p * d;
        continue;
      }

      // No joint left null space.  A solution x forces ds[i] x into
      // range(d0), so x lies in the common kernel of the off-range rows.
      Matrix u2 = svd.u.rightCols(m - r);
      Matrix c(k * (m - r), n);
      for (Index i = 0; i < k; ++i)
        c.middleRows(i * (m - r), m - r) = u2.adjoint() * ds[i];
      detail::Svd csvd = detail::svd_complex(c, false, true);
      const Index rc = rank_of(csvd.s);
      if (rc == n) return {};
      Matrix nbasis = csvd.v.rightCols(n - rc);
      d0 = d0 * nbasis;
      for (Matrix& d : ds) d = d * nbasis;
      continue;
    }

    // d0 rank-deficient: split off its kernel (columns v2) and the rows the
    // family maps that kernel into.  What remains carries the finite
    // regular spectrum.
    Matrix v1 = svd.v.leftCols(r);
    Matrix v2 = svd.v.rightCols(n - r);
    Matrix f(m, k * (n - r));
    for (Index i = 0; i < k; ++i) f.middleCols(i * (n - r), n - r) = ds[i] * v2;
    detail::Svd fsvd = detail::svd_complex(f, true, false);
    const Index s = rank_of(fsvd.s);
    if (m - s < r)
      throw SolverError(
          "staircase_regular_part: inconsistent rank decisions, adjust stair_tol");
    Matrix p2 = fsvd.u.rightCols(m - s).adjoint();
    d0 = p2 * d0 * v1;
    for (Matrix& d : ds) d = p2 * d * v1;
  }
  throw SolverError("staircase_regular_part: deflation did not converge");
}

}  // namespace rmep
