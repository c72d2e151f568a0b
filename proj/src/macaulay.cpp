#include "rmep/macaulay.hpp"

#include "rmep/compress.hpp"
#include "rmep/joint_eig.hpp"

#include "backend.hpp"

#include <Eigen/Dense>

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rmep {

namespace {

void emit_degree(int remaining, std::size_t slot, std::vector<int>& current,
                 std::vector<std::vector<int>>& out) {
  if (slot + 1 == current.size()) {
    current[slot] = remaining;
    out.push_back(current);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[slot] = v;
    emit_degree(remaining - v, slot + 1, current, out);
  }
}

void check_pencil(const RectPencil& pencil, const char* where) {
  if (pencil.k < 1 || pencil.terms.empty() || pencil.rows() < 1 || pencil.cols() < 1)
    throw std::invalid_argument(std::string(where) + ": empty pencil");
}

std::vector<int> tuple_sum(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

/// Nullspace basis at degree m plus the nullity one degree lower.
struct NullspacePair {
  Matrix basis;          // cols(Macaulay_m) x nullity(m)
  Index nullity_below = 0;
};

NullspacePair stabilized_nullspace(const RectPencil& pencil, int m,
                                   const ToleranceConfig& cfg, std::size_t max_bytes) {
  const MacaulayMatrix below = build_macaulay(pencil, m - 1, max_bytes);
  const MacaulayMatrix full = build_macaulay(pencil, m, max_bytes);

  NullspacePair out;
  out.nullity_below =
      below.data.cols() - detail::rank_from_svd(detail::singular_values(below.data), cfg.rank_tol);

  const detail::Svd svd = detail::svd_complex(full.data, false, true);
  const Index rank = detail::rank_from_svd(svd.s, cfg.rank_tol);
  out.basis = svd.v.rightCols(full.data.cols() - rank);
  return out;
}

}  // namespace

std::vector<std::vector<int>> graded_monomials(int k, int m) {
  if (k < 1) throw std::invalid_argument("graded_monomials: need at least one variable");
  if (m < 0) throw std::invalid_argument("graded_monomials: negative degree");
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(k), 0);
  for (int deg = 0; deg <= m; ++deg) emit_degree(deg, 0, current, out);
  return out;
}

std::pair<Index, Index> mac_size(Index n, int k, int m) {
  if (n < 1 || k < 1 || m < 1) throw std::invalid_argument("mac_size: bad arguments");
  const Index rows = (n + k - 1) * static_cast<Index>(binom(m + k - 1, k));
  const Index cols = n * static_cast<Index>(binom(m + k, k));
  return {rows, cols};
}

MacaulayMatrix build_macaulay(const RectPencil& pencil, int m, std::size_t max_bytes) {
  check_pencil(pencil, "build_macaulay");
  if (m < pencil.degree)
    throw std::invalid_argument("build_macaulay: degree below the pencil degree");

  MacaulayMatrix out;
  out.degree = m;
  out.row_monomials = graded_monomials(pencil.k, m - pencil.degree);
  out.col_monomials = graded_monomials(pencil.k, m);

  std::map<std::vector<int>, Index> col_index;
  for (std::size_t c = 0; c < out.col_monomials.size(); ++c)
    col_index.emplace(out.col_monomials[c], static_cast<Index>(c));

  const Index br = pencil.rows();
  const Index bc = pencil.cols();
  const Index rows = br * static_cast<Index>(out.row_monomials.size());
  const Index cols = bc * static_cast<Index>(out.col_monomials.size());
  if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * sizeof(Complex) >
      max_bytes)
    throw SolverError("build_macaulay: dense layout exceeds the memory cap");

  out.data = Matrix::Zero(rows, cols);
  for (std::size_t r = 0; r < out.row_monomials.size(); ++r) {
    for (const auto& [w, a] : pencil.terms) {
      const Index c = col_index.at(tuple_sum(out.row_monomials[r], w));
      out.data.block(static_cast<Index>(r) * br, c * bc, br, bc) = a;
    }
  }
  return out;
}

std::vector<Index> nullspace_profile(const RectPencil& pencil, int m_max,
                                     const ToleranceConfig& cfg, std::size_t max_bytes) {
  check_pencil(pencil, "nullspace_profile");
  if (m_max < pencil.degree)
    throw std::invalid_argument("nullspace_profile: degree below the pencil degree");
  std::vector<Index> out;
  for (int m = pencil.degree; m <= m_max; ++m) {
    const MacaulayMatrix mac = build_macaulay(pencil, m, max_bytes);
    const RealVector s = detail::singular_values(mac.data);
    out.push_back(mac.data.cols() - detail::rank_from_svd(s, cfg.rank_tol));
  }
  return out;
}

EigSet mac_solve_small(const RectPencil& pencil, int m, const ToleranceConfig& cfg,
                       std::uint64_t seed, std::size_t max_bytes) {
  check_pencil(pencil, "mac_solve_small");
  if (m < pencil.degree + 1)
    throw std::invalid_argument("mac_solve_small: need one degree above the pencil degree");

  const NullspacePair ns = stabilized_nullspace(pencil, m, cfg, max_bytes);
  const Index nullity = ns.basis.cols();
  if (nullity == 0) return {};
  if (nullity != ns.nullity_below)
    throw SolverError("mac_solve_small: nullity not stabilized, raise the degree");
  if (nullity > 200)
    throw SolverError("mac_solve_small: nullspace too large for the dense extraction");

  const int k = pencil.k;
  const std::vector<std::vector<int>> low = graded_monomials(k, m - 1);
  const std::vector<std::vector<int>> all = graded_monomials(k, m);
  std::map<std::vector<int>, Index> position;
  for (std::size_t c = 0; c < all.size(); ++c)
    position.emplace(all[c], static_cast<Index>(c));

  const Index bc = pencil.cols();
  const Index low_rows = bc * static_cast<Index>(low.size());
  Matrix z1(low_rows, nullity);
  for (std::size_t r = 0; r < low.size(); ++r)
    z1.middleRows(static_cast<Index>(r) * bc, bc) =
        ns.basis.middleRows(position.at(low[r]) * bc, bc);

  const Eigen::CompleteOrthogonalDecomposition<Matrix> z1_cod(z1);
  std::vector<Matrix> shifts;
  shifts.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Matrix zs(low_rows, nullity);
    for (std::size_t r = 0; r < low.size(); ++r) {
      std::vector<int> shifted = low[r];
      ++shifted[static_cast<std::size_t>(i)];
      zs.middleRows(static_cast<Index>(r) * bc, bc) =
          ns.basis.middleRows(position.at(shifted) * bc, bc);
    }
    shifts.push_back(z1_cod.solve(zs));
  }

  const EigSet candidates =
      joint_commuting_eigs(Matrix::Identity(nullity, nullity), shifts, cfg, seed);

  EigSet out;
  for (const Eigenvalue& c : candidates.tuples) {
    const RankDropResult rd = rank_drop_test(pencil, c.lambda, cfg);
    if (rd.accepted) out.push(c.lambda, rd.residual, rd.vector);
  }
  out.sort_lex();
  return out;
}

}  // namespace rmep
