#include "rmep/linear_rmep.hpp"

#include "rmep/compress.hpp"
#include "rmep/joint_eig.hpp"
#include "rmep/mep.hpp"
#include "rmep/staircase.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rmep {

namespace {

Matrix random_projection(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix p(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) p(i, j) = Complex(gauss(rng), gauss(rng));
  return p;
}

void check_linear(const RectPencil& pencil) {
  if (pencil.degree != 1)
    throw std::invalid_argument("linear solver: pencil must be linear");
  if (pencil.k < 1)
    throw std::invalid_argument("linear solver: pencil needs at least one parameter");
  if (pencil.rows() != pencil.cols() + pencil.k - 1)
    throw std::invalid_argument("linear solver: pencil must be (n+k-1) x n");
}

}  // namespace

Index linear_eigenvalue_count(Index n, int k) { return monotone_tuple_count(n, k); }

EigSet solve_linear_projected(const RectPencil& pencil, const ToleranceConfig& cfg,
                              std::uint64_t seed, const std::vector<Matrix>* projections,
                              EigSet* rejected) {
  check_linear(pencil);
  const int k = pencil.k;
  const Index m = pencil.rows();
  const Index n = pencil.cols();
  if (projections != nullptr) {
    if (static_cast<int>(projections->size()) != k)
      throw std::invalid_argument("solve_linear_projected: need k projections");
    for (const Matrix& p : *projections)
      if (p.rows() != n || p.cols() != m)
        throw std::invalid_argument("solve_linear_projected: projections must be n x (n+k-1)");
  }

  std::vector<Matrix> coeffs(k + 1);
  for (int i = 0; i <= k; ++i) coeffs[i] = pencil.linear_coeff(i);

  std::mt19937_64 rng(seed);
  const int attempts = (projections != nullptr) ? 1 : 3;
  EigSet candidates;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    MepSystem sys;
    sys.equations.resize(k);
    for (int i = 0; i < k; ++i) {
      const Matrix p =
          (projections != nullptr) ? (*projections)[i] : random_projection(n, m, rng);
      sys.equations[i].resize(k + 1);
      for (int j = 0; j <= k; ++j) sys.equations[i][j] = p * coeffs[j];
    }
    std::vector<Matrix> deltas = delta_family(sys);
    std::vector<Matrix> rest(deltas.begin() + 1, deltas.end());
    // Generic projections give a nonsingular Delta_0, so the direct joint
    // solve applies; the staircase handles the degenerate draws.
    try {
      candidates = joint_commuting_eigs(deltas[0], rest, cfg, seed + attempt);
      break;
    } catch (const SolverError&) {
    }
    try {
      candidates = staircase_regular_part(deltas[0], rest, cfg, seed + attempt);
      break;
    } catch (const SolverError&) {
      if (attempt + 1 == attempts) throw;
    }
  }

  EigSet out;
  for (const Eigenvalue& c : candidates.tuples) {
    const Vector lam = polish_eigenvalue(pencil, c.lambda);
    const RankDropResult rd = rank_drop_test(pencil, lam, cfg);
    if (rd.accepted)
      out.push(lam, rd.residual, rd.vector);
    else if (rejected != nullptr)
      rejected->push(lam, rd.residual, rd.vector);
  }
  out.sort_lex();
  if (rejected != nullptr) rejected->sort_lex();
  return out;
}

EigSet solve_linear_compressed(const RectPencil& pencil, const ToleranceConfig& cfg,
                               std::uint64_t seed) {
  check_linear(pencil);
  const int k = pencil.k;
  const Index n = pencil.cols();

  std::vector<Matrix> coeffs(k + 1);
  for (int i = 0; i <= k; ++i) coeffs[i] = pencil.linear_coeff(i);

  const SymmetricCompression sc = symmetric_compression(n, k);
  const Index size = sc.size();
  std::vector<Matrix> d(k + 1, Matrix::Zero(size, size));

  // Compressed operator determinants, one Kronecker term at a time; the
  // full n^k blowup is never formed.
  std::vector<int> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<const Matrix*> factors(k);
  do {
    const int sign = detail::perm_sign(sigma);
    for (int replace = 0; replace <= k; ++replace) {
      for (int t = 0; t < k; ++t) {
        const int col = sigma[t];
        factors[t] = (col + 1 == replace) ? &coeffs[0] : &coeffs[col + 1];
      }
      const Matrix term = compressed_kron(sc, factors);
      if (sign > 0)
        d[replace] += term;
      else
        d[replace] -= term;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  for (int i = 1; i <= k; ++i) d[i] = -d[i];

  std::vector<Matrix> rest(d.begin() + 1, d.end());
  const EigSet cand = staircase_regular_part(d[0], rest, cfg, seed);

  EigSet out;
  for (const Eigenvalue& c : cand.tuples) {
    const Vector lam = polish_eigenvalue(pencil, c.lambda);
    const RankDropResult rd = rank_drop_test(pencil, lam, cfg);
    out.push(lam, rd.residual, rd.vector);
  }
  out.sort_lex();
  return out;
}

}  // namespace rmep
