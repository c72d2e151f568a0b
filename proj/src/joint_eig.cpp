#include "rmep/joint_eig.hpp"

#include "backend.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rmep {

namespace detail {

std::vector<int> cluster_labels(const Vector& values, double tol) {
  const Index n = values.size();
  std::vector<int> parent(n);
  for (Index i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= tol * (1.0 + std::abs(values[i])))
        parent[find(static_cast<int>(j))] = find(static_cast<int>(i));
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = find(static_cast<int>(i));
  return labels;
}

namespace {

// Unitary swap of the adjacent diagonal pair (j, j+1) of the triangular t.
void swap_adjacent(Matrix& t, Matrix& u, Index j) {
  const Complex a = t(j, j), b = t(j, j + 1), c = t(j + 1, j + 1);
  const double scale = std::abs(b) + std::abs(c - a);
  if (scale == 0.0) return;  // equal eigenvalues, nothing to move
  const Complex x = b / scale, y = (c - a) / scale;
  const double r = std::sqrt(std::norm(x) + std::norm(y));
  if (r == 0.0) return;
  Eigen::Matrix2cd g;
  // first column is the unit eigenvector of [[a, b], [0, c]] for eigenvalue c
  g << x / r, -std::conj(y) / r, y / r, std::conj(x) / r;
  t.middleCols(j, 2) = (t.middleCols(j, 2) * g).eval();
  t.middleRows(j, 2) = (g.adjoint() * t.middleRows(j, 2)).eval();
  u.middleCols(j, 2) = (u.middleCols(j, 2) * g).eval();
  t(j + 1, j) = Complex(0, 0);
}

}  // namespace

void group_schur_clusters(Matrix& t, Matrix& u, std::vector<int>& labels) {
  const Index n = t.rows();
  Index pos = 0;
  while (pos < n) {
    const int lbl = labels[pos];
    Index next = pos + 1;
    while (next < n && labels[next] == lbl) ++next;  // contiguous run so far
    Index probe = next;
    while (probe < n) {
      if (labels[probe] != lbl) {
        ++probe;
        continue;
      }
      for (Index j = probe; j > next; --j) {
        swap_adjacent(t, u, j - 1);
        std::swap(labels[j - 1], labels[j]);
      }
      ++next;
      ++probe;
    }
    pos = next;
  }
}

}  // namespace detail

EigSet joint_commuting_eigs(const Matrix& d0, const std::vector<Matrix>& ds,
                            const ToleranceConfig& cfg, std::uint64_t seed) {
  const Index n = d0.rows();
  const int k = static_cast<int>(ds.size());
  if (d0.cols() != n) throw std::invalid_argument("joint_commuting_eigs: d0 not square");
  if (k == 0) throw std::invalid_argument("joint_commuting_eigs: empty family");
  for (const Matrix& d : ds)
    if (d.rows() != n || d.cols() != n)
      throw std::invalid_argument("joint_commuting_eigs: size mismatch");
  EigSet out;
  if (n == 0) return out;

  {
    const RealVector s = detail::singular_values(d0);
    if (s[0] <= 0.0 || s[n - 1] <= cfg.stair_tol * s[0])
      throw SolverError(
          "joint_commuting_eigs: d0 is numerically singular; deflate with "
          "staircase_regular_part");
  }
  const Eigen::PartialPivLU<Matrix> lu(d0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::MatrixXcd lambdas(k, n);  // per-position component reads
  for (int attempt = 0; attempt < 2; ++attempt) {
    Vector coeff(k);
    for (int i = 0; i < k; ++i) {
      const double phi = 2.0 * std::numbers::pi * unif(rng);
      coeff[i] = Complex(std::cos(phi), std::sin(phi));
    }
    Matrix comb = Matrix::Zero(n, n);
    for (int i = 0; i < k; ++i) comb += coeff[i] * ds[i];
    const Matrix gamma = lu.solve(comb);

    Matrix u, t;
    detail::schur_complex(gamma, u, t);
    std::vector<int> labels = detail::cluster_labels(t.diagonal(), cfg.cluster_tol);
    detail::group_schur_clusters(t, u, labels);

    // lambda_i[j] = u_j^* d0^{-1} ds[i] u_j = (d0^{-*} u_j)^* (ds[i] u_j)
    const Matrix w = lu.adjoint().solve(u);
    for (int i = 0; i < k; ++i) {
      const Matrix x = ds[i] * u;
      for (Index j = 0; j < n; ++j) lambdas(i, j) = w.col(j).dot(x.col(j));
    }

    // cluster means; ambiguous when diagonal reads disagree inside a cluster
    bool ambiguous = false;
    Index a = 0;
    while (a < n) {
      Index b = a + 1;
      while (b < n && labels[b] == labels[a]) ++b;
      const Index m = b - a;
      if (m > 1) {
        for (int i = 0; i < k; ++i) {
          const Complex mean = lambdas.row(i).segment(a, m).mean();
          double spread = 0.0;
          for (Index j = a; j < b; ++j) spread = std::max(spread, std::abs(lambdas(i, j) - mean));
          if (spread > 1e-3 * (1.0 + std::abs(mean))) ambiguous = true;
          for (Index j = a; j < b; ++j) lambdas(i, j) = mean;
        }
      }
      a = b;
    }
    if (ambiguous && attempt == 0) continue;

    out.tuples.reserve(n);
    for (Index j = 0; j < n; ++j) out.push(lambdas.col(j));
    return out;
  }
  return out;  // unreachable
}

}  // namespace rmep
