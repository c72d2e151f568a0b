#include "rmep/compress.hpp"

#include "rmep/kron.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rmep {

namespace {

Index pow_index(Index base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > (Index{1} << 46) / base)
      throw std::overflow_error("compression index space too large");
    r *= base;
  }
  return r;
}

}  // namespace

std::uint64_t binom(Index n, Index k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (Index i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("binom: value exceeds 64 bits");
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

Index monotone_tuple_count(Index n, int k) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("monotone_tuple_count: n and k must be positive");
  return static_cast<Index>(binom(n + k - 1, k));
}

namespace detail {

Index radix_rank(const std::vector<Index>& tuple, Index base) {
  Index r = 0;
  for (Index v : tuple) r = r * base + v;
  return r;
}

Index rank_nondecreasing(const std::vector<Index>& tuple, Index n) {
  const int k = static_cast<int>(tuple.size());
  Index rank = 0;
  Index lo = 0;
  for (int pos = 0; pos < k; ++pos) {
    for (Index w = lo; w < tuple[pos]; ++w)
      rank += static_cast<Index>(binom(n - w + k - 2 - pos, k - 1 - pos));
    lo = tuple[pos];
  }
  return rank;
}

Index rank_increasing(const std::vector<Index>& tuple, Index m) {
  const int k = static_cast<int>(tuple.size());
  Index rank = 0;
  Index lo = 0;
  for (int pos = 0; pos < k; ++pos) {
    for (Index w = lo; w < tuple[pos]; ++w)
      rank += static_cast<Index>(binom(m - 1 - w, k - 1 - pos));
    lo = tuple[pos] + 1;
  }
  return rank;
}

bool next_nondecreasing(std::vector<Index>& tuple, Index n) {
  const int k = static_cast<int>(tuple.size());
  for (int pos = k - 1; pos >= 0; --pos) {
    if (tuple[pos] + 1 < n) {
      const Index v = tuple[pos] + 1;
      for (int q = pos; q < k; ++q) tuple[q] = v;
      return true;
    }
  }
  return false;
}

bool next_increasing(std::vector<Index>& tuple, Index m) {
  const int k = static_cast<int>(tuple.size());
  for (int pos = k - 1; pos >= 0; --pos) {
    if (tuple[pos] < m - k + pos) {
      ++tuple[pos];
      for (int q = pos + 1; q < k; ++q) tuple[q] = tuple[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

Matrix Selection::dense() const {
  Matrix out = Matrix::Zero(rows, cols);
  for (Index r = 0; r < rows; ++r) out(r, col_of_row[r]) = 1.0;
  return out;
}

Matrix Selection::gather_rows(const Matrix& m) const {
  if (m.rows() != cols)
    throw std::invalid_argument("Selection::gather_rows: size mismatch");
  Matrix out(rows, m.cols());
  for (Index r = 0; r < rows; ++r) out.row(r) = m.row(col_of_row[r]);
  return out;
}

Matrix Selection::scatter_cols(const Matrix& m) const {
  if (m.cols() != rows)
    throw std::invalid_argument("Selection::scatter_cols: size mismatch");
  Matrix out = Matrix::Zero(m.rows(), cols);
  for (Index r = 0; r < rows; ++r) out.col(col_of_row[r]) += m.col(r);
  return out;
}

Matrix SymmetricCompression::compress(const Matrix& delta) const {
  return dup.scatter_cols(pick.gather_rows(delta));
}

SymmetricCompression symmetric_compression(Index n, int k) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("symmetric_compression: n and k must be positive");
  const Index m = n + k - 1;
  SymmetricCompression sc;
  sc.n = n;
  sc.k = k;

  const Index nk = pow_index(n, k);
  sc.dup.rows = nk;
  sc.dup.cols = monotone_tuple_count(n, k);
  sc.dup.col_of_row.resize(nk);
  std::vector<Index> tup(k, 0);
  for (Index r = 0; r < nk; ++r) {
    std::vector<Index> sorted = tup;
    std::sort(sorted.begin(), sorted.end());
    sc.dup.col_of_row[r] = detail::rank_nondecreasing(sorted, n);
    for (int t = k - 1; t >= 0; --t) {
      if (++tup[t] < n) break;
      tup[t] = 0;
    }
  }

  sc.pick.rows = sc.dup.cols;
  sc.pick.cols = pow_index(m, k);
  sc.pick.col_of_row.resize(sc.pick.rows);
  std::vector<Index> inc(k);
  std::iota(inc.begin(), inc.end(), Index{0});
  for (Index r = 0; r < sc.pick.rows; ++r) {
    sc.pick.col_of_row[r] = detail::radix_rank(inc, m);
    detail::next_increasing(inc, m);
  }
  return sc;
}

Matrix compressed_kron(const SymmetricCompression& sc,
                       const std::vector<const Matrix*>& factors) {
  const int k = sc.k;
  const Index n = sc.n;
  const Index m = n + k - 1;
  if (static_cast<int>(factors.size()) != k)
    throw std::invalid_argument("compressed_kron: factor count must equal k");
  for (const Matrix* f : factors)
    if (f == nullptr || f->rows() != m || f->cols() != n)
      throw std::invalid_argument("compressed_kron: factors must be (n+k-1) x n");

  const Index nout = sc.size();
  Matrix out(nout, nout);
  std::vector<Index> row(k);
  std::iota(row.begin(), row.end(), Index{0});
  std::vector<Index> perm(k);
  for (Index p = 0; p < nout; ++p) {
    std::vector<Index> col(k, 0);
    for (Index q = 0; q < nout; ++q) {
      // Summing the sorted tuple's permutations in ascending order keeps the
      // entry deterministic across runs.
      Complex acc = 0.0;
      perm = col;
      do {
        Complex prod = (*factors[0])(row[0], perm[0]);
        for (int t = 1; t < k; ++t) prod *= (*factors[t])(row[t], perm[t]);
        acc += prod;
      } while (std::next_permutation(perm.begin(), perm.end()));
      out(p, q) = acc;
      detail::next_nondecreasing(col, n);
    }
    detail::next_increasing(row, m);
  }
  return out;
}

std::vector<Matrix> wide_deltas(const RectPencil& pencil) {
  if (pencil.degree != 1)
    throw std::invalid_argument("wide_deltas: pencil must be linear");
  const int k = pencil.k;
  const Index m = pencil.rows();
  const Index n = pencil.cols();
  if (m != n + k - 1)
    throw std::invalid_argument("wide_deltas: pencil must be (n+k-1) x n");

  std::vector<Matrix> coeffs(k + 1);
  for (int i = 0; i <= k; ++i) coeffs[i] = pencil.linear_coeff(i);

  std::vector<Matrix> out(k + 1);
  for (int replace = 0; replace <= k; ++replace) {
    std::vector<std::vector<Matrix>> grid(k, std::vector<Matrix>(k));
    for (int t = 0; t < k; ++t)
      for (int j = 0; j < k; ++j)
        grid[t][j] = (j + 1 == replace) ? coeffs[0] : coeffs[j + 1];
    out[replace] = op_det(grid);
    if (replace > 0) out[replace] = -out[replace];
  }
  return out;
}

Matrix VandermondeCompression::compress(const Matrix& delta) const {
  return dup.scatter_cols(pick.gather_rows(delta));
}

VandermondeCompression vandermonde_compression(Index n) {
  if (n < 1)
    throw std::invalid_argument("vandermonde_compression: n must be positive");
  VandermondeCompression vc;
  vc.n = n;

  vc.interleave.rows = 3 * n;
  vc.interleave.cols = 3 * n;
  vc.interleave.col_of_row.resize(3 * n);
  for (Index block = 0; block < 3; ++block)
    for (Index pos = 0; pos < n; ++pos)
      vc.interleave.col_of_row[pos * 3 + block] = block * n + pos;

  const SymmetricCompression pair = symmetric_compression(3, 2);
  const SymmetricCompression base = symmetric_compression(n, 2);
  const Index tcols = base.dup.cols;

  // dup = S (pair.dup kron base.dup) with S = I_3 kron interleave kron I_n,
  // the permutation aligning (w kron w) kron (x kron x) with z kron z for
  // the stacked linearization variable z = w kron x.
  vc.dup.rows = 9 * n * n;
  vc.dup.cols = 6 * tcols;
  vc.dup.col_of_row.resize(vc.dup.rows);
  for (Index v = 0; v < vc.dup.rows; ++v) {
    const Index rr = v / (n * n);
    const Index rt = v % (n * n);
    const Index b = (v / n) % (3 * n);
    const Index s = (v / (3 * n * n)) * 3 * n * n + ((b % n) * 3 + b / n) * n + v % n;
    vc.dup.col_of_row[s] = pair.dup.col_of_row[rr] * tcols + base.dup.col_of_row[rt];
  }

  // Row labels of the linearization: n+1 Vandermonde rows, then n rows for
  // each of the two shifted copies.  A pair of rows is kept when the
  // corresponding products stay independent across eigenvalues.
  const Index dim = 3 * n + 1;
  vc.pick.cols = dim * dim;
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) {
      bool keep;
      if (i <= n)
        keep = true;
      else if (i <= 2 * n)
        keep = (j > 2 * n) && (i - n) <= (j - 2 * n);
      else
        keep = false;
      if (keep) vc.pick.col_of_row.push_back(i * dim + j);
    }
  }
  vc.pick.rows = static_cast<Index>(vc.pick.col_of_row.size());
  return vc;
}

}  // namespace rmep
