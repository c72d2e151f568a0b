#pragma once

#include "rmep/pencil.hpp"
#include "rmep/types.hpp"

#include <cstdint>
#include <vector>

namespace rmep {

/// Exact binomial coefficient; 0 outside the Pascal triangle, throws
/// std::overflow_error if the value does not fit in 64 bits.
std::uint64_t binom(Index n, Index k);

/// Number of nondecreasing k-tuples over {0,...,n-1}: binom(n+k-1, k).
/// Equals the generic eigenvalue count of a linear rectangular k-parameter
/// family with n columns.
Index monotone_tuple_count(Index n, int k);

namespace detail {

/// Row-major rank of a tuple over {0,...,base-1}^k.
Index radix_rank(const std::vector<Index>& tuple, Index base);

/// Lexicographic rank among all nondecreasing k-tuples over {0,...,n-1}.
Index rank_nondecreasing(const std::vector<Index>& tuple, Index n);

/// Lexicographic rank among all strictly increasing k-tuples over
/// {0,...,m-1}.
Index rank_increasing(const std::vector<Index>& tuple, Index m);

/// Lexicographic successor within the same tuple family; false once the
/// last tuple has been passed.
bool next_nondecreasing(std::vector<Index>& tuple, Index n);
bool next_increasing(std::vector<Index>& tuple, Index m);

}  // namespace detail

/// {0,1} matrix with exactly one unit entry per row, stored as that entry's
/// column index.  Covers every structured factor used by the compressions
/// here: coordinate duplication, row picking, permutation.
struct Selection {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> col_of_row;

  Matrix dense() const;

  /// dense() * m without forming the selection.
  Matrix gather_rows(const Matrix& m) const;

  /// m * dense(); columns of m sharing a target column add up.
  Matrix scatter_cols(const Matrix& m) const;
};

/// Symmetry compression for k-fold Kronecker products of (n+k-1) x n
/// factors.  dup duplicates monomial coordinates (x^{(k)} = dup * s for the
/// k-fold power of x), pick keeps the rows indexed by strictly increasing
/// tuples.  compress(delta) = pick * delta * dup is square of size
/// monotone_tuple_count(n, k).
struct SymmetricCompression {
  Index n = 0;
  int k = 0;
  Selection dup;
  Selection pick;

  Index size() const { return dup.cols; }
  Matrix compress(const Matrix& delta) const;
};

SymmetricCompression symmetric_compression(Index n, int k);

/// pick * (factors[0] kron ... kron factors[k-1]) * dup evaluated entry by
/// entry, bitwise identical to sc.compress(kron_chain(...)) but without the
/// n^k blowup.  Factors must all be (n+k-1) x n.
Matrix compressed_kron(const SymmetricCompression& sc,
                       const std::vector<const Matrix*>& factors);

/// Operator determinants of a linear rectangular family, built from k
/// copies of the pencil.  Entry 0 pairs with the constant term, entry i
/// with parameter i: pick * result[i] * dup and pick * result[0] * dup
/// form the generalized eigenvalue problems for the i-th coordinate.
std::vector<Matrix> wide_deltas(const RectPencil& pencil);

/// Compression for the (3n+1) x 3n linearization of a quadratic
/// two-parameter family.  dup rebuilds z kron z from the 3n(n+1)
/// independent entry products, pick keeps as many rows of the operator
/// determinants; compress(delta) = pick * delta * dup.
struct VandermondeCompression {
  Index n = 0;
  Selection interleave;  // 3n x 3n permutation, stacked blocks to triplets
  Selection dup;         // 9n^2 x 3n(n+1)
  Selection pick;        // 3n(n+1) x (3n+1)^2

  Index size() const { return dup.cols; }
  Matrix compress(const Matrix& delta) const;
};

VandermondeCompression vandermonde_compression(Index n);

}  // namespace rmep
