#pragma once

#include "rmep/mep.hpp"
#include "rmep/pencil.hpp"
#include "rmep/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rmep {

/// Quadratic two-parameter family
/// Q(l, m) = a00 + l a10 + m a01 + l^2 a20 + l m a11 + m^2 a02
/// with all coefficients of size (n+1) x n.
struct QuadR2EP {
  Matrix a00, a10, a01, a20, a11, a02;

  Index rows() const { return a00.rows(); }
  Index cols() const { return a00.cols(); }

  /// Q as a degree-2 RectPencil in two parameters.
  RectPencil pencil() const;
};

/// Companion linearization of Q: a linear two-parameter family of size
/// (3n+1) x 3n with the same finite eigenvalues, eigenvector [x; l x; m x].
RectPencil quad_linearization(const QuadR2EP& q);

/// Projects Q to two square quadratic problems, linearizes each and extracts
/// the joint spectrum of the resulting operator determinants.  Candidates
/// failing the rank-drop test on Q land in rejected when given.  Random
/// projections are drawn from seed, with up to three redraws if the
/// projected problem degenerates.
EigSet solve_quadratic_projected(const QuadR2EP& q, const ToleranceConfig& cfg = {},
                                 std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                                 EigSet* rejected = nullptr);

/// Runs the compressed linear solver on the rectangular linearization, whose
/// operator determinants shrink to 3n(3n+1)/2, then keeps the tuples that
/// drop rank of Q itself.
EigSet solve_quadratic_linearized(const QuadR2EP& q, const ToleranceConfig& cfg = {},
                                  std::uint64_t seed = 0x9e3779b97f4a7c15ull);

/// Compresses the operator determinants of the rectangular linearization to
/// size 3n(n+1) using the structure of the linearization variable, solves
/// the compressed family and keeps the tuples that drop rank of Q.
EigSet solve_quadratic_vandermonde(const QuadR2EP& q, const ToleranceConfig& cfg = {},
                                   std::uint64_t seed = 0x9e3779b97f4a7c15ull);

/// Ties an auxiliary coordinate of an eigenvalue tuple to a value computed
/// from the tuple, e.g. lambda[2] = lambda[1]^2 for a squared parameter.
struct AuxiliaryRelation {
  int param = 0;
  std::function<Complex(const Vector&)> expected;
};

struct MixedSolveStats {
  Index compressed_size = 0;
  Index candidates = 0;
  Index dropped_inconsistent = 0;
};

/// Operator determinants of a mixed system with the r-fold rectangular
/// Kronecker factor compressed to size binom(n+r-1, r); assembled term by
/// term, the n^r blowup is never materialized.
std::vector<Matrix> mixed_compressed_deltas(const MixedSystem& sys);

/// Staircase extraction on the compressed determinants followed by the
/// auxiliary-consistency filter (|lambda[param] - expected| within
/// relation_tol * (1 + |expected|)).  Residuals and vectors come from the
/// rank-drop test on the rectangular equation.
EigSet solve_mixed_compressed(const MixedSystem& sys,
                              const std::vector<AuxiliaryRelation>& relations,
                              const ToleranceConfig& cfg = {},
                              std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                              MixedSolveStats* stats = nullptr,
                              double relation_tol = 1e-5);

}  // namespace rmep
