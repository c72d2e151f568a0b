#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical failure of a solver (singular operator family, staircase
/// breakdown, unstabilized nullspace, ...). Input-contract violations throw
/// std::invalid_argument instead.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerances shared by the solvers. Every rank or cluster decision is made
/// relative to the largest singular value (or eigenvalue magnitude) of the
/// matrix at hand, never against an absolute scale.
struct ToleranceConfig {
  double rank_tol = 1e-10;    ///< acceptance threshold of rank_drop_test
  double stair_tol = 1e-10;   ///< rank decisions inside the staircase deflation
  double cluster_tol = 1e-8;  ///< grouping of repeated eigenvalues in the joint solve
  /// Replace the staircase deflation by solving a randomly perturbed
  /// nonsingular family and filtering candidates through rank_drop_test.
  bool perturb_fallback = false;
  double perturb_eps = 1e-8;
};

/// One eigenvalue tuple (lambda_1, ..., lambda_k). residual and vector are
/// filled by solvers that hold a rectangular pencil to evaluate:
/// residual = sigma_min(M(lambda)) / ||M(lambda)||_2 and vector is the
/// corresponding right singular vector.
struct Eigenvalue {
  Vector lambda;
  double residual = std::numeric_limits<double>::quiet_NaN();
  Vector vector;
};

struct EigSet {
  std::vector<Eigenvalue> tuples;

  Index size() const { return static_cast<Index>(tuples.size()); }
  bool empty() const { return tuples.empty(); }
  void push(Vector lambda, double residual = std::numeric_limits<double>::quiet_NaN(),
            Vector vector = {});

  /// Orders tuples by (Re l1, Im l1, Re l2, Im l2, ...).
  void sort_lex();
};

/// True when every component has |Im| < tol * (1 + |Re|).
bool is_real_tuple(const Vector& lambda, double tol = 1e-8);

/// Greedy nearest-neighbour matching of two tuple sets under the relative
/// threshold tol * (1 + |lambda|), component-wise on the max norm. Returns
/// true when the sets match one-to-one.
bool match_eigsets(const EigSet& a, const EigSet& b, double tol = 1e-6);

/// Distance helper used by match_eigsets: max_i |a_i - b_i|.
double tuple_distance(const Vector& a, const Vector& b);

}  // namespace rmep
