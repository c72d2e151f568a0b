#pragma once

#include "rmep/mep.hpp"
#include "rmep/poly_rmep.hpp"
#include "rmep/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rmep {

/// Real observations y_0, ..., y_{N-1}.
struct TimeSeries {
  RealVector y;

  Index size() const { return y.size(); }
};

enum class StationaryKind { local_min, local_max, saddle, degenerate };

std::string to_string(StationaryKind kind);

/// A real critical point of a model objective. Inadmissible points are kept
/// and flagged; the caller decides what to discard.
struct StationaryPoint {
  RealVector params;
  double objective = 0.0;
  StationaryKind kind = StationaryKind::degenerate;
  bool admissible = false;
  double residual = 0.0;
};

/// Full output of a model solve: every eigenvalue tuple of the underlying
/// rectangular problem, the real ones classified as stationary points of the
/// objective, and the index of the best admissible local minimum.
struct ModelSolveResult {
  EigSet eigenvalues;
  std::vector<StationaryPoint> stationary;  ///< sorted by objective, ascending
  MixedSolveStats stats;
  Index global_min = -1;  ///< index into stationary, -1 when absent
};

/// Coefficients of the ARMA(1,1) optimality system
/// (A00 + alpha A10 + gamma A01 + gamma^2 A02) x = 0
/// of size (3N-1) x (3N-2) built from N observations.
struct Arma11Matrices {
  Matrix a00, a10, a01, a02;
};

/// Assembles the ARMA(1,1) optimality matrices. Requires N >= 3 and finite
/// data.
Arma11Matrices build_arma11(const TimeSeries& ts);

/// The ARMA(1,1) system as a mixed problem in (alpha, gamma, xi) with the
/// 2x2 auxiliary pencil [gamma xi; 1 gamma] enforcing xi = gamma^2 and the
/// rectangular equation repeated twice.
MixedSystem arma11_system(const Arma11Matrices& m);

/// Smallest squared error norm ||e||^2 over residual sequences e compatible
/// with the ARMA(1,1) recurrence at parameters (alpha, gamma): the minimum
/// norm solution of the N-1 equations gamma e_j + e_{j+1} = y_{j+1} + alpha
/// y_j in N unknowns.
double arma11_objective(const TimeSeries& ts, double alpha, double gamma);

/// All eigenvalue tuples (alpha, gamma) of the ARMA(1,1) problem, with the
/// real ones classified against the objective. Requires N >= 4.
ModelSolveResult solve_arma11(const TimeSeries& ts, const ToleranceConfig& cfg = {},
                              std::uint64_t seed = 0x9e3779b97f4a7c15ull);

/// Coefficients of the LTI(2) optimality system
/// (A00 + a1 A10 + a2 A01 + a1^2 A20 + a1 a2 A11 + a2^2 A02) x = 0
/// of size (3N-4) x (3N-5). A20 and A02 coincide for this model.
struct Lti2Matrices {
  Matrix a00, a10, a01, a20, a11, a02;
};

/// Assembles the LTI(2) optimality matrices. Requires N >= 4 and finite
/// data.
Lti2Matrices build_lti2(const TimeSeries& ts);

/// The LTI(2) system as a mixed problem in (a1, a2, xi1, xi2) with two 2x2
/// auxiliary pencils enforcing xi1 = a1 a2 and xi2 = a1^2 + a2^2, and the
/// rectangular equation repeated twice.
MixedSystem lti2_system(const Lti2Matrices& m);

/// Squared distance from y to the closest sequence annihilated by the
/// recurrence yhat_{j+2} + a1 yhat_{j+1} + a2 yhat_j = 0.
double lti2_objective(const TimeSeries& ts, double a1, double a2);

/// All eigenvalue tuples (a1, a2) of the LTI(2) problem, with the real ones
/// classified against the objective. Requires N >= 4.
ModelSolveResult solve_lti2(const TimeSeries& ts, const ToleranceConfig& cfg = {},
                            std::uint64_t seed = 0x9e3779b97f4a7c15ull);

/// The ARMA(2,1) system as a mixed problem in (alpha1, alpha2, gamma, xi)
/// from user supplied coefficients {A000, A100, A010, A001, A002} of size
/// (n+2) x n, with the auxiliary pencil enforcing xi = gamma^2 and the
/// rectangular equation repeated three times.
MixedSystem arma21_system(const std::vector<Matrix>& coeffs);

/// Eigenvalue triples (alpha1, alpha2, gamma) of the ARMA(2,1) system; the
/// residuals come from the rank drop test on the quadratic pencil
/// A000 + alpha1 A100 + alpha2 A010 + gamma A001 + gamma^2 A002.
EigSet solve_arma21_pipeline(const std::vector<Matrix>& coeffs,
                             const ToleranceConfig& cfg = {},
                             std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                             MixedSolveStats* stats = nullptr);

/// Classifies (x, y) as a stationary point of f by central differences with
/// step h: degenerate when the gradient is not small or the Hessian is
/// numerically singular, otherwise by the Hessian eigenvalue signs.
StationaryKind classify_stationary(const std::function<double(double, double)>& f,
                                   double x, double y, double h = 1e-4);

/// Samples f on a steps x steps grid over [x_lo, x_hi] x [y_lo, y_hi];
/// entry (i, j) holds f(x_i, y_j). Requires steps >= 2.
RealMatrix contour_grid(const std::function<double(double, double)>& f, double x_lo,
                        double x_hi, double y_lo, double y_hi, Index steps);

}  // namespace rmep
