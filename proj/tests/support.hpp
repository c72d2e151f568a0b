#pragma once

#include <random>
#include <vector>

#include "rmep/types.hpp"

namespace testutil {

inline std::mt19937_64 seeded(std::uint64_t seed) { return std::mt19937_64(seed); }

inline rmep::Matrix random_complex(std::mt19937_64& rng, rmep::Index rows, rmep::Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  rmep::Matrix m(rows, cols);
  for (rmep::Index j = 0; j < cols; ++j)
    for (rmep::Index i = 0; i < rows; ++i) m(i, j) = rmep::Complex(dist(rng), dist(rng));
  return m;
}

inline rmep::Matrix random_real(std::mt19937_64& rng, rmep::Index rows, rmep::Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  rmep::Matrix m(rows, cols);
  for (rmep::Index j = 0; j < cols; ++j)
    for (rmep::Index i = 0; i < rows; ++i) m(i, j) = rmep::Complex(dist(rng), 0.0);
  return m;
}

inline rmep::RealVector random_series(std::mt19937_64& rng, rmep::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  rmep::RealVector y(n);
  for (rmep::Index i = 0; i < n; ++i) y(i) = dist(rng);
  return y;
}

inline rmep::Matrix random_unitary(std::mt19937_64& rng, rmep::Index n) {
  rmep::Matrix g = random_complex(rng, n, n);
  Eigen::HouseholderQR<rmep::Matrix> qr(g);
  rmep::Matrix q = qr.householderQ() * rmep::Matrix::Identity(n, n);
  rmep::Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (rmep::Index j = 0; j < n; ++j) {
    const rmep::Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline rmep::Vector tuple2(rmep::Complex a, rmep::Complex b) {
  rmep::Vector v(2);
  v << a, b;
  return v;
}

inline bool contains_tuple(const rmep::EigSet& set, const rmep::Vector& want, double abs_tol) {
  for (const auto& e : set.tuples)
    if (rmep::tuple_distance(e.lambda, want) <= abs_tol) return true;
  return false;
}

// Greedy multiset matcher with an absolute per-component tolerance.
inline bool multiset_within(const rmep::EigSet& got, const std::vector<rmep::Vector>& want,
                            double abs_tol) {
  if (got.size() != static_cast<rmep::Index>(want.size())) return false;
  std::vector<bool> used(want.size(), false);
  for (const auto& e : got.tuples) {
    bool matched = false;
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (used[i]) continue;
      if (rmep::tuple_distance(e.lambda, want[i]) <= abs_tol) {
        used[i] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace testutil
