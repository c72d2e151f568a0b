#include "rmep/types.hpp"

#include <algorithm>
#include <cmath>

namespace rmep {

void EigSet::push(Vector lambda, double residual, Vector vector) {
  tuples.push_back(Eigenvalue{std::move(lambda), residual, std::move(vector)});
}

void EigSet::sort_lex() {
  std::sort(tuples.begin(), tuples.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    const Index na = a.lambda.size(), nb = b.lambda.size();
    for (Index i = 0; i < std::min(na, nb); ++i) {
      if (a.lambda[i].real() != b.lambda[i].real()) return a.lambda[i].real() < b.lambda[i].real();
      if (a.lambda[i].imag() != b.lambda[i].imag()) return a.lambda[i].imag() < b.lambda[i].imag();
    }
    return na < nb;
  });
}

bool is_real_tuple(const Vector& lambda, double tol) {
  for (Index i = 0; i < lambda.size(); ++i)
    if (std::abs(lambda[i].imag()) >= tol * (1.0 + std::abs(lambda[i].real()))) return false;
  return true;
}

double tuple_distance(const Vector& a, const Vector& b) {
  double d = 0.0;
  for (Index i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool match_eigsets(const EigSet& a, const EigSet& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.tuples.size(), false);
  for (const Eigenvalue& ea : a.tuples) {
    double best = std::numeric_limits<double>::infinity();
    Index pick = -1;
    for (Index j = 0; j < b.size(); ++j) {
      if (used[j] || b.tuples[j].lambda.size() != ea.lambda.size()) continue;
      const double d = tuple_distance(ea.lambda, b.tuples[j].lambda);
      if (d < best) best = d, pick = j;
    }
    if (pick < 0 || best >= tol * (1.0 + ea.lambda.cwiseAbs().maxCoeff())) return false;
    used[pick] = true;
  }
  return true;
}

}  // namespace rmep
