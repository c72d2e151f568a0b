#include "rmep/pencil.hpp"

#include "backend.hpp"

#include <cmath>

namespace rmep {

void RectPencil::add_term(std::vector<int> w, Matrix a) {
  if (static_cast<int>(w.size()) != k)
    throw std::invalid_argument("RectPencil: exponent length != k");
  int total = 0;
  for (int e : w) {
    if (e < 0) throw std::invalid_argument("RectPencil: negative exponent");
    total += e;
  }
  if (total > degree) throw std::invalid_argument("RectPencil: exponent exceeds degree");
  if (!terms.empty() && (a.rows() != rows() || a.cols() != cols()))
    throw std::invalid_argument("RectPencil: coefficient size mismatch");
  terms[std::move(w)] = std::move(a);
}

Matrix RectPencil::term_or_zero(const std::vector<int>& w) const {
  auto it = terms.find(w);
  return it == terms.end() ? Matrix::Zero(rows(), cols()).eval() : it->second;
}

Matrix RectPencil::linear_coeff(int i) const {
  if (i < 0 || i > k)
    throw std::invalid_argument("RectPencil::linear_coeff: index out of range");
  std::vector<int> w(k, 0);
  if (i > 0) w[i - 1] = 1;
  return term_or_zero(w);
}

RectPencil RectPencil::linear(Matrix a, std::vector<Matrix> bs) {
  RectPencil p;
  p.k = static_cast<int>(bs.size());
  p.degree = 1;
  p.add_term(std::vector<int>(p.k, 0), std::move(a));
  for (int i = 0; i < p.k; ++i) {
    std::vector<int> w(p.k, 0);
    w[i] = 1;
    p.add_term(std::move(w), std::move(bs[i]));
  }
  return p;
}

Matrix RectPencil::eval(const Vector& lambda) const {
  if (lambda.size() != k) throw std::invalid_argument("RectPencil::eval: wrong tuple length");
  for (Index i = 0; i < lambda.size(); ++i)
    if (!std::isfinite(lambda[i].real()) || !std::isfinite(lambda[i].imag()))
      throw std::invalid_argument("RectPencil::eval: non-finite component");
  Matrix m = Matrix::Zero(rows(), cols());
  for (const auto& [w, a] : terms) {
    Complex c(1.0, 0.0);
    for (int i = 0; i < k; ++i)
      for (int e = 0; e < w[i]; ++e) c *= lambda[i];
    m += c * a;
  }
  return m;
}

RankDropResult rank_drop_test(const RectPencil& pencil, const Vector& lambda,
                              const ToleranceConfig& cfg) {
  const Matrix m = pencil.eval(lambda);
  if (m.rows() < m.cols())
    throw std::invalid_argument("rank_drop_test: pencil must have rows >= cols");
  RankDropResult out;
  const detail::Svd svd = detail::svd_complex(m, false, true);
  const Index nc = m.cols();
  if (nc == 0 || svd.s[0] <= 0.0) {
    out.accepted = false;
    out.residual = 0.0;
    return out;
  }
  double scale = svd.s[0];
  if (nc == 1) {
    // A single column has no interior singular value to compare against, so
    // a rank drop means the evaluated column itself vanishes relative to the
    // coefficient magnitudes at this tuple.
    scale = 0.0;
    for (const auto& [w, a] : pencil.terms) {
      double c = 1.0;
      for (int i = 0; i < pencil.k; ++i)
        for (int e = 0; e < w[i]; ++e) c *= std::abs(lambda[i]);
      scale += c * a.norm();
    }
    if (scale <= 0.0) scale = 1.0;
  }
  out.residual = svd.s[nc - 1] / scale;
  out.accepted = out.residual < cfg.rank_tol;
  out.vector = svd.v.col(nc - 1);
  return out;
}

Vector polish_eigenvalue(const RectPencil& pencil, const Vector& lambda) {
  const Index nc = pencil.cols();
  if (pencil.k <= 0 || nc == 0 || pencil.rows() < nc || lambda.size() != pencil.k) return lambda;

  const double radius = 1e-3 * (1.0 + lambda.lpNorm<Eigen::Infinity>());
  Vector best = lambda;
  double best_res = rank_drop_test(pencil, lambda).residual;

  Vector cur = lambda;
  Vector x = rank_drop_test(pencil, cur).vector;
  for (int iter = 0; iter < 4 && x.size() == nc; ++iter) {
    Matrix jac = Matrix::Zero(pencil.rows(), pencil.k);
    for (const auto& [w, a] : pencil.terms)
      for (int i = 0; i < pencil.k; ++i) {
        if (w[i] == 0) continue;
        Complex c(static_cast<double>(w[i]), 0.0);
        for (int j = 0; j < pencil.k; ++j)
          for (int e = 0; e < w[j] - (j == i ? 1 : 0); ++e) c *= cur[j];
        jac.col(i) += c * (a * x);
      }
    const Vector rhs = -(pencil.eval(cur) * x);
    const Vector delta = jac.completeOrthogonalDecomposition().solve(rhs);
    if (!delta.allFinite()) break;
    cur += delta;
    // A step that leaves the neighbourhood means the candidate was not an
    // eigenvalue to begin with; keep it recognizable as such.
    if ((cur - lambda).lpNorm<Eigen::Infinity>() > radius) break;
    const RankDropResult rd = rank_drop_test(pencil, cur);
    if (rd.residual < best_res) {
      best = cur;
      best_res = rd.residual;
    }
    x = rd.vector;
    if (delta.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + cur.lpNorm<Eigen::Infinity>())) break;
  }
  return best;
}

}  // namespace rmep
