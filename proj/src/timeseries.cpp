#include "rmep/timeseries.hpp"

#include "rmep/pencil.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace rmep {

namespace {

void check_series(const TimeSeries& ts, Index min_size, const char* where) {
  if (ts.size() < min_size)
    throw std::invalid_argument(std::string(where) + ": series too short");
  if (ts.y.size() > 0 && !ts.y.allFinite())
    throw std::invalid_argument(std::string(where) + ": series must be finite");
}

RealMatrix banded_ones(Index n, Index offset) {
  RealMatrix out = RealMatrix::Zero(n, n);
  for (Index i = 0; i + offset < n; ++i) {
    out(i, i + offset) = 1.0;
    out(i + offset, i) = 1.0;
  }
  return out;
}

struct BlockLayout {
  Index q = 0;  ///< width of the repeated blocks
  Index rows() const { return 3 * q + 2; }
  Index cols() const { return 3 * q + 1; }
  Index rb(int i) const { return i < 3 ? i * q : 3 * q + (i - 3); }
  Index rh(int i) const { return i < 3 ? q : 1; }
  Index cb(int i) const { return i == 0 ? 0 : 1 + (i - 1) * q; }
  Index cw(int i) const { return i == 0 ? 1 : q; }
};

class BlockWriter {
 public:
  explicit BlockWriter(const BlockLayout& layout)
      : layout_(layout), data_(RealMatrix::Zero(layout.rows(), layout.cols())) {}

  void put(int i, int j, const RealMatrix& block) {
    data_.block(layout_.rb(i), layout_.cb(j), layout_.rh(i), layout_.cw(j)) = block;
  }

  Matrix take() const { return data_.cast<Complex>(); }

 private:
  BlockLayout layout_;
  RealMatrix data_;
};

void check_rect_family(const std::vector<Matrix>& coeffs, Index overshoot,
                       const char* where) {
  if (coeffs.empty()) throw std::invalid_argument(std::string(where) + ": no coefficients");
  const Index rows = coeffs[0].rows();
  const Index cols = coeffs[0].cols();
  if (cols < 1 || rows != cols + overshoot)
    throw std::invalid_argument(std::string(where) + ": unexpected coefficient shape");
  for (const Matrix& c : coeffs) {
    if (c.rows() != rows || c.cols() != cols)
      throw std::invalid_argument(std::string(where) + ": coefficient sizes differ");
    if (!c.allFinite())
      throw std::invalid_argument(std::string(where) + ": coefficients must be finite");
  }
}

/// The 2x2 pencil [g x; 1 g] in the slot of parameters (g, x) of a larger
/// tuple; it is singular exactly when x = g^2, with kernel [g, -1].
std::vector<Matrix> square_relation_pencil(int params, int g_slot, int x_slot) {
  std::vector<Matrix> eq(static_cast<std::size_t>(params) + 1, Matrix::Zero(2, 2));
  eq[0](1, 0) = 1.0;
  eq[static_cast<std::size_t>(g_slot) + 1] = Matrix::Identity(2, 2);
  eq[static_cast<std::size_t>(x_slot) + 1](0, 1) = 1.0;
  return eq;
}

ModelSolveResult finish_two_parameter_model(
    const MixedSystem& sys, const std::vector<AuxiliaryRelation>& relations,
    const RectPencil& original, const std::function<double(double, double)>& objective,
    const std::function<bool(double, double)>& admissible, const ToleranceConfig& cfg,
    std::uint64_t seed) {
  ModelSolveResult out;
  const EigSet full = solve_mixed_compressed(sys, relations, cfg, seed, &out.stats);

  for (const Eigenvalue& t : full.tuples) {
    Vector pair(2);
    pair << t.lambda[0], t.lambda[1];
    const RankDropResult rd = rank_drop_test(original, pair, cfg);
    out.eigenvalues.push(pair, rd.residual, rd.vector);
  }
  out.eigenvalues.sort_lex();

  for (const Eigenvalue& t : out.eigenvalues.tuples) {
    if (!is_real_tuple(t.lambda)) continue;
    const double x = t.lambda[0].real();
    const double y = t.lambda[1].real();
    StationaryPoint p;
    p.params = RealVector(2);
    p.params << x, y;
    p.objective = objective(x, y);
    p.kind = classify_stationary(objective, x, y);
    p.admissible = admissible(x, y);
    p.residual = t.residual;
    out.stationary.push_back(std::move(p));
  }
  std::stable_sort(out.stationary.begin(), out.stationary.end(),
                   [](const StationaryPoint& a, const StationaryPoint& b) {
                     return a.objective < b.objective;
                   });
  for (std::size_t i = 0; i < out.stationary.size(); ++i) {
    if (out.stationary[i].admissible &&
        out.stationary[i].kind == StationaryKind::local_min) {
      out.global_min = static_cast<Index>(i);
      break;
    }
  }
  return out;
}

}  // namespace

std::string to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::local_min:
      return "local-min";
    case StationaryKind::local_max:
      return "local-max";
    case StationaryKind::saddle:
      return "saddle";
    case StationaryKind::degenerate:
      return "degenerate";
  }
  return "degenerate";
}

Arma11Matrices build_arma11(const TimeSeries& ts) {
  check_series(ts, 3, "build_arma11");
  const Index w = ts.size() - 1;
  const RealVector y1 = ts.y.head(w);
  const RealVector y2 = ts.y.tail(w);
  const RealMatrix r = banded_ones(w, 1);
  const RealMatrix id = RealMatrix::Identity(w, w);
  const BlockLayout layout{w};

  BlockWriter a00(layout);
  a00.put(0, 0, y2);
  a00.put(0, 1, id);
  a00.put(1, 0, y1);
  a00.put(1, 2, id);
  a00.put(2, 1, r);
  a00.put(2, 3, id);
  a00.put(3, 1, y1.transpose());
  a00.put(3, 2, y2.transpose());
  a00.put(4, 3, y2.transpose());

  BlockWriter a10(layout);
  a10.put(0, 0, y1);
  a10.put(3, 2, y1.transpose());
  a10.put(4, 3, y1.transpose());

  BlockWriter a01(layout);
  a01.put(0, 1, r);
  a01.put(1, 2, r);
  a01.put(2, 1, 2.0 * id);
  a01.put(2, 3, r);

  BlockWriter a02(layout);
  a02.put(0, 1, id);
  a02.put(1, 2, id);
  a02.put(2, 3, id);

  return {a00.take(), a10.take(), a01.take(), a02.take()};
}

MixedSystem arma11_system(const Arma11Matrices& m) {
  std::vector<Matrix> rect = {m.a00, m.a10, m.a01, m.a02};
  check_rect_family(rect, 1, "arma11_system");
  MixedSystem sys;
  sys.squares.push_back(square_relation_pencil(3, 1, 2));
  sys.rect = std::move(rect);
  sys.repeats = 2;
  return sys;
}

double arma11_objective(const TimeSeries& ts, double alpha, double gamma) {
  check_series(ts, 1, "arma11_objective");
  if (!std::isfinite(alpha) || !std::isfinite(gamma))
    throw std::invalid_argument("arma11_objective: parameters must be finite");
  const Index n = ts.size();
  if (n < 2) return 0.0;
  RealMatrix c = RealMatrix::Zero(n - 1, n);
  RealVector b(n - 1);
  for (Index j = 0; j < n - 1; ++j) {
    c(j, j) = gamma;
    c(j, j + 1) = 1.0;
    b(j) = ts.y(j + 1) + alpha * ts.y(j);
  }
  const RealVector e = c.completeOrthogonalDecomposition().solve(b);
  return e.squaredNorm();
}

ModelSolveResult solve_arma11(const TimeSeries& ts, const ToleranceConfig& cfg,
                              std::uint64_t seed) {
  check_series(ts, 4, "solve_arma11");
  const Arma11Matrices m = build_arma11(ts);

  std::vector<AuxiliaryRelation> relations(1);
  relations[0].param = 2;
  relations[0].expected = [](const Vector& l) { return l[1] * l[1]; };

  RectPencil quad;
  quad.k = 2;
  quad.degree = 2;
  quad.add_term({0, 0}, m.a00);
  quad.add_term({1, 0}, m.a10);
  quad.add_term({0, 1}, m.a01);
  quad.add_term({0, 2}, m.a02);

  const auto objective = [&ts](double alpha, double gamma) {
    return arma11_objective(ts, alpha, gamma);
  };
  const auto admissible = [](double alpha, double gamma) {
    return std::abs(alpha) < 1.0 && std::abs(gamma) < 1.0;
  };
  return finish_two_parameter_model(arma11_system(m), relations, quad, objective,
                                    admissible, cfg, seed);
}

Lti2Matrices build_lti2(const TimeSeries& ts) {
  check_series(ts, 4, "build_lti2");
  const Index q = ts.size() - 2;
  const RealVector y1 = ts.y.segment(0, q);
  const RealVector y2 = ts.y.segment(1, q);
  const RealVector y3 = ts.y.segment(2, q);
  const RealMatrix r = banded_ones(q, 1);
  const RealMatrix s = banded_ones(q, 2);
  const RealMatrix id = RealMatrix::Identity(q, q);
  const BlockLayout layout{q};

  BlockWriter a00(layout);
  a00.put(0, 0, y3);
  a00.put(0, 1, id);
  a00.put(1, 0, y2);
  a00.put(1, 1, r);
  a00.put(1, 2, id);
  a00.put(2, 0, y1);
  a00.put(2, 1, s);
  a00.put(2, 3, id);
  a00.put(3, 1, y2.transpose());
  a00.put(3, 2, y3.transpose());
  a00.put(4, 1, y1.transpose());
  a00.put(4, 3, y3.transpose());

  BlockWriter a10(layout);
  a10.put(0, 0, y2);
  a10.put(0, 1, r);
  a10.put(1, 1, 2.0 * id);
  a10.put(1, 2, r);
  a10.put(2, 1, r);
  a10.put(2, 3, r);
  a10.put(3, 2, y2.transpose());
  a10.put(4, 3, y2.transpose());

  BlockWriter a01(layout);
  a01.put(0, 0, y1);
  a01.put(0, 1, s);
  a01.put(1, 1, r);
  a01.put(1, 2, s);
  a01.put(2, 1, 2.0 * id);
  a01.put(2, 3, s);
  a01.put(3, 2, y1.transpose());
  a01.put(4, 3, y1.transpose());

  BlockWriter a20(layout);
  a20.put(0, 1, id);
  a20.put(1, 2, id);
  a20.put(2, 3, id);

  RealMatrix shift = RealMatrix::Zero(layout.cols(), layout.cols());
  for (int block = 0; block < 3; ++block) shift.block(1 + block * q, 1 + block * q, q, q) = r;

  Lti2Matrices out;
  out.a00 = a00.take();
  out.a10 = a10.take();
  out.a01 = a01.take();
  out.a20 = a20.take();
  out.a02 = out.a20;
  out.a11 = out.a02 * shift.cast<Complex>();
  return out;
}

MixedSystem lti2_system(const Lti2Matrices& m) {
  std::vector<Matrix> rect = {m.a00, m.a10, m.a01, m.a11, m.a20};
  check_rect_family(rect, 1, "lti2_system");
  if (m.a02.rows() != m.a20.rows() || m.a02.cols() != m.a20.cols() ||
      (m.a02 - m.a20).squaredNorm() != 0.0)
    throw std::invalid_argument("lti2_system: quadratic coefficients must coincide");

  // W1(a1, a2, xi1) = [a1 xi1; 1 a2] is singular exactly when xi1 = a1 a2;
  // W2(a1 + a2, 2 xi1 + xi2) is singular exactly when xi2 = a1^2 + a2^2.
  std::vector<Matrix> w1(5, Matrix::Zero(2, 2));
  w1[0](1, 0) = 1.0;
  w1[1](0, 0) = 1.0;
  w1[2](1, 1) = 1.0;
  w1[3](0, 1) = 1.0;

  std::vector<Matrix> w2(5, Matrix::Zero(2, 2));
  w2[0](1, 0) = 1.0;
  w2[1] = Matrix::Identity(2, 2);
  w2[2] = Matrix::Identity(2, 2);
  w2[3](0, 1) = 2.0;
  w2[4](0, 1) = 1.0;

  MixedSystem sys;
  sys.squares = {std::move(w1), std::move(w2)};
  sys.rect = std::move(rect);
  sys.repeats = 2;
  return sys;
}

double lti2_objective(const TimeSeries& ts, double a1, double a2) {
  check_series(ts, 1, "lti2_objective");
  if (!std::isfinite(a1) || !std::isfinite(a2))
    throw std::invalid_argument("lti2_objective: parameters must be finite");
  const Index n = ts.size();
  if (n < 3) return 0.0;
  RealMatrix d = RealMatrix::Zero(n - 2, n);
  for (Index j = 0; j < n - 2; ++j) {
    d(j, j) = a2;
    d(j, j + 1) = a1;
    d(j, j + 2) = 1.0;
  }
  const Eigen::HouseholderQR<RealMatrix> qr(d.transpose());
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, n - 2);
  return (q.transpose() * ts.y).squaredNorm();
}

ModelSolveResult solve_lti2(const TimeSeries& ts, const ToleranceConfig& cfg,
                            std::uint64_t seed) {
  check_series(ts, 4, "solve_lti2");
  const Lti2Matrices m = build_lti2(ts);

  std::vector<AuxiliaryRelation> relations(2);
  relations[0].param = 2;
  relations[0].expected = [](const Vector& l) { return l[0] * l[1]; };
  relations[1].param = 3;
  relations[1].expected = [](const Vector& l) { return l[0] * l[0] + l[1] * l[1]; };

  const QuadR2EP quad{m.a00, m.a10, m.a01, m.a20, m.a11, m.a02};

  const auto objective = [&ts](double a1, double a2) { return lti2_objective(ts, a1, a2); };
  const auto admissible = [](double a1, double a2) {
    return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
  };
  return finish_two_parameter_model(lti2_system(m), relations, quad.pencil(), objective,
                                    admissible, cfg, seed);
}

MixedSystem arma21_system(const std::vector<Matrix>& coeffs) {
  if (coeffs.size() != 5)
    throw std::invalid_argument(
        "arma21_system: expected coefficients {A000, A100, A010, A001, A002}");
  check_rect_family(coeffs, 2, "arma21_system");
  MixedSystem sys;
  sys.squares.push_back(square_relation_pencil(4, 2, 3));
  sys.rect = coeffs;
  sys.repeats = 3;
  return sys;
}

EigSet solve_arma21_pipeline(const std::vector<Matrix>& coeffs, const ToleranceConfig& cfg,
                             std::uint64_t seed, MixedSolveStats* stats) {
  const MixedSystem sys = arma21_system(coeffs);

  std::vector<AuxiliaryRelation> relations(1);
  relations[0].param = 3;
  relations[0].expected = [](const Vector& l) { return l[2] * l[2]; };

  const EigSet full = solve_mixed_compressed(sys, relations, cfg, seed, stats);

  RectPencil quad;
  quad.k = 3;
  quad.degree = 2;
  quad.add_term({0, 0, 0}, coeffs[0]);
  quad.add_term({1, 0, 0}, coeffs[1]);
  quad.add_term({0, 1, 0}, coeffs[2]);
  quad.add_term({0, 0, 1}, coeffs[3]);
  quad.add_term({0, 0, 2}, coeffs[4]);

  EigSet out;
  for (const Eigenvalue& t : full.tuples) {
    Vector triple(3);
    triple << t.lambda[0], t.lambda[1], t.lambda[2];
    const RankDropResult rd = rank_drop_test(quad, triple, cfg);
    out.push(triple, rd.residual, rd.vector);
  }
  out.sort_lex();
  return out;
}

StationaryKind classify_stationary(const std::function<double(double, double)>& f,
                                   double x, double y, double h) {
  if (!f) throw std::invalid_argument("classify_stationary: missing objective");
  if (!(h > 0.0)) throw std::invalid_argument("classify_stationary: step must be positive");
  const double f00 = f(x, y);
  const double fpx = f(x + h, y);
  const double fmx = f(x - h, y);
  const double fpy = f(x, y + h);
  const double fmy = f(x, y - h);
  const double fpp = f(x + h, y + h);
  const double fpm = f(x + h, y - h);
  const double fmp = f(x - h, y + h);
  const double fmm = f(x - h, y - h);

  const double gx = (fpx - fmx) / (2.0 * h);
  const double gy = (fpy - fmy) / (2.0 * h);
  if (std::hypot(gx, gy) > 1e-3 * (1.0 + std::abs(f00))) return StationaryKind::degenerate;

  const double hxx = (fpx - 2.0 * f00 + fmx) / (h * h);
  const double hyy = (fpy - 2.0 * f00 + fmy) / (h * h);
  const double hxy = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
  const double det = hxx * hyy - hxy * hxy;
  const double scale = hxx * hxx + 2.0 * hxy * hxy + hyy * hyy;
  if (std::abs(det) <= 1e-6 * scale) return StationaryKind::degenerate;
  if (det < 0.0) return StationaryKind::saddle;
  return hxx > 0.0 ? StationaryKind::local_min : StationaryKind::local_max;
}

RealMatrix contour_grid(const std::function<double(double, double)>& f, double x_lo,
                        double x_hi, double y_lo, double y_hi, Index steps) {
  if (!f) throw std::invalid_argument("contour_grid: missing objective");
  if (steps < 2) throw std::invalid_argument("contour_grid: need at least two samples per axis");
  RealMatrix grid(steps, steps);
  for (Index i = 0; i < steps; ++i) {
    const double x = x_lo + static_cast<double>(i) * (x_hi - x_lo) / static_cast<double>(steps - 1);
    for (Index j = 0; j < steps; ++j) {
      const double y = y_lo + static_cast<double>(j) * (y_hi - y_lo) / static_cast<double>(steps - 1);
      grid(i, j) = f(x, y);
    }
  }
  return grid;
}

}  // namespace rmep
