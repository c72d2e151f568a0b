#include "rmep/poly_rmep.hpp"

#include "rmep/compress.hpp"
#include "rmep/linear_rmep.hpp"
#include "rmep/staircase.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rmep {

namespace {

void check_quad(const QuadR2EP& q) {
  const Index n = q.a00.cols();
  if (n < 1 || q.a00.rows() != n + 1)
    throw std::invalid_argument("quadratic solver: coefficients must be (n+1) x n");
  for (const Matrix* c : {&q.a10, &q.a01, &q.a20, &q.a11, &q.a02})
    if (c->rows() != n + 1 || c->cols() != n)
      throw std::invalid_argument("quadratic solver: coefficient size mismatch");
}

/// [A, B1, B2] of the companion linearization; the top block row keeps the
/// height of the given coefficients, identity rows tie y = l x and w = m x.
std::vector<Matrix> linearization_blocks(const Matrix& c00, const Matrix& c10,
                                         const Matrix& c01, const Matrix& c20,
                                         const Matrix& c11, const Matrix& c02) {
  const Index n = c00.cols();
  const Index top = c00.rows();
  const Index rows = top + 2 * n;
  const Matrix id = Matrix::Identity(n, n);
  Matrix a = Matrix::Zero(rows, 3 * n);
  Matrix b1 = Matrix::Zero(rows, 3 * n);
  Matrix b2 = Matrix::Zero(rows, 3 * n);
  a.block(0, 0, top, n) = c00;
  a.block(0, n, top, n) = c10;
  a.block(0, 2 * n, top, n) = c01;
  a.block(top, n, n, n) = -id;
  a.block(top + n, 2 * n, n, n) = -id;
  b1.block(0, n, top, n) = c20;
  b1.block(0, 2 * n, top, n) = c11;
  b1.block(top, 0, n, n) = id;
  b2.block(0, 2 * n, top, n) = c02;
  b2.block(top + n, 0, n, n) = id;
  return {a, b1, b2};
}

Matrix random_projection(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix p(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) p(i, j) = Complex(gauss(rng), gauss(rng));
  return p;
}

double relation_violation(const std::vector<AuxiliaryRelation>& relations, const Vector& lam) {
  double worst = 0.0;
  for (const AuxiliaryRelation& rel : relations) {
    const Complex want = rel.expected(lam);
    worst = std::max(worst, std::abs(lam[rel.param] - want) / (1.0 + std::abs(want)));
  }
  return worst;
}

/// A defective cluster of the operator family reads back with its repeated
/// tuple scattered around the true value, which breaks the auxiliary
/// relations even though the cluster mean stays accurate by trace
/// invariance.  Groups each violating tuple with its neighbours, consistent
/// ones included since they carry part of the cluster trace, and replaces a
/// group by its mean whenever the mean satisfies the relations again.
void repair_split_clusters(const std::vector<AuxiliaryRelation>& relations, double relation_tol,
                           std::vector<Vector>& lambdas, std::vector<double>& viol) {
  const std::size_t n = lambdas.size();
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < n; ++i)
    if (viol[i] > relation_tol && viol[i] < 0.25) bad.push_back(i);
  if (bad.empty()) return;

  // The relations are tangent to the scatter to first order, so its radius
  // scales like the square root of the observed defect.
  const auto reach_of = [&](std::size_t i) {
    return 6.0 * std::sqrt(viol[i]) * (1.0 + lambdas[i].lpNorm<Eigen::Infinity>());
  };

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> involved(n, 0);
  for (const std::size_t a : bad) involved[a] = 1;
  for (const std::size_t a : bad) {
    const double reach = reach_of(a);
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a || viol[b] >= 0.25) continue;
      if ((lambdas[a] - lambdas[b]).lpNorm<Eigen::Infinity>() <= reach) {
        involved[b] = 1;
        parent[find(b)] = find(a);
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i)
    if (involved[i]) groups[find(i)].push_back(i);

  for (auto& [root, members] : groups) {
    if (members.size() < 2) continue;
    if (members.size() > 16) {
      // Keep the violating members plus the consistent ones closest to them.
      std::sort(members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
        const bool bx = viol[x] > relation_tol;
        const bool by = viol[y] > relation_tol;
        if (bx != by) return bx;
        double dx = 1e300, dy = 1e300;
        for (const std::size_t a : bad) {
          dx = std::min(dx, (lambdas[x] - lambdas[a]).lpNorm<Eigen::Infinity>());
          dy = std::min(dy, (lambdas[y] - lambdas[a]).lpNorm<Eigen::Infinity>());
        }
        return dx < dy;
      });
      members.resize(16);
    }
    const std::size_t m = members.size();
    unsigned bad_mask = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (viol[members[j]] > relation_tol) bad_mask |= 1u << j;
    if (bad_mask == 0) continue;

    struct Option {
      double vm;
      unsigned mask;
      Vector mean;
    };
    std::vector<Option> passing;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      if (std::popcount(mask) < 2 || (mask & bad_mask) == 0) continue;
      Vector mean = Vector::Zero(lambdas[members[0]].size());
      for (std::size_t j = 0; j < m; ++j)
        if (mask & (1u << j)) mean += lambdas[members[j]];
      mean /= static_cast<double>(std::popcount(mask));
      const double vm = relation_violation(relations, mean);
      if (vm <= relation_tol) passing.push_back({vm, mask, std::move(mean)});
    }
    // Prefer the largest passing subset: a full cluster absorbs members that
    // a tighter subset would leave stranded.
    std::sort(passing.begin(), passing.end(), [](const Option& x, const Option& y) {
      const int bx = std::popcount(x.mask);
      const int by = std::popcount(y.mask);
      return bx != by ? bx > by : x.vm < y.vm;
    });
    unsigned taken = 0;
    for (const Option& opt : passing) {
      if ((opt.mask & taken) != 0 || (opt.mask & bad_mask & ~taken) == 0) continue;
      taken |= opt.mask;
      for (std::size_t j = 0; j < m; ++j)
        if (opt.mask & (1u << j)) {
          lambdas[members[j]] = opt.mean;
          viol[members[j]] = opt.vm;
        }
    }
  }

  // A read can also come back off the true value without a partner to
  // cancel against, repeated eigenvalue or not.  The dependent parameters
  // are defined as polynomials of the free ones, so for mild violations
  // restore consistency by re-evaluating them from the free components;
  // anything worse stays inconsistent and is dropped by the caller.
  for (std::size_t i = 0; i < n; ++i) {
    if (viol[i] <= relation_tol || viol[i] >= 0.02) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const AuxiliaryRelation& rel : relations)
        lambdas[i](rel.param) = rel.expected(lambdas[i]);
    viol[i] = relation_violation(relations, lambdas[i]);
  }
}

}  // namespace

RectPencil QuadR2EP::pencil() const {
  check_quad(*this);
  RectPencil p;
  p.k = 2;
  p.degree = 2;
  p.add_term({0, 0}, a00);
  p.add_term({1, 0}, a10);
  p.add_term({0, 1}, a01);
  p.add_term({2, 0}, a20);
  p.add_term({1, 1}, a11);
  p.add_term({0, 2}, a02);
  return p;
}

RectPencil quad_linearization(const QuadR2EP& q) {
  check_quad(q);
  std::vector<Matrix> blocks =
      linearization_blocks(q.a00, q.a10, q.a01, q.a20, q.a11, q.a02);
  return RectPencil::linear(std::move(blocks[0]), {blocks[1], blocks[2]});
}

EigSet solve_quadratic_projected(const QuadR2EP& q, const ToleranceConfig& cfg,
                                 std::uint64_t seed, EigSet* rejected) {
  check_quad(q);
  const Index n = q.cols();
  const RectPencil qp = q.pencil();

  std::mt19937_64 rng(seed);
  EigSet candidates;
  const int attempts = 3;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    MepSystem sys;
    sys.equations.resize(2);
    for (int i = 0; i < 2; ++i) {
      const Matrix p = random_projection(n, n + 1, rng);
      sys.equations[i] = linearization_blocks(p * q.a00, p * q.a10, p * q.a01,
                                              p * q.a20, p * q.a11, p * q.a02);
    }
    std::vector<Matrix> deltas = delta_family(sys);
    std::vector<Matrix> rest(deltas.begin() + 1, deltas.end());
    try {
      candidates = staircase_regular_part(deltas[0], rest, cfg, seed + attempt);
      break;
    } catch (const SolverError&) {
      if (attempt + 1 == attempts) throw;
    }
  }

  EigSet out;
  for (const Eigenvalue& c : candidates.tuples) {
    const Vector lam = polish_eigenvalue(qp, c.lambda);
    const RankDropResult rd = rank_drop_test(qp, lam, cfg);
    if (rd.accepted)
      out.push(lam, rd.residual, rd.vector);
    else if (rejected != nullptr)
      rejected->push(lam, rd.residual, rd.vector);
  }
  out.sort_lex();
  if (rejected != nullptr) rejected->sort_lex();
  return out;
}

EigSet solve_quadratic_linearized(const QuadR2EP& q, const ToleranceConfig& cfg,
                                  std::uint64_t seed) {
  check_quad(q);
  const EigSet lin_eigs = solve_linear_compressed(quad_linearization(q), cfg, seed);
  const RectPencil qp = q.pencil();
  EigSet out;
  for (const Eigenvalue& c : lin_eigs.tuples) {
    const Vector lam = polish_eigenvalue(qp, c.lambda);
    const RankDropResult rd = rank_drop_test(qp, lam, cfg);
    if (rd.accepted) out.push(lam, rd.residual, rd.vector);
  }
  out.sort_lex();
  return out;
}

EigSet solve_quadratic_vandermonde(const QuadR2EP& q, const ToleranceConfig& cfg,
                                   std::uint64_t seed) {
  check_quad(q);
  const Index n = q.cols();
  const std::vector<Matrix> wide = wide_deltas(quad_linearization(q));
  const VandermondeCompression vc = vandermonde_compression(n);
  std::vector<Matrix> d(wide.size());
  for (std::size_t i = 0; i < wide.size(); ++i) d[i] = vc.compress(wide[i]);
  std::vector<Matrix> rest(d.begin() + 1, d.end());
  const EigSet cand = staircase_regular_part(d[0], rest, cfg, seed);

  const RectPencil qp = q.pencil();
  EigSet out;
  for (const Eigenvalue& c : cand.tuples) {
    const Vector lam = polish_eigenvalue(qp, c.lambda);
    const RankDropResult rd = rank_drop_test(qp, lam, cfg);
    if (rd.accepted) out.push(lam, rd.residual, rd.vector);
  }
  out.sort_lex();
  return out;
}

std::vector<Matrix> mixed_compressed_deltas(const MixedSystem& sys) {
  detail::validate_mixed(sys);
  const int s = static_cast<int>(sys.squares.size());
  const int k = sys.params();
  const int r = sys.repeats;
  const Index n = sys.rect[0].cols();
  const SymmetricCompression sc = symmetric_compression(n, r);

  Index sq_dim = 1;
  for (const auto& sq : sys.squares) sq_dim *= sq[0].rows();
  const Index size = sq_dim * sc.size();

  std::vector<Matrix> out(k + 1, Matrix::Zero(size, size));
  // The same compressed rectangular product recurs across permutations and
  // replacements; key it by the effective coefficient sequence.
  std::map<std::vector<int>, Matrix> cache;

  std::vector<int> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<Matrix> sq_factors(s);
  std::vector<const Matrix*> rect_factors(r);
  std::vector<int> key(r);
  do {
    const int sign = detail::perm_sign(sigma);
    for (int replace = 0; replace <= k; ++replace) {
      for (int i = 0; i < s; ++i) {
        const int j = sigma[i];
        sq_factors[i] = sys.squares[i][j + 1 == replace ? 0 : j + 1];
      }
      for (int t = 0; t < r; ++t) {
        const int j = sigma[s + t];
        key[t] = (j + 1 == replace) ? 0 : j + 1;
      }
      auto it = cache.find(key);
      if (it == cache.end()) {
        for (int t = 0; t < r; ++t) rect_factors[t] = &sys.rect[key[t]];
        it = cache.emplace(key, compressed_kron(sc, rect_factors)).first;
      }
      const Matrix term = kron(kron_chain(sq_factors), it->second);
      if (sign > 0)
        out[replace] += term;
      else
        out[replace] -= term;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  for (int i = 1; i <= k; ++i) out[i] = -out[i];
  return out;
}

EigSet solve_mixed_compressed(const MixedSystem& sys,
                              const std::vector<AuxiliaryRelation>& relations,
                              const ToleranceConfig& cfg, std::uint64_t seed,
                              MixedSolveStats* stats, double relation_tol) {
  const int k = sys.params();
  for (const AuxiliaryRelation& rel : relations)
    if (rel.param < 0 || rel.param >= k || !rel.expected)
      throw std::invalid_argument("solve_mixed_compressed: malformed relation");

  std::vector<Matrix> d = mixed_compressed_deltas(sys);
  std::vector<Matrix> rest(d.begin() + 1, d.end());
  const EigSet cand = staircase_regular_part(d[0], rest, cfg, seed);

  const std::vector<Matrix> bs(sys.rect.begin() + 1, sys.rect.end());
  const RectPencil rect = RectPencil::linear(sys.rect[0], bs);

  if (stats != nullptr) {
    stats->compressed_size = d[0].rows();
    stats->candidates = cand.size();
    stats->dropped_inconsistent = 0;
  }
  std::vector<Vector> lambdas;
  lambdas.reserve(cand.tuples.size());
  for (const Eigenvalue& c : cand.tuples) lambdas.push_back(c.lambda);
  std::vector<double> viol(lambdas.size(), 0.0);
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    viol[i] = relation_violation(relations, lambdas[i]);
  if (!relations.empty()) repair_split_clusters(relations, relation_tol, lambdas, viol);

  EigSet out;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (viol[i] > relation_tol) {
      if (stats != nullptr) ++stats->dropped_inconsistent;
      continue;
    }
    const RankDropResult rd = rank_drop_test(rect, lambdas[i], cfg);
    out.push(lambdas[i], rd.residual, rd.vector);
  }
  out.sort_lex();
  return out;
}

}  // namespace rmep
