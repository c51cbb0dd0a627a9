#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nfg/rational.hpp"

namespace nfg {

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

/// Affine description of the solution set of a linear system.
struct LinearSolution {
  bool consistent = false;
  RatVector particular;    // one solution, if consistent
  RatMatrix nullspace;     // basis vectors of the homogeneous system
};

/// Exact Gaussian elimination for A x = b (A is rows x cols).
inline LinearSolution solve_linear(RatMatrix a, RatVector b) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  if (b.size() != rows) throw std::invalid_argument("solve_linear: rhs size mismatch");
  for (const auto& row : a)
    if (row.size() != cols) throw std::invalid_argument("solve_linear: ragged matrix");

  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && a[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(a[pr], a[r]);
    std::swap(b[pr], b[r]);
    Rational inv = a[r][c];
    for (std::size_t cc = c; cc < cols; ++cc) a[r][cc] /= inv;
    b[r] /= inv;
    for (std::size_t rr = 0; rr < rows; ++rr) {
      if (rr == r || a[rr][c] == 0) continue;
      Rational f = a[rr][c];
      for (std::size_t cc = c; cc < cols; ++cc) a[rr][cc] -= f * a[r][cc];
      b[rr] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t rr = r; rr < rows; ++rr)
    if (b[rr] != 0) return {};  // inconsistent

  LinearSolution sol;
  sol.consistent = true;
  sol.particular.assign(cols, Rational(0));
  for (std::size_t k = 0; k < pivot_col.size(); ++k) sol.particular[pivot_col[k]] = b[k];

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    RatVector v(cols, Rational(0));
    v[c] = 1;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -a[k][c];
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Bounded polyhedron { x : eq_a x = eq_b, ineq_a x >= ineq_b }.
struct Polytope {
  RatMatrix eq_a;
  RatVector eq_b;
  RatMatrix ineq_a;
  RatVector ineq_b;
};

inline bool satisfies(const Polytope& p, const RatVector& x) {
  for (std::size_t r = 0; r < p.eq_a.size(); ++r)
    if (dot(p.eq_a[r], x) != p.eq_b[r]) return false;
  for (std::size_t r = 0; r < p.ineq_a.size(); ++r)
    if (dot(p.ineq_a[r], x) < p.ineq_b[r]) return false;
  return true;
}

namespace detail {

inline void vertex_subsets(std::size_t n, std::size_t k, std::vector<std::size_t>& cur,
                           std::size_t start, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (cur.size() == k) {
    fn(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
    cur.push_back(i);
    vertex_subsets(n, k, cur, i + 1, fn);
    cur.pop_back();
  }
}

}  // namespace detail

/// All vertices of a bounded polytope, exactly. Intended for the small
/// systems arising from support enumeration; enumerates tight-constraint
/// subsets of the inequality rows.
inline std::vector<RatVector> enumerate_vertices(const Polytope& p) {
  std::size_t dim = 0;
  if (!p.eq_a.empty())
    dim = p.eq_a[0].size();
  else if (!p.ineq_a.empty())
    dim = p.ineq_a[0].size();
  std::vector<RatVector> vertices;
  auto try_system = [&](const std::vector<std::size_t>& tight) {
    RatMatrix a(p.eq_a);
    RatVector b(p.eq_b);
    for (std::size_t t : tight) {
      a.push_back(p.ineq_a[t]);
      b.push_back(p.ineq_b[t]);
    }
    LinearSolution sol = solve_linear(std::move(a), std::move(b));
    if (!sol.consistent || !sol.nullspace.empty()) return;
    if (!satisfies(p, sol.particular)) return;
    for (const auto& v : vertices)
      if (v == sol.particular) return;
    vertices.push_back(std::move(sol.particular));
  };

  // Rank of the equality system determines how many inequalities must be
  // tight at a vertex; a full-rank tight subset of exactly that size always
  // exists, so enumerating those subsets finds every vertex.
  LinearSolution eq_only = solve_linear(p.eq_a, p.eq_b);
  if (!eq_only.consistent) return {};
  std::size_t free_dims = p.eq_a.empty() ? dim : eq_only.nullspace.size();
  if (free_dims == 0) {
    if (satisfies(p, eq_only.particular)) vertices.push_back(eq_only.particular);
    return vertices;
  }
  if (free_dims > p.ineq_a.size()) return {};  // cannot be bounded
  std::vector<std::size_t> cur;
  detail::vertex_subsets(p.ineq_a.size(), free_dims, cur, 0, try_system);
  return vertices;
}

}  // namespace nfg
