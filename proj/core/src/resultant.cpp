#include "merotower/resultant.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace merotower {

UniPoly to_unipoly(const Poly& p, std::size_t var) {
  std::vector<Rational> c(std::max(0, p.degree_in(var)) + 1);
  for (const auto& [e, coef] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i != var && e[i] != 0) throw AlgebraError("polynomial depends on more than one variable");
    }
    c[e[var]] += coef;
  }
  return UniPoly(std::move(c));
}

namespace {

UniPoly power(const UniPoly& u, int k) {
  UniPoly r = UniPoly::constant(1);
  for (int i = 0; i < k; ++i) r = r * u;
  return r;
}

UniPoly exact_div(const UniPoly& a, const UniPoly& b) {
  DivMod qr = divmod(a, b);
  if (!qr.remainder.is_zero()) throw AlgebraError("internal: inexact Bareiss division");
  return qr.quotient;
}

// Fraction-free Gaussian elimination over Q[x].
UniPoly bareiss_determinant(std::vector<std::vector<UniPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return UniPoly::constant(1);
  bool negate = false;
  UniPoly prev = UniPoly::constant(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return {};
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
      }
      m[i][k] = UniPoly();
    }
    prev = m[k][k];
  }
  UniPoly det = m[n - 1][n - 1];
  return negate ? -det : det;
}

}  // namespace

UniPoly resultant(const Poly& p, const Poly& q, std::size_t eliminate) {
  if (p.num_vars() != 2 || q.num_vars() != 2) {
    throw AlgebraError("resultant expects polynomials in two variables");
  }
  if (eliminate > 1) throw AlgebraError("eliminated variable must be 0 or 1");
  const std::size_t keep = 1 - eliminate;
  const int dp = p.degree_in(eliminate);
  const int dq = q.degree_in(eliminate);
  if (dp < 0 || dq < 0) return {};
  if (dp == 0 && dq == 0) {
    throw AlgebraError("both polynomials are constant in the eliminated variable");
  }
  auto column = [&](const Poly& f) {
    std::vector<UniPoly> out;
    for (const Poly& c : f.coefficients_in(eliminate)) out.push_back(to_unipoly(c, keep));
    return out;
  };
  const std::vector<UniPoly> pc = column(p);
  const std::vector<UniPoly> qc = column(q);
  if (dp == 0) return power(pc[0], dq);
  if (dq == 0) return power(qc[0], dp);

  const std::size_t n = static_cast<std::size_t>(dp + dq);
  std::vector<std::vector<UniPoly>> m(n, std::vector<UniPoly>(n));
  for (int r = 0; r < dq; ++r) {
    for (int i = 0; i <= dp; ++i) m[r][r + i] = pc[dp - i];
  }
  for (int r = 0; r < dp; ++r) {
    for (int i = 0; i <= dq; ++i) m[dq + r][r + i] = qc[dq - i];
  }
  return bareiss_determinant(std::move(m));
}

namespace {

bool accept(std::span<const Poly> equations, const PlanePoint& pt, double tol) {
  if (pt.is_exact()) {
    const std::array<Rational, 2> xy{*pt.exact_x, *pt.exact_y};
    return std::all_of(equations.begin(), equations.end(),
                       [&](const Poly& e) { return sgn(e.evaluate(xy)) == 0; });
  }
  const std::array<Complex, 2> xy{pt.x, pt.y};
  for (const Poly& e : equations) {
    const double residual = std::abs(e.evaluate(xy));
    const double scale = std::max(e.magnitude(xy), 1e-300);
    if (residual > tol * scale) return false;
  }
  return true;
}

std::vector<Poly> nonzero(std::span<const Poly> equations) {
  std::vector<Poly> out;
  for (const Poly& e : equations) {
    if (!e.is_zero()) out.push_back(e);
  }
  return out;
}

PlaneSolveResult solve_coprime(const std::vector<Poly>& equations, const Poly& a, const Poly& b,
                               double tol) {
  PlaneSolveResult result;
  if (a.is_constant() || b.is_constant()) return result;
  UniPoly rx;
  UniPoly ry;
  try {
    rx = resultant(a, b, 1);
  } catch (const AlgebraError&) {
    // Both free of y and coprime: no common zeros.
    return result;
  }
  try {
    ry = resultant(a, b, 0);
  } catch (const AlgebraError&) {
    return result;
  }
  if (rx.is_zero() || ry.is_zero()) throw AlgebraError("internal: coprime pair with zero resultant");
  if (rx.degree() == 0 || ry.degree() == 0) return result;
  const std::vector<UniRoot> xs = distinct_roots(rx);
  const std::vector<UniRoot> ys = distinct_roots(ry);
  for (const UniRoot& rx_root : xs) {
    for (const UniRoot& ry_root : ys) {
      PlanePoint pt{rx_root.value, ry_root.value, rx_root.exact, ry_root.exact};
      if (accept(equations, pt, tol)) result.points.push_back(pt);
    }
  }
  return result;
}

}  // namespace

PlaneSolveResult solve_plane_system(std::span<const Poly> input, double residual_tol) {
  std::vector<Poly> equations = nonzero(input);
  PlaneSolveResult result;
  if (equations.empty()) {
    result.positive_dimensional = true;
    return result;
  }
  for (const Poly& e : equations) {
    if (e.num_vars() != 2) throw AlgebraError("plane systems need two variables");
    if (e.is_constant()) return result;
  }
  const Poly common = gcd(std::span<const Poly>(equations));
  if (!common.is_constant()) {
    result.positive_dimensional = true;
    for (Poly& e : equations) e = *divide_exact(e, common);
    for (const Poly& e : equations) {
      if (e.is_constant()) return result;
    }
  }
  if (equations.size() == 1) {
    result.positive_dimensional = true;
    return result;
  }
  if (equations.size() == 2) {
    PlaneSolveResult r = solve_coprime(equations, equations[0], equations[1], residual_tol);
    r.positive_dimensional = r.positive_dimensional || result.positive_dimensional;
    return r;
  }
  // More than two equations: replace by two fixed generic combinations.
  static constexpr std::array<std::array<int, 6>, 4> kWeightsA{{
      {1, 2, 3, 5, 7, 11}, {1, -3, 7, 2, -5, 13}, {2, 1, -4, 9, 3, -7}, {3, 5, 1, -2, 11, 4}}};
  static constexpr std::array<std::array<int, 6>, 4> kWeightsB{{
      {1, -5, 2, 9, -4, 6}, {3, 1, -2, 7, 8, -1}, {1, 4, 9, -6, 2, 5}, {-2, 7, 3, 1, -9, 8}}};
  for (std::size_t attempt = 0; attempt < kWeightsA.size(); ++attempt) {
    Poly a(2);
    Poly b(2);
    for (std::size_t i = 0; i < equations.size(); ++i) {
      const int wa = kWeightsA[attempt][i % 6] + static_cast<int>(i / 6);
      const int wb = kWeightsB[attempt][i % 6] - static_cast<int>(i / 6);
      a += equations[i] * Rational(wa);
      b += equations[i] * Rational(wb);
    }
    if (a.is_zero() || b.is_zero() || !gcd(a, b).is_constant()) continue;
    PlaneSolveResult r = solve_coprime(equations, a, b, residual_tol);
    r.positive_dimensional = r.positive_dimensional || result.positive_dimensional;
    return r;
  }
  throw AlgebraError("could not find a coprime generic combination");
}

}  // namespace merotower
