#pragma once

#include <optional>
#include <span>
#include <vector>

#include "merotower/poly.hpp"
#include "merotower/unipoly.hpp"

namespace merotower {

/// Sylvester resultant of two bivariate polynomials with respect to variable
/// `eliminate` (0 or 1), as a polynomial in the remaining variable.
/// Convention: Res(p, q) = lc(p)^deg(q) * prod q(roots of p).
/// Throws AlgebraError when both inputs are constant in the eliminated variable.
UniPoly resultant(const Poly& p, const Poly& q, std::size_t eliminate);

/// Converts a polynomial in one effective variable (others absent) to dense form.
UniPoly to_unipoly(const Poly& p, std::size_t var);

struct PlanePoint {
  Complex x;
  Complex y;
  std::optional<Rational> exact_x;
  std::optional<Rational> exact_y;

  bool is_exact() const { return exact_x.has_value() && exact_y.has_value(); }
};

struct PlaneSolveResult {
  std::vector<PlanePoint> points;
  /// The equations share a curve of zeros; `points` then holds only the
  /// isolated solutions of the cofactor system.
  bool positive_dimensional = false;
};

/// Common zeros in C^2 of polynomials in two variables, via resultants in both
/// directions and exact square-free reduction. Residual tolerance is relative
/// to the size of the terms at the candidate.
PlaneSolveResult solve_plane_system(std::span<const Poly> equations, double residual_tol = 1e-8);

}  // namespace merotower
