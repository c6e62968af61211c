#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "merotower/rational.hpp"

namespace merotower {

/// Dense univariate polynomial over Q, lowest degree first.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coefficients);
  static UniPoly constant(const Rational& c) { return UniPoly({c}); }
  static UniPoly x() { return UniPoly({Rational(0), Rational(1)}); }

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& leading() const;
  Rational coefficient(std::size_t i) const;

  UniPoly operator-() const;
  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const Rational& c);
  bool operator==(const UniPoly& other) const { return coeffs_ == other.coeffs_; }

  UniPoly derivative() const;
  UniPoly monic() const;
  Rational evaluate(const Rational& x) const;
  Complex evaluate(Complex x) const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct DivMod {
  UniPoly quotient;
  UniPoly remainder;
};

DivMod divmod(const UniPoly& a, const UniPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(const UniPoly& a, const UniPoly& b);
/// u / gcd(u, u'), monic.
UniPoly squarefree_part(const UniPoly& u);
/// Number of distinct complex roots. Throws AlgebraError on the zero polynomial.
int squarefree_root_count(const UniPoly& u);

/// A complex root, exact when it was recognised as rational.
struct UniRoot {
  Complex value;
  std::optional<Rational> exact;
};

/// Roots of the square-free part, each distinct root once.
std::vector<UniRoot> distinct_roots(const UniPoly& u);

/// Roots of a polynomial with complex coefficients (lowest degree first),
/// repeated according to multiplicity as found by simultaneous iteration.
std::vector<Complex> complex_roots(std::span<const Complex> coefficients);

}  // namespace merotower
