#pragma once

#include <optional>
#include <span>
#include <string>

#include "merotower/poly.hpp"

namespace merotower {

/// Quotient of polynomials in lowest terms. The denominator is a primitive
/// integer polynomial with positive leading coefficient.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(Poly num);
  RatFunc(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  std::size_t num_vars() const { return num_.num_vars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  bool operator==(const RatFunc& other) const { return num_ == other.num_ && den_ == other.den_; }

  /// Substitutes polynomials for the variables and cancels again.
  RatFunc substitute(std::span<const Poly> values) const;
  /// nullopt when the denominator is zero or negligible against its own terms.
  std::optional<Complex> evaluate(std::span<const Complex> point, double rel_tol = 1e-12) const;

 private:
  Poly num_;
  Poly den_;
};

/// `(num)/(den)` with canonical polynomial strings.
std::string to_canonical(const RatFunc& f, std::span<const std::string> names);

}  // namespace merotower
