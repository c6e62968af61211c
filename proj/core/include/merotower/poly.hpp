#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "merotower/rational.hpp"

namespace merotower {

using Exponents = std::vector<int>;

/// Graded-lex, largest monomial first. Variable 0 is the most significant.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Sparse multivariate polynomial over Q. No zero coefficients are stored.
class Poly {
 public:
  using TermMap = std::map<Exponents, Rational, GrlexGreater>;

  Poly() = default;
  explicit Poly(std::size_t num_vars) : num_vars_(num_vars) {}

  static Poly constant(std::size_t num_vars, const Rational& c);
  static Poly variable(std::size_t num_vars, std::size_t index);
  static Poly monomial(Exponents exponents, const Rational& c);

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }

  /// Total degree; -1 for the zero polynomial.
  int total_degree() const;
  /// Degree in one variable; -1 for the zero polynomial.
  int degree_in(std::size_t var) const;
  bool is_homogeneous() const;

  Rational coefficient(const Exponents& e) const;
  const Exponents& leading_exponents() const;
  const Rational& leading_coefficient() const;

  void add_term(const Exponents& e, const Rational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  bool operator==(const Poly& other) const;

  Poly pow(unsigned k) const;
  Poly derivative(std::size_t var) const;

  /// p(values[0], ..., values[n-1]); all values must share a variable count.
  Poly substitute(std::span<const Poly> values) const;
  /// Sets one variable to a constant and removes it (n -> n-1 variables).
  Poly eliminate_variable(std::size_t var, const Rational& value) const;
  /// Coefficients with respect to `var`, index = power; each keeps n variables.
  std::vector<Poly> coefficients_in(std::size_t var) const;
  /// Multiplies by x^e.
  Poly shifted(const Exponents& e) const;
  /// Componentwise minimum exponent over all terms (the monomial content).
  Exponents monomial_content() const;
  /// Divides by x^e; every term must be divisible.
  Poly unshifted(const Exponents& e) const;

  Rational evaluate(std::span<const Rational> point) const;
  Complex evaluate(std::span<const Complex> point) const;
  /// Sum of |c| * |monomial| at the point; the natural scale of a residual.
  double magnitude(std::span<const Complex> point) const;

  /// Scales to coprime integer coefficients with a positive leading coefficient.
  Poly primitive_integer() const;

 private:
  std::size_t num_vars_ = 0;
  TermMap terms_;
};

/// Exact division; nullopt when `divisor` does not divide `p`.
std::optional<Poly> divide_exact(const Poly& p, const Poly& divisor);

/// Greatest common divisor, normalized to integer content 1 with a positive
/// leading coefficient. gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
Poly gcd(std::span<const Poly> polys);

/// Terms in graded-lex order, every variable spelled out:
/// `1*z^2*w^0*t^0 + -3/2*z^0*w^1*t^1`. The zero polynomial is `0`.
std::string to_canonical(const Poly& p, std::span<const std::string> names);

/// Reads canonical strings as well as ordinary notation such as `w*t + t^2`
/// or `(z - 1)^2`.
Poly parse_poly(std::string_view text, std::span<const std::string> names);

/// Homogeneous polynomial in k+1 variables. The zero polynomial reports degree -1.
class HomoPoly {
 public:
  HomoPoly() = default;
  /// Throws AlgebraError unless `p` is homogeneous.
  explicit HomoPoly(Poly p);

  const Poly& poly() const { return poly_; }
  std::size_t num_vars() const { return poly_.num_vars(); }
  int degree() const { return poly_.total_degree(); }
  bool is_zero() const { return poly_.is_zero(); }

  friend HomoPoly operator+(const HomoPoly& a, const HomoPoly& b);
  friend HomoPoly operator*(const HomoPoly& a, const HomoPoly& b);
  bool operator==(const HomoPoly& other) const { return poly_ == other.poly_; }

  Complex evaluate(std::span<const Complex> point) const { return poly_.evaluate(point); }

 private:
  Poly poly_;
};

HomoPoly gcd(const HomoPoly& a, const HomoPoly& b);

}  // namespace merotower
