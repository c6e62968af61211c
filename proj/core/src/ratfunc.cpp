#include "merotower/ratfunc.hpp"

namespace merotower {

RatFunc::RatFunc(Poly num) : RatFunc(num, Poly::constant(num.num_vars(), 1)) {}

RatFunc::RatFunc(Poly num, Poly den) {
  if (den.is_zero()) throw AlgebraError("rational function with zero denominator");
  if (num.num_vars() != den.num_vars()) {
    throw AlgebraError("numerator and denominator have different variable counts");
  }
  if (num.is_zero()) {
    num_ = Poly(den.num_vars());
    den_ = Poly::constant(den.num_vars(), 1);
    return;
  }
  const Poly g = gcd(num, den);
  num = *divide_exact(num, g);
  den = *divide_exact(den, g);
  // Move the denominator's scale onto the numerator.
  const Poly prim = den.primitive_integer();
  const Rational scale = prim.leading_coefficient() / den.leading_coefficient();
  num_ = num * scale;
  den_ = prim;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ - b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw AlgebraError("division by the zero rational function");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc RatFunc::substitute(std::span<const Poly> values) const {
  return RatFunc(num_.substitute(values), den_.substitute(values));
}

std::optional<Complex> RatFunc::evaluate(std::span<const Complex> point, double rel_tol) const {
  const Complex d = den_.evaluate(point);
  if (std::abs(d) <= rel_tol * den_.magnitude(point) || d == Complex(0.0, 0.0)) return std::nullopt;
  return num_.evaluate(point) / d;
}

std::string to_canonical(const RatFunc& f, std::span<const std::string> names) {
  return "(" + to_canonical(f.num(), names) + ")/(" + to_canonical(f.den(), names) + ")";
}

}  // namespace merotower
