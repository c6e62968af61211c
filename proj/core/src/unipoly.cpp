#include "merotower/unipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "merotower/poly.hpp"

namespace merotower {

UniPoly::UniPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void UniPoly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

const Rational& UniPoly::leading() const {
  if (coeffs_.empty()) throw AlgebraError("leading coefficient of zero polynomial");
  return coeffs_.back();
}

Rational UniPoly::coefficient(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) + b.coefficient(i);
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UniPoly(std::move(c));
}

UniPoly operator*(const UniPoly& a, const Rational& s) {
  std::vector<Rational> c = a.coeffs_;
  for (auto& x : c) x *= s;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> c(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * static_cast<long>(i);
  return UniPoly(std::move(c));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / leading());
}

Rational UniPoly::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex UniPoly::evaluate(Complex x) const {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!first) out << " + ";
    first = false;
    out << coeffs_[i].get_str() << '*' << var << '^' << i;
  }
  return out.str();
}

DivMod divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw AlgebraError("division by zero polynomial");
  std::vector<Rational> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db) return {UniPoly(), a};
  std::vector<Rational> quo(a.degree() - db + 1);
  const Rational& lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (sgn(rem[i]) == 0) continue;
    const Rational f = rem[i] / lb;
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coefficients()[j];
  }
  return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a;
  UniPoly y = b;
  while (!y.is_zero()) {
    UniPoly r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UniPoly squarefree_part(const UniPoly& u) {
  if (u.is_zero()) throw AlgebraError("square-free part of zero polynomial");
  if (u.degree() == 0) return UniPoly::constant(1);
  const UniPoly g = gcd(u, u.derivative());
  return divmod(u, g).quotient.monic();
}

int squarefree_root_count(const UniPoly& u) {
  if (u.is_zero()) throw AlgebraError("root count of zero polynomial");
  return squarefree_part(u).degree();
}

std::vector<Complex> complex_roots(std::span<const Complex> coefficients) {
  std::vector<Complex> c(coefficients.begin(), coefficients.end());
  while (!c.empty() && c.back() == Complex(0.0, 0.0)) c.pop_back();
  if (c.size() <= 1) return {};
  const int n = static_cast<int>(c.size()) - 1;
  const Complex lead = c.back();
  for (auto& x : c) x /= lead;

  // Roots at the origin are peeled off exactly.
  std::vector<Complex> roots;
  std::size_t shift = 0;
  while (shift < c.size() - 1 && c[shift] == Complex(0.0, 0.0)) {
    roots.emplace_back(0.0, 0.0);
    ++shift;
  }
  std::vector<Complex> p(c.begin() + static_cast<std::ptrdiff_t>(shift), c.end());
  const int m = n - static_cast<int>(shift);
  if (m == 0) return roots;

  double bound = 0.0;
  for (int i = 0; i < m; ++i) bound = std::max(bound, std::abs(p[i]));
  const double radius = std::max(1e-3, std::min(1.0 + bound, std::pow(std::abs(p[0]), 1.0 / m) * 1.5 + 0.1));

  auto eval = [&](Complex z, Complex& deriv) {
    Complex v = p[m];
    deriv = Complex(0.0, 0.0);
    for (int i = m - 1; i >= 0; --i) {
      deriv = deriv * z + v;
      v = v * z + p[i];
    }
    return v;
  };

  std::vector<Complex> z(m);
  for (int k = 0; k < m; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / m + 0.4;
    z[k] = std::polar(radius, angle);
  }
  // Aberth-Ehrlich simultaneous iteration.
  for (int iter = 0; iter < 800; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < m; ++k) {
      Complex d;
      const Complex v = eval(z[k], d);
      if (v == Complex(0.0, 0.0)) continue;
      const Complex ratio = v / d;
      Complex sum(0.0, 0.0);
      for (int j = 0; j < m; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (max_step < 1e-16) break;
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<UniRoot> distinct_roots(const UniPoly& u) {
  if (u.is_zero()) throw AlgebraError("roots of zero polynomial");
  const UniPoly sf = squarefree_part(u);
  if (sf.degree() <= 0) return {};
  std::vector<Complex> coeffs;
  coeffs.reserve(sf.coefficients().size());
  for (const auto& q : sf.coefficients()) coeffs.emplace_back(q.get_d(), 0.0);
  const std::vector<Complex> numeric = complex_roots(coeffs);

  const UniPoly deriv = sf.derivative();
  std::vector<UniRoot> out;
  out.reserve(numeric.size());
  for (Complex z : numeric) {
    // Newton polish against the square-free polynomial.
    for (int i = 0; i < 3; ++i) {
      const Complex d = deriv.evaluate(z);
      if (std::abs(d) == 0.0) break;
      const Complex step = sf.evaluate(z) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
    }
    UniRoot root{z, std::nullopt};
    if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) {
      const Rational guess = approximate_rational(z.real(), Integer(100000));
      if (sgn(sf.evaluate(guess)) == 0) {
        root.exact = guess;
        root.value = Complex(guess.get_d(), 0.0);
      }
    }
    out.push_back(root);
  }
  return out;
}

}  // namespace merotower
