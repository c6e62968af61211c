#include "merotower/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace merotower {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  Rational q;
  if (q.set_str(text, 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

Rational approximate_rational(double x, const Integer& max_den) {
  // Continued fraction convergents of the exact binary value of x.
  Rational exact(x);
  Integer num = exact.get_num();
  Integer den = exact.get_den();
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  while (den != 0) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Integer rem = num - a * den;
    num = den;
    den = rem;
  }
  if (q1 == 0) return Rational(p0, q0);
  Rational r(p1, q1);
  r.canonicalize();
  return r;
}

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Poly Poly::constant(std::size_t num_vars, const Rational& c) {
  Poly p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw AlgebraError("variable index out of range");
  Exponents e(num_vars, 0);
  e[index] = 1;
  return monomial(std::move(e), 1);
}

Poly Poly::monomial(Exponents exponents, const Rational& c) {
  Poly p(exponents.size());
  p.add_term(exponents, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  const auto& e = terms_.begin()->first;
  return std::accumulate(e.begin(), e.end(), 0);
}

int Poly::degree_in(std::size_t var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = total_degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) {
    return std::accumulate(t.first.begin(), t.first.end(), 0) == d;
  });
}

Rational Poly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

const Exponents& Poly::leading_exponents() const {
  if (terms_.empty()) throw AlgebraError("leading term of zero polynomial");
  return terms_.begin()->first;
}

const Rational& Poly::leading_coefficient() const {
  if (terms_.empty()) throw AlgebraError("leading term of zero polynomial");
  return terms_.begin()->second;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != num_vars_) throw AlgebraError("exponent vector has wrong length");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& other) {
  if (other.num_vars_ != num_vars_) {
    if (terms_.empty() && num_vars_ == 0) {
      num_vars_ = other.num_vars_;
    } else if (!other.terms_.empty() || other.num_vars_ != 0) {
      throw AlgebraError("variable count mismatch");
    }
  }
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) { return *this += -other; }

Poly& Poly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coef] : terms_) coef *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.num_vars_ != b.num_vars_) throw AlgebraError("variable count mismatch");
  Poly r(a.num_vars_);
  Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

bool Poly::operator==(const Poly& other) const {
  if (terms_.empty() && other.terms_.empty()) return true;
  return num_vars_ == other.num_vars_ && terms_ == other.terms_;
}

Poly Poly::pow(unsigned k) const {
  Poly result = constant(num_vars_, 1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

Poly Poly::derivative(std::size_t var) const {
  Poly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

Poly Poly::substitute(std::span<const Poly> values) const {
  if (values.size() != num_vars_) throw AlgebraError("substitution needs one value per variable");
  if (values.empty()) return *this;
  const std::size_t target_vars = values.front().num_vars();
  // Cache powers of each substituted value.
  std::vector<std::vector<Poly>> powers(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) {
    powers[i].push_back(constant(target_vars, 1));
  }
  Poly r(target_vars);
  for (const auto& [e, c] : terms_) {
    Poly term = constant(target_vars, c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      while (static_cast<int>(powers[i].size()) <= e[i]) {
        powers[i].push_back(powers[i].back() * values[i]);
      }
      term = term * powers[i][e[i]];
    }
    r += term;
  }
  return r;
}

Poly Poly::eliminate_variable(std::size_t var, const Rational& value) const {
  Poly r(num_vars_ - 1);
  Exponents reduced(num_vars_ - 1);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0, j = 0; i < num_vars_; ++i) {
      if (i != var) reduced[j++] = e[i];
    }
    Rational scale = c;
    if (e[var] > 0) {
      Rational p;
      mpz_pow_ui(p.get_num_mpz_t(), value.get_num_mpz_t(), e[var]);
      mpz_pow_ui(p.get_den_mpz_t(), value.get_den_mpz_t(), e[var]);
      p.canonicalize();
      scale *= p;
    }
    r.add_term(reduced, scale);
  }
  return r;
}

std::vector<Poly> Poly::coefficients_in(std::size_t var) const {
  std::vector<Poly> out;
  const int d = degree_in(var);
  if (d < 0) return out;
  out.assign(d + 1, Poly(num_vars_));
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    rest[var] = 0;
    out[e[var]].add_term(rest, c);
  }
  return out;
}

Poly Poly::shifted(const Exponents& s) const {
  Poly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    Exponents n = e;
    for (std::size_t i = 0; i < n.size(); ++i) n[i] += s[i];
    r.terms_.emplace(std::move(n), c);
  }
  return r;
}

Exponents Poly::monomial_content() const {
  Exponents m(num_vars_, 0);
  if (terms_.empty()) return m;
  m = terms_.begin()->first;
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
  }
  return m;
}

Poly Poly::unshifted(const Exponents& s) const {
  Poly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    Exponents n = e;
    for (std::size_t i = 0; i < n.size(); ++i) {
      n[i] -= s[i];
      if (n[i] < 0) throw AlgebraError("monomial does not divide polynomial");
    }
    r.terms_.emplace(std::move(n), c);
  }
  return r;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != num_vars_) throw AlgebraError("point has wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

namespace {

// Integer powers by repeated multiplication keep exact zeros exact.
Complex ipow(Complex base, int k) {
  Complex r(1.0, 0.0);
  while (k > 0) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return r;
}

}  // namespace

Complex Poly::evaluate(std::span<const Complex> point) const {
  if (point.size() != num_vars_) throw AlgebraError("point has wrong dimension");
  Complex sum(0.0, 0.0);
  for (const auto& [e, c] : terms_) {
    Complex term(c.get_d(), 0.0);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] != 0) term *= ipow(point[i], e[i]);
    }
    sum += term;
  }
  return sum;
}

double Poly::magnitude(std::span<const Complex> point) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = std::abs(c.get_d());
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] != 0) term *= std::pow(std::abs(point[i]), e[i]);
    }
    sum += term;
  }
  return sum;
}

Poly Poly::primitive_integer() const {
  if (terms_.empty()) return *this;
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (const auto& [e, c] : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (sgn(leading_coefficient()) < 0) scale = -scale;
  Poly r = *this;
  r *= scale;
  return r;
}

std::optional<Poly> divide_exact(const Poly& p, const Poly& divisor) {
  if (divisor.is_zero()) throw AlgebraError("division by zero polynomial");
  const std::size_t n = p.num_vars();
  Poly quotient(divisor.num_vars());
  Poly rem = p;
  if (rem.is_zero()) return quotient;
  if (n != divisor.num_vars()) throw AlgebraError("variable count mismatch");
  const Exponents& lead = divisor.leading_exponents();
  const Rational& lead_c = divisor.leading_coefficient();
  Exponents q(n);
  while (!rem.is_zero()) {
    const Exponents& e = rem.leading_exponents();
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = e[i] - lead[i];
      if (q[i] < 0) return std::nullopt;
    }
    const Rational c = rem.leading_coefficient() / lead_c;
    quotient.add_term(q, c);
    rem -= divisor.shifted(q) * c;
  }
  return quotient;
}

namespace {

int highest_variable(const Poly& p) {
  int v = -1;
  for (const auto& [e, c] : p.terms()) {
    for (int i = static_cast<int>(e.size()) - 1; i > v; --i) {
      if (e[i] > 0) {
        v = i;
        break;
      }
    }
  }
  return v;
}

Poly exact_quotient(const Poly& p, const Poly& d) {
  auto q = divide_exact(p, d);
  if (!q) throw AlgebraError("internal: expected exact division");
  return *q;
}

Poly gcd_recursive(const Poly& a, const Poly& b);

// gcd of the coefficients of p viewed as a polynomial in `var`.
Poly content_in(const Poly& p, std::size_t var) {
  Poly c(p.num_vars());
  for (const Poly& coef : p.coefficients_in(var)) {
    if (coef.is_zero()) continue;
    c = c.is_zero() ? coef.primitive_integer() : gcd_recursive(c, coef);
    if (c.is_constant()) return Poly::constant(p.num_vars(), 1);
  }
  return c;
}

Poly pseudo_remainder(Poly a, const Poly& b, std::size_t var) {
  const int db = b.degree_in(var);
  const Poly lb = b.coefficients_in(var).back();
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const int da = a.degree_in(var);
    const Poly la = a.coefficients_in(var).back();
    Exponents s(a.num_vars(), 0);
    s[var] = da - db;
    a = lb * a - la * b.shifted(s);
  }
  return a;
}

// Both nonzero, neither has a monomial factor worth extracting separately.
Poly gcd_recursive(const Poly& a, const Poly& b) {
  const std::size_t n = a.num_vars();
  if (a.is_zero()) return b.primitive_integer();
  if (b.is_zero()) return a.primitive_integer();
  if (a.is_constant() || b.is_constant()) return Poly::constant(n, 1);
  if (a.is_monomial() || b.is_monomial()) {
    Exponents ma = a.monomial_content();
    Exponents mb = b.monomial_content();
    for (std::size_t i = 0; i < n; ++i) ma[i] = std::min(ma[i], mb[i]);
    return Poly::monomial(ma, 1);
  }
  const int va = highest_variable(a);
  const int vb = highest_variable(b);
  const int v = std::max(va, vb);
  const auto var = static_cast<std::size_t>(v);
  if (a.degree_in(var) == 0) return gcd_recursive(a, content_in(b, var));
  if (b.degree_in(var) == 0) return gcd_recursive(content_in(a, var), b);

  const Poly ca = content_in(a, var);
  const Poly cb = content_in(b, var);
  const Poly content = gcd_recursive(ca, cb);
  Poly pa = exact_quotient(a, ca);
  Poly pb = exact_quotient(b, cb);
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    Poly r = pseudo_remainder(pa, pb, var);
    pa = std::move(pb);
    if (r.is_zero()) {
      pb = Poly(n);
    } else if (r.degree_in(var) == 0) {
      // Remainder free of the main variable: primitive parts are coprime.
      return content;
    } else {
      pb = exact_quotient(r, content_in(r, var)).primitive_integer();
    }
  }
  const Poly g = exact_quotient(pa, content_in(pa, var));
  return (content * g).primitive_integer();
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.primitive_integer();
  if (b.is_zero()) return a.primitive_integer();
  if (a.num_vars() != b.num_vars()) throw AlgebraError("variable count mismatch");
  Exponents ma = a.monomial_content();
  Exponents mb = b.monomial_content();
  Exponents m(ma.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(ma[i], mb[i]);
  const Poly g = gcd_recursive(a.unshifted(ma), b.unshifted(mb));
  return g.shifted(m).primitive_integer();
}

Poly gcd(std::span<const Poly> polys) {
  Poly g;
  bool first = true;
  for (const Poly& p : polys) {
    if (first) {
      g = p.primitive_integer();
      first = false;
    } else {
      g = gcd(g, p);
    }
  }
  return g;
}

std::string to_canonical(const Poly& p, std::span<const std::string> names) {
  if (names.size() != p.num_vars() && !p.is_zero()) {
    throw AlgebraError("need one name per variable");
  }
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (!first) out << " + ";
    first = false;
    out << c.get_str();
    for (std::size_t i = 0; i < e.size(); ++i) out << '*' << names[i] << '^' << e[i];
  }
  return out.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::span<const std::string> names)
      : text_(text), names_(names) {}

  Poly parse() {
    Poly p = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  Poly expression() {
    skip_space();
    Poly acc(names_.size());
    bool negate = false;
    if (peek('+') || peek('-')) negate = text_[pos_++] == '-';
    Poly t = term();
    acc += negate ? -t : t;
    while (true) {
      skip_space();
      if (peek('+')) {
        ++pos_;
        acc += signed_term();
      } else if (peek('-')) {
        ++pos_;
        acc -= signed_term();
      } else {
        return acc;
      }
    }
  }

  // canonical strings write "a + -3/2*m"; one minus is allowed after an operator
  Poly signed_term() {
    skip_space();
    if (peek('-')) {
      ++pos_;
      return -term();
    }
    return term();
  }

  Poly term() {
    Poly acc = factor();
    while (true) {
      skip_space();
      if (!peek('*')) return acc;
      ++pos_;
      acc = acc * factor();
    }
  }

  Poly factor() {
    skip_space();
    Poly base(names_.size());
    if (peek('(')) {
      ++pos_;
      base = expression();
      skip_space();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
    } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::string digits = read_digits();
      skip_space();
      if (peek('/') ) {
        ++pos_;
        skip_space();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("expected denominator");
        }
        digits += "/" + read_digits();
      }
      auto q = parse_rational(digits);
      if (!q) fail("invalid number '" + digits + "'");
      base = Poly::constant(names_.size(), *q);
    } else if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      base = Poly::variable(names_.size(), static_cast<std::size_t>(it - names_.begin()));
    } else {
      fail(pos_ < text_.size() ? "unexpected character '" + std::string(1, text_[pos_]) + "'"
                               : "unexpected end of input");
    }
    skip_space();
    if (peek('^')) {
      ++pos_;
      skip_space();
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("expected exponent");
      }
      const std::string digits = read_digits();
      if (digits.size() > 4) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return base;
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, std::span<const std::string> names) {
  return PolyParser(text, names).parse();
}

HomoPoly::HomoPoly(Poly p) : poly_(std::move(p)) {
  if (!poly_.is_homogeneous()) throw AlgebraError("polynomial is not homogeneous");
}

HomoPoly operator+(const HomoPoly& a, const HomoPoly& b) {
  if (!a.is_zero() && !b.is_zero() && a.degree() != b.degree()) {
    throw AlgebraError("degree mismatch: " + std::to_string(a.degree()) + " vs " +
                       std::to_string(b.degree()));
  }
  return HomoPoly(a.poly_ + b.poly_);
}

HomoPoly operator*(const HomoPoly& a, const HomoPoly& b) { return HomoPoly(a.poly_ * b.poly_); }

HomoPoly gcd(const HomoPoly& a, const HomoPoly& b) { return HomoPoly(gcd(a.poly(), b.poly())); }

}  // namespace merotower
