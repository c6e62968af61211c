#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "merotower/resultant.hpp"
#include "merotower/unipoly.hpp"

using namespace merotower;
using namespace testing;

TEST_CASE("rationals stay canonical") {
  const Rational q(6, 4);
  Rational r = q;
  r.canonicalize();
  CHECK(to_string(r) == "3/2");
  CHECK(parse_rational("-10/4").value() == Rational(-5, 2));
  CHECK_FALSE(parse_rational("1/0").has_value());
  CHECK_FALSE(parse_rational("abc").has_value());
}

TEST_CASE("homogeneous addition") {
  CHECK((H("z^2") + H("-z^2")).is_zero());
  CHECK(canon((H("w*t") + H("t^2")).poly()) == "1*z^0*w^1*t^1 + 1*z^0*w^0*t^2");
  const HomoPoly p = H("z*w - 3*t^2");
  CHECK(p + HomoPoly(Poly(3)) == p);
  CHECK_THROWS_AS(H("z^2") + H("z"), AlgebraError);
}

TEST_CASE("homogeneous multiplication") {
  CHECK((H("z") * H("t")) == H("z*t"));
  // hand expansion: (wt + t^2) t^2 = w t^3 + t^4
  CHECK((H("w*t + t^2") * H("t^2")) == H("w*t^3 + t^4"));
  CHECK((H("w*t + t^2") * H("t^2")).degree() == 4);
  const HomoPoly p = H("z^2 - w*t");
  CHECK(p * HomoPoly(Poly::constant(3, Rational(1))) == p);
}

TEST_CASE("complex evaluation") {
  const std::vector<Complex> ones{1.0, 1.0, 1.0};
  CHECK(H("z^2").evaluate(ones) == Complex(1.0));
  CHECK(H("w*t + t^2").evaluate(ones) == Complex(2.0));
  const std::vector<Complex> e{0.0, 1.0, 0.0};
  CHECK(H("t^2").evaluate(e) == Complex(0.0));
}

TEST_CASE("gcd examples") {
  CHECK(gcd(P("z^2*t"), P("z*t^2")) == P("z*t"));
  CHECK(gcd(P("z^2"), P("t^2")) == P("1"));
  CHECK(gcd(P("z*t*(z + t)"), P("t^2*(z + t)")) == P("t*(z + t)"));
  CHECK(gcd(Poly(3), Poly(3)).is_zero());
}

TEST_CASE("canonical strings round-trip and use graded-lex order") {
  const Poly p = P("-3/2*w*t + z^2 + 7");
  const std::string s = canon(p);
  CHECK(s == "1*z^2*w^0*t^0 + -3/2*z^0*w^1*t^1 + 7*z^0*w^0*t^0");
  CHECK(parse_poly(s, zwt()) == p);
  CHECK(canon(Poly(3)) == "0");
  CHECK_THROWS_AS(parse_poly("z + + w", zwt()), ParseError);
  CHECK_THROWS_AS(parse_poly("q^2", zwt()), ParseError);
}

TEST_CASE("resultants") {
  const std::vector<std::string> zw{"z", "w"};
  auto R = [&](const char* a, const char* b) {
    return resultant(parse_poly(a, zw), parse_poly(b, zw), 1);
  };
  CHECK(R("w - z", "w + z") == UniPoly({Rational(0), Rational(2)}));
  CHECK(R("w", "z") == UniPoly({Rational(0), Rational(1)}));
  // Hand determinant of [[z, -1], [1, -z]] is 1 - z^2; the other sign
  // convention gives z^2 - 1.
  const UniPoly r = R("w*z - 1", "w - z");
  CHECK((r == UniPoly({Rational(-1), Rational(0), Rational(1)}) ||
         r == UniPoly({Rational(1), Rational(0), Rational(-1)})));
  CHECK_THROWS_AS(R("z", "z + 1"), AlgebraError);
}

TEST_CASE("square-free root counts") {
  CHECK(squarefree_root_count(UniPoly({0, 0, -1, 1})) == 2);  // z^2 (z - 1)
  CHECK(squarefree_root_count(UniPoly({0, 0, 0, 1})) == 1);
  CHECK(squarefree_root_count(UniPoly({-1, 0, 1})) == 2);
  CHECK_THROWS_AS(squarefree_root_count(UniPoly()), AlgebraError);
}

TEST_CASE("add and mul are commutative and associative") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Poly a = random_poly(rng, 4, 5), b = random_poly(rng, 4, 5), c = random_poly(rng, 4, 5);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("gcd divides exactly and scales with a common factor") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    const Poly p = random_poly(rng, 3, 4), q = random_poly(rng, 3, 4), r = random_poly(rng, 2, 3);
    const Poly g = gcd(p * r, q * r);
    REQUIRE_FALSE(g.is_zero());
    CHECK(divide_exact(p * r, g).has_value());
    CHECK(divide_exact(q * r, g).has_value());
    // gcd(pr, qr) = gcd(p, q) r up to a unit
    const Poly expected = (gcd(p, q) * r).primitive_integer();
    CHECK(g.primitive_integer() == expected);
  }
}

TEST_CASE("resultant vanishes exactly on a common factor") {
  const std::vector<std::string> zw{"z", "w"};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> k(-3, 3);
  for (int i = 0; i < 40; ++i) {
    const Poly common = parse_poly("w + " + std::to_string(k(rng)) + "*z + 1", zw);
    const Poly a = parse_poly("w^2 + " + std::to_string(k(rng)) + "*z", zw);
    const Poly b = parse_poly("w - " + std::to_string(k(rng)) + "*z^2 + 2", zw);
    CHECK(resultant(a * common, b * common, 1).is_zero());
    if (gcd(a, b).is_constant()) CHECK_FALSE(resultant(a, b, 1).is_zero());
  }
}

TEST_CASE("evaluation of a product is the product of evaluations") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Poly a = random_poly(rng, 4, 5), b = random_poly(rng, 4, 5);
    const std::vector<Complex> x{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    const Complex lhs = (a * b).evaluate(x);
    const Complex rhs = a.evaluate(x) * b.evaluate(x);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}
