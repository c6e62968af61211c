#pragma once

#include <random>
#include <string>
#include <vector>

#include "merotower/rational_map.hpp"

namespace testing {

inline const std::vector<std::string>& zwt() {
  static const std::vector<std::string> n{"z", "w", "t"};
  return n;
}

inline merotower::Poly P(const std::string& s) { return merotower::parse_poly(s, zwt()); }
inline merotower::HomoPoly H(const std::string& s) { return merotower::HomoPoly(P(s)); }

inline merotower::RationalMap map3(const std::string& a, const std::string& b, const std::string& c) {
  return merotower::RationalMap({H(a), H(b), H(c)});
}

inline merotower::RationalMap guedj() { return map3("z^2", "w*t + t^2", "t^2"); }
inline merotower::RationalMap squaring() { return map3("z^2", "w^2", "t^2"); }

inline merotower::ProjPoint exact(long a, long b, long c) {
  return merotower::ProjPoint::exact({merotower::Rational(a), merotower::Rational(b), merotower::Rational(c)});
}

inline std::string canon(const merotower::Poly& p) { return merotower::to_canonical(p, zwt()); }

/// Random polynomial in z, w, t with small integer coefficients.
inline merotower::Poly random_poly(std::mt19937_64& rng, int max_deg, int max_terms) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> terms(1, max_terms);
  std::uniform_int_distribution<int> ex(0, max_deg);
  merotower::Poly p(3);
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    int a = ex(rng), b = ex(rng), c = ex(rng);
    while (a + b + c > max_deg) {
      if (a > 0) --a; else if (b > 0) --b; else --c;
    }
    const int k = coef(rng);
    if (k != 0) p += merotower::Poly::monomial({a, b, c}, merotower::Rational(k));
  }
  if (p.is_zero()) p = merotower::Poly::constant(3, merotower::Rational(1));
  return p;
}

}  // namespace testing
