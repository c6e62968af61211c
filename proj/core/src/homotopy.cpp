#include <array>
#include <cmath>

#include "merotower/rational_map.hpp"

namespace merotower {

namespace {

using Vec3 = std::array<Complex, 3>;

// Fiber equations F_i(x) - y_i F_j(x) = 0 (i != j) restricted to the chart x_c = 1.
class FiberSystem {
 public:
  FiberSystem(const RationalMap& f, std::size_t j) : j_(j) {
    for (std::size_t i = 0; i < 3; ++i) {
      comps_[i] = f.components()[i].poly();
      for (std::size_t v = 0; v < 3; ++v) grads_[i][v] = comps_[i].derivative(v);
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != j) rows_[k++] = i;
    }
  }

  std::array<Complex, 2> residual(const Vec3& x, const Vec3& y) const {
    const Complex fj = comps_[j_].evaluate(std::span<const Complex>(x));
    std::array<Complex, 2> r;
    for (std::size_t k = 0; k < 2; ++k) {
      r[k] = comps_[rows_[k]].evaluate(std::span<const Complex>(x)) - y[rows_[k]] * fj;
    }
    return r;
  }

  // Derivative of the residual in the two free coordinates (chart c).
  std::array<std::array<Complex, 2>, 2> jacobian(const Vec3& x, const Vec3& y, std::size_t c) const {
    std::array<std::array<Complex, 2>, 2> m;
    std::size_t col = 0;
    for (std::size_t v = 0; v < 3; ++v) {
      if (v == c) continue;
      const Complex dj = grads_[j_][v].evaluate(std::span<const Complex>(x));
      for (std::size_t k = 0; k < 2; ++k) {
        m[k][col] = grads_[rows_[k]][v].evaluate(std::span<const Complex>(x)) - y[rows_[k]] * dj;
      }
      ++col;
    }
    return m;
  }

  // d(residual)/dy along direction dy.
  std::array<Complex, 2> dy_term(const Vec3& x, const Vec3& dy) const {
    const Complex fj = comps_[j_].evaluate(std::span<const Complex>(x));
    return {-dy[rows_[0]] * fj, -dy[rows_[1]] * fj};
  }

 private:
  std::size_t j_;
  std::array<Poly, 3> comps_;
  std::array<std::array<Poly, 3>, 3> grads_;
  std::array<std::size_t, 2> rows_{};
};

bool solve2(const std::array<std::array<Complex, 2>, 2>& m, const std::array<Complex, 2>& b,
            std::array<Complex, 2>& out) {
  const Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double scale = std::abs(m[0][0]) + std::abs(m[0][1]) + std::abs(m[1][0]) + std::abs(m[1][1]);
  if (std::abs(det) <= 1e-14 * scale * scale || scale == 0.0) return false;
  out[0] = (b[0] * m[1][1] - b[1] * m[0][1]) / det;
  out[1] = (m[0][0] * b[1] - m[1][0] * b[0]) / det;
  return true;
}

void apply_step(Vec3& x, std::size_t c, const std::array<Complex, 2>& d) {
  std::size_t col = 0;
  for (std::size_t v = 0; v < 3; ++v) {
    if (v == c) continue;
    x[v] += d[col++];
  }
}

// Rescales so the largest coordinate is 1 and returns the new chart.
std::size_t rechart(Vec3& x) {
  std::size_t c = 0;
  for (std::size_t v = 1; v < 3; ++v) {
    if (std::abs(x[v]) > std::abs(x[c])) c = v;
  }
  const Complex s = x[c];
  for (auto& v : x) v /= s;
  x[c] = 1.0;
  return c;
}

bool newton(const FiberSystem& sys, Vec3& x, std::size_t& c, const Vec3& y, int iterations,
            double tol) {
  for (int it = 0; it < iterations; ++it) {
    const auto r = sys.residual(x, y);
    std::array<Complex, 2> d;
    if (!solve2(sys.jacobian(x, y, c), {-r[0], -r[1]}, d)) return false;
    apply_step(x, c, d);
    if (std::abs(x[0]) > 2.0 || std::abs(x[1]) > 2.0 || std::abs(x[2]) > 2.0) c = rechart(x);
    if (std::abs(d[0]) + std::abs(d[1]) < tol) return true;
  }
  return false;
}

}  // namespace

std::vector<ProjPoint> track_preimages(const RationalMap& f, const ProjPoint& target) {
  if (f.dim() != 2) throw UnsupportedDimension("path tracking is implemented for P^2 only");
  const std::size_t j = target.pivot();
  Vec3 y1{target.coords()[0], target.coords()[1], target.coords()[2]};

  // Real rational start target near the real part.
  std::vector<Rational> start(3);
  for (std::size_t i = 0; i < 3; ++i) {
    start[i] = approximate_rational(y1[i].real(), Integer(64));
  }
  start[j] = 1;
  Vec3 y0;
  for (std::size_t i = 0; i < 3; ++i) y0[i] = Complex(start[i].get_d(), 0.0);

  const FiberSystem sys(f, j);
  const AlgebraicPointSet seeds = preimage_points(f, ProjPoint::exact(start));
  AlgebraicPointSet found;
  for (const SetPoint& seed : seeds.points) {
    if (seed.via_indeterminacy) continue;
    Vec3 x{seed.point.coords()[0], seed.point.coords()[1], seed.point.coords()[2]};
    std::size_t c = seed.point.pivot();
    double s = 0.0;
    double h = 0.05;
    bool ok = true;
    Vec3 dy;
    for (std::size_t i = 0; i < 3; ++i) dy[i] = y1[i] - y0[i];
    while (s < 1.0 && ok) {
      if (h < 1e-10) {
        ok = false;
        break;
      }
      const double step = std::min(h, 1.0 - s);
      Vec3 ys;
      for (std::size_t i = 0; i < 3; ++i) ys[i] = y0[i] + s * dy[i];
      // Euler predictor.
      const auto rhs = sys.dy_term(x, dy);
      std::array<Complex, 2> dx;
      Vec3 trial = x;
      std::size_t trial_chart = c;
      if (solve2(sys.jacobian(x, ys, c), {-rhs[0] * step, -rhs[1] * step}, dx)) {
        apply_step(trial, trial_chart, dx);
      }
      Vec3 yn;
      for (std::size_t i = 0; i < 3; ++i) yn[i] = y0[i] + (s + step) * dy[i];
      if (newton(sys, trial, trial_chart, yn, 6, 1e-10)) {
        x = trial;
        c = trial_chart;
        s += step;
        h = std::min(0.2, h * 1.5);
      } else {
        h *= 0.5;
      }
    }
    if (!ok) continue;
    newton(sys, x, c, y1, 8, 1e-15);
    const ProjPoint p(std::vector<Complex>(x.begin(), x.end()));
    const auto image = f.evaluate(p);
    if (!image || coordinate_gap(*image, target) > 1e-7) continue;
    found.insert({p, false});
  }
  std::vector<ProjPoint> out;
  for (const SetPoint& p : found.points) out.push_back(p.point);
  return out;
}

}  // namespace merotower
