#include "common.hpp"

#include <cmath>
#include <random>

using namespace salem;
using namespace salem::test;

TEST_CASE("profile integrates to one") {
  const BumpFamily& b = bumps(2);
  const double m = integrate([&](double t) { return b.phi1().eval(t); }, -1, 1, 512);
  CHECK(m == doctest::Approx(1).epsilon(1e-12));
  CHECK(b.phi1().hat(0) == doctest::Approx(1).epsilon(1e-12));
  CHECK(b.phi1().eval(1.0) == 0);
  CHECK(b.phi1().eval(-1.0) == 0);
  CHECK(b.phi1().eval(0) > 0);
  const double m0 = integrate([&](double t) { return b.phi0_1d(t); }, 0.125, 0.375, 512);
  CHECK(m0 == doctest::Approx(1).epsilon(1e-12));
  CHECK(b.phi0_1d(0.1) == 0);
}

TEST_CASE("cached transform agrees with plain quadrature") {
  const BumpFamily& b = bumps(2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 200);
  for (int t = 0; t < 100; ++t) {
    const double xi = U(rng);
    // Independent oracle: trapezoid rule, spectrally accurate for a flat-ended bump.
    const int n = 40000;
    double s = 0;
    for (int i = 1; i < n; ++i) {
      const double x = -1 + 2.0 * i / n;
      s += b.phi1().eval(x) * std::cos(2 * M_PI * x * xi);
    }
    const double oracle = s * 2.0 / n;
    CHECK(std::abs(b.phi1().hat(xi) - oracle) < 1e-9);
    CHECK(std::abs(b.phi1().hat(xi) - b.phi1().hat_direct(xi)) < 1e-10);
  }
}

TEST_CASE("far-field bound dominates") {
  const Profile1D& p = bumps(2).phi1();
  // Composite Gauss-Legendre with panels much shorter than a period.
  auto oracle = [&](double xi) {
    const int panels = 64 + static_cast<int>(8 * xi);
    double s = 0;
    for (int j = 0; j < panels; ++j) {
      const double a = -1 + 2.0 * j / panels, b = a + 2.0 / panels;
      s += integrate([&](double x) { return p.eval(x) * std::cos(2 * M_PI * x * xi); }, a, b, 16);
    }
    return s;
  };
  // Below 1e-14 both sides are at the roundoff floor of an O(1) integral.
  for (double xi : {2.0, 5.0, 10.0, 20.0, 40.0, 80.0}) CHECK(std::abs(oracle(xi)) <= p.far_bound(xi) + 1e-14);
  for (double xi : {0.5, 3.0, 40.0, 250.0}) CHECK(std::abs(p.hat(xi)) <= p.envelope(xi) * (1 + 1e-12) + 1e-14);
}

TEST_CASE("psi is at least one on the unit cube") {
  const BumpFamily& b = bumps(2);
  for (double t = -1; t <= 1; t += 0.01) CHECK(b.psi_1d(t) >= 1 - 1e-12);
  CHECK(b.psi_1d(2.0) == 0);
}

TEST_CASE("c_lower witnesses the lower bound on the square transform") {
  const BumpFamily& b = bumps(2);
  const double c = b.c_lower();
  CHECK(c > 0);
  CHECK(c < 1);
  for (double x = -c; x <= c; x += c / 20) {
    for (double y = -c; y <= c; y += c / 20) {
      Vecd xi(2);
      xi << x, y;
      CHECK(b.phi_sq_hat(xi) >= c * (1 - 1e-9));
    }
  }
}

TEST_CASE("phi0 transform at zero and its phase") {
  const BumpFamily& b = bumps(2);
  const cplx h = b.phi0_hat(Vecd::Zero(2));
  CHECK(std::abs(h - cplx(1, 0)) < 1e-12);
  // phi0 is centred at 1/4: phase e(-xi/4) per axis.
  const cplx g = b.phi0_hat_1d(2.0);
  CHECK(std::abs(g - b.phi1().hat(0.25) * std::polar(1.0, -M_PI)) < 1e-12);
}
