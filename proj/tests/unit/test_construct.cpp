#include "common.hpp"

#include <cmath>

using namespace salem;
using namespace salem::test;

namespace {

const Construction& small() {
  static const Construction C(gaussian(), 2, 0, {3});
  return C;
}

// Midpoint rule on the torus; spectrally accurate for smooth periodic integrands.
// n = 2592 puts the first alias of an eta = 1/27 bump at |xi| eta = 96.
template <typename F>
std::vector<cplx> torus_transform(F&& f, const std::vector<Veci>& ss, int n = 2592) {
  std::vector<cplx> acc(ss.size(), 0);
  const double h = 1.0 / n;
  Vecd x(2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      x << (i + 0.5) * h, (j + 0.5) * h;
      const double v = f(x);
      if (v == 0) continue;
      for (std::size_t m = 0; m < ss.size(); ++m)
        acc[m] += v * std::polar(1.0, -2 * M_PI * (static_cast<double>(ss[m](0)) * x(0) + static_cast<double>(ss[m](1)) * x(1)));
    }
  }
  for (auto& a : acc) a *= h * h;
  return acc;
}

}  // namespace

TEST_CASE("level parameters for M = 3") {
  const Construction& C = small();
  const Level& L = C.level(1);
  CHECK(L.eta == doctest::Approx(1.0 / 27));
  CHECK(L.P == 1);
  REQUIRE(L.J);
  CHECK(L.J->norm == 5);
  CHECK(L.c_exact == Rational(1, 24));
  CHECK(L.sources.size() == 3);
  CHECK(C.Fk_hat(1, Veci::Zero(2)) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("vanishing annulus") {
  const Construction& C = small();
  const double R = C.level(1).annulus_radius;
  CHECK(R == doctest::Approx(1.5));
  for (std::int64_t a = -2; a <= 2; ++a)
    for (std::int64_t b = -2; b <= 2; ++b) {
      const double n = std::hypot(static_cast<double>(a), static_cast<double>(b));
      if (n > 0 && n <= R) CHECK(C.spectral_weight(1, veci({a, b})) == 0);
    }
}

TEST_CASE("Phi transform against torus quadrature") {
  const NumberField& K = gaussian();
  const FracIdeal I = ideal_from_generators(K, {elem({2, 1})});
  LatticeView inv(ideal_inverse(K, I));
  const double eta = 1.0 / 27;
  const std::vector<Veci> ss{veci({0, 0}), veci({1, 2}), veci({2, -1}), veci({3, 1}), veci({4, 2}), veci({10, 5})};
  auto q = torus_transform([&](const Vecd& x) { return Phi_eval(inv, eta, x); }, ss);
  for (std::size_t m = 0; m < ss.size(); ++m) CHECK(std::abs(q[m] - cplx(Phi_hat(K, I, eta, ss[m]), 0)) < 1e-9);
}

TEST_CASE("F_k transform against torus quadrature") {
  const Construction& C = small();
  const std::vector<Veci> ss{veci({0, 0}), veci({4, 2}), veci({2, -4}), veci({8, 4}), veci({1, 1}), veci({12, 6})};
  auto q = torus_transform([&](const Vecd& x) { return C.Fk_eval(1, x); }, ss);
  for (std::size_t m = 0; m < ss.size(); ++m) CHECK(std::abs(q[m] - cplx(C.Fk_hat(1, ss[m]), 0)) < 1e-9);
  auto quad = C.Fk_hat_quadrature(1, {veci({4, 2}), veci({8, 4}), veci({3, 3})});
  CHECK(std::abs(quad[0] - cplx(C.Fk_hat(1, veci({4, 2})), 0)) < 1e-9);
  CHECK(std::abs(quad[1] - cplx(C.Fk_hat(1, veci({8, 4})), 0)) < 1e-9);
  CHECK(std::abs(quad[2] - cplx(C.Fk_hat(1, veci({3, 3})), 0)) < 1e-9);
}

TEST_CASE("mass of mu_1 from the density and from the transform") {
  const Construction& C = small();
  const cplx q = torus_transform([&](const Vecd& x) { return C.mu_density(1, x); }, {Veci::Zero(2)})[0];
  CHECK(std::abs(q.real() - C.total_mass(1)) < 1e-9);
  CHECK(C.total_mass(0) == doctest::Approx(1).epsilon(1e-9));
  CHECK(C.ball_mass(1, Vecd::Constant(2, 0.25), 0.2) == doctest::Approx(C.total_mass(1)).epsilon(1e-9));
}

TEST_CASE("recursive and direct transforms agree") {
  const Construction& C = small();
  for (auto s : {veci({0, 0}), veci({5, 3}), veci({-7, 2}), veci({20, 11}), veci({40, -3})}) {
    MuHat m = C.mu_hat(1, s, 200);
    CHECK(m.certified);
    const cplx dir = C.mu_hat_direct(1, s);
    CHECK(std::abs(m.value - dir) <= m.tail_bound + 1e-9);
    CHECK(std::abs(m.value - dir) < 1e-3);
  }
}

TEST_CASE("two-level transforms") {
  const Construction C(gaussian(), 2, 0, {3, 9});
  for (auto s : {veci({1, 0}), veci({6, 3}), veci({-4, 9})}) {
    MuHat m = C.mu_lk_hat(2, 1, s, 200);
    const cplx dir = C.mu_lk_hat_direct(2, 1, s);
    CHECK(std::abs(m.value - dir) <= m.tail_bound + 1e-9);
  }
}

TEST_CASE("mu_2 vanishes identically for M = [8, 16]") {
  const Construction C(gaussian(), 2, 0, {8, 16});
  bool warned = false;
  for (auto& w : C.warnings()) warned = warned || w.find("vanishes identically") != std::string::npos;
  CHECK(warned);
  CHECK(C.atoms(2).empty());
  CHECK(std::abs(C.mu_hat_direct(2, veci({3, 1}))) == 0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Construction(gaussian(), 0.5, 0, {8}), DomainError);
  CHECK_THROWS_AS(Construction(gaussian(), 2, 2.5, {8}), DomainError);
  CHECK_THROWS_AS(Construction(gaussian(), 2, 0, {16, 8}), DomainError);
  auto g = growth_policy(8, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 8);
  CHECK(g[1] > g[0]);
  CHECK(g[2] > g[1]);
}
