#include "common.hpp"

#include <cmath>
#include <random>

using namespace salem;
using namespace salem::test;

namespace {

// s in the dual of I^{-1}: s . b integral for every basis row b.
bool dual_indicator(const FracIdeal& Iinv, const std::vector<std::int64_t>& s) {
  const RatMat B = Iinv.basis();
  for (Eigen::Index r = 0; r < B.rows(); ++r) {
    Rational acc = 0;
    for (Eigen::Index c = 0; c < B.cols(); ++c) acc += B(r, c) * Rational(s[static_cast<std::size_t>(c)]);
    if (mp::denominator(acc) != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("representatives count N(I)") {
  const NumberField& K = gaussian();
  for (auto& I : ideals_up_to(K, 40)) {
    CHECK(static_cast<Rational>(static_cast<long long>(representatives(K, I).size())) == ideal_norm(I));
  }
}

TEST_CASE("exponential sums against the dual-lattice indicator") {
  for (const NumberField& K : {gaussian(), field({-2, 0, 1})}) {
    for (auto& I : ideals_up_to(K, 30)) {
      const FracIdeal Iinv = ideal_inverse(K, I);
      ExpSumTable tab(K, I);
      for (std::int64_t a = -7; a <= 7; ++a) {
        for (std::int64_t b = -7; b <= 7; ++b) {
          const std::vector<std::int64_t> s{a, b};
          ExpSum e = tab(s);
          const bool ind = dual_indicator(Iinv, s);
          CHECK(e.indicator == ind);
          CHECK(std::abs(e.value - cplx(ind ? static_cast<double>(tab.norm()) : 0.0, 0)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("points in a box against brute force") {
  const NumberField& K = gaussian();
  const FracIdeal I = ideal_from_generators(K, {elem({3, 2})});
  LatticeView v(ideal_inverse(K, I));
  const Vecd lo = Vecd::Constant(2, -0.3), hi = Vecd::Constant(2, 0.55);
  auto pts = points_in_box(v, lo, hi, false);
  // I^{-1} = (3 - 2i)/13 Z[i]: brute force over Z[i] multiples.
  std::size_t brute = 0;
  for (int a = -40; a <= 40; ++a) {
    for (int b = -40; b <= 40; ++b) {
      const double x = (3.0 * a + 2.0 * b) / 13, y = (3.0 * b - 2.0 * a) / 13;
      if (x >= -0.3 && x < 0.55 && y >= -0.3 && y < 0.55) ++brute;
    }
  }
  CHECK(pts.size() == brute);
  CHECK(std::abs(static_cast<double>(pts.size()) - expected_points(v, lo, hi)) < 8);
}

TEST_CASE("distance to a lattice against brute force") {
  const NumberField& K = gaussian();
  const FracIdeal I = ideal_from_generators(K, {elem({4, 1})});
  LatticeView v(ideal_inverse(K, I));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 50; ++t) {
    Vecd x(2);
    x << U(rng), U(rng);
    double best = INFINITY;
    for (auto& p : points_in_box(v, Vecd(x.array() - 1), Vecd(x.array() + 1), true)) best = std::min(best, (p - x).norm());
    CHECK(dist_to_lattice(v, x) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("E membership") {
  const NumberField& K = gaussian();
  EMembershipTester T(K, 2, 200, 3, 2);
  // Integer points lie in every I^{-1}.
  EMembership m = T(Vecd::Zero(2));
  CHECK(m.member);
  CHECK(m.witnesses.size() >= 3);
  Vecd x(2);
  x << 0.3141592653589793, 0.2718281828459045;
  CHECK(!T(x).member);
  CHECK_THROWS_AS(EMembershipTester(K, 0.5, 100), DomainError);
}
