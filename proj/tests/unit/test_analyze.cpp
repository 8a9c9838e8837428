#include "common.hpp"

#include <cmath>
#include <random>

using namespace salem;
using namespace salem::test;

namespace {

const Construction& small() {
  static const Construction C(gaussian(), 2, 0, {3});
  return C;
}

template <typename F>
double torus_integral(F&& f, int n) {
  double acc = 0;
  const double h = 1.0 / n;
  Vecd x(2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      x << (i + 0.5) * h, (j + 0.5) * h;
      acc += f(x);
    }
  return acc * h * h;
}

const Source& j_of(const Level& L) {
  for (auto& s : L.sources)
    if (s.is_J) return s;
  throw std::runtime_error("no J");
}

}  // namespace

TEST_CASE("formula values") {
  CHECK(pstar(1, 1, 2) == doctest::Approx(6));
  CHECK(p_fail(2, 0, 2, 2) == doctest::Approx(4));
  auto [t1, r1] = map_ab_to_taurho(1, 0.5, 2);
  CHECK(t1 == doctest::Approx(3));
  CHECK(r1 == doctest::Approx(1));
  CHECK(p_fail(t1, r1, 2, 2) == doctest::Approx(10));
  CHECK(pstar(1, 0.5, 2) == doctest::Approx(10));
  auto [t2, r2] = map_ab_to_taurho(0.6, 1, 2);
  CHECK(t2 == doctest::Approx(3));
  CHECK(r2 == doctest::Approx(-1.6));
  CHECK(p_fail(t2, r2, 2, 2) == doctest::Approx(7.6));
  CHECK(pstar(0.6, 1, 2) == doctest::Approx(7.6));
  CHECK_THROWS_AS(map_ab_to_taurho(0.4, 1, 2), DomainError);
  CHECK_THROWS_AS(p_fail(1, 0, 2, 2), DomainError);
  CHECK(check_formulas(2, 200, 7).pass);
}

TEST_CASE("exponent fit on synthetic data") {
  std::vector<std::pair<double, double>> s;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0, 0.01);
  for (int i = 0; i < 40; ++i) {
    const double x = std::log(10.0) * 3.0 * i / 39;
    s.emplace_back(x, -1.5 * x + 0.7 + noise(rng));
  }
  auto f = fit_exponent(s, -1.5, 0.15, true);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(0.01));
  CHECK(f.intercept == doctest::Approx(0.7).epsilon(0.05));
  CHECK(f.decades == doctest::Approx(3));
  CHECK(f.pass);
  CHECK_FALSE(fit_exponent(s, -1.8, 0.15, true).pass);
  CHECK(fit_exponent(s, -1.6, 0.15, false).pass);
  std::vector<std::pair<double, double>> few(s.begin(), s.begin() + 10);
  CHECK_FALSE(fit_exponent(few, -1.5, 0.15, true).pass);
}

TEST_CASE("algebra checkers on Q(i)") {
  const NumberField& K = gaussian();
  CHECK(check_exp_sum(K, 30, 6).pass);
  CHECK(check_ideal_laws(K, 20, 50, 1).pass);
  CHECK(check_crt(K, 20, 5, 1).pass);
  CHECK(check_separation(K, 20).pass);
  CHECK(landau_check(K, {8, 16}).pass);
}

TEST_CASE("cover sums diverge below the critical exponent") {
  const NumberField& K = gaussian();
  const double s0 = 2.0 * 2 / 3;
  const double below = hausdorff_cover_sum(K, s0 - 0.3, 2, 1, 10000) / hausdorff_cover_sum(K, s0 - 0.3, 2, 1, 1000);
  const double above = hausdorff_cover_sum(K, s0 + 0.3, 2, 1, 10000) / hausdorff_cover_sum(K, s0 + 0.3, 2, 1, 1000);
  CHECK(below > 2);
  CHECK(above < 1.5);
}

TEST_CASE("tensor transform of Phi_J mu_1 against quadrature") {
  const Construction& C = small();
  const Level& L = C.level(1);
  const Source& J = j_of(L);
  JMeasure jm(C, 1);
  REQUIRE(jm.terms() > 0);
  for (auto xi : {Vecd(Vecd::Zero(2)), Vecd((Vecd(2) << 3.5, -1.25).finished()),
                  Vecd((Vecd(2) << 20.0, 7.0).finished())}) {
    double re = 0, im = 0;
    re = torus_integral([&](const Vecd& x) {
      return Phi_eval(J.inv, L.eta, x) * C.mu_density(1, x) * std::cos(2 * M_PI * xi.dot(x));
    }, 2160);
    im = torus_integral([&](const Vecd& x) {
      return -Phi_eval(J.inv, L.eta, x) * C.mu_density(1, x) * std::sin(2 * M_PI * xi.dot(x));
    }, 2160);
    CHECK(std::abs(jm.hat(xi) - cplx(re, im)) < 1e-7 * (1 + std::abs(cplx(re, im))));
  }
  const double m2 = torus_integral([&](const Vecd& x) {
    const double f = Phi_eval(J.inv, L.eta, x);
    return f * f * C.mu_density(1, x);
  }, 2160);
  CHECK(jm.moment(2) == doctest::Approx(m2).epsilon(1e-7).scale(0));
}

TEST_CASE("restriction ratio at p = q = 2 matches Plancherel") {
  const Construction& C = small();
  const Level& L = C.level(1);
  const Source& J = j_of(L);
  auto r = restriction_ratios(C, 1, {2}, 2, 0, 800);
  REQUIRE(r.size() == 1);
  const double l2 = torus_integral([&](const Vecd& x) {
    const double f = Phi_eval(J.inv, L.eta, x) * C.mu_density(1, x);
    return f * f;
  }, 2160);
  const double m2 = torus_integral([&](const Vecd& x) {
    const double f = Phi_eval(J.inv, L.eta, x);
    return f * f * C.mu_density(1, x);
  }, 2160);
  CHECK(r[0].numerator * r[0].numerator == doctest::Approx(l2).epsilon(1e-6).scale(0));
  CHECK(r[0].denominator * r[0].denominator == doctest::Approx(m2).epsilon(1e-7).scale(0));
  CHECK(r[0].ratio == doctest::Approx(std::sqrt(l2 / m2)).epsilon(1e-6).scale(0));
}

TEST_CASE("frequency set S(J_k) lies in the dual of J^{-1}") {
  const Construction& C = small();
  const Source& J = j_of(C.level(1));
  auto S = S_Jk(C, 1);
  REQUIRE_FALSE(S.empty());
  const RatMat B = J.inv.ideal.basis();
  for (auto& s : S) {
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
      Rational acc = 0;
      for (Eigen::Index c = 0; c < B.cols(); ++c) acc += B(r, c) * Rational(s(c));
      CHECK(mp::denominator(acc) == 1);
    }
  }
}
