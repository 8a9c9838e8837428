#include "common.hpp"

#include <random>

using namespace salem;
using namespace salem::test;

TEST_CASE("gaussian integers") {
  const NumberField& K = gaussian();
  CHECK(K.degree() == 2);
  CHECK(K.discriminant() == -4);
  CHECK(K.trace_matrix()(0, 0) == 2);
  CHECK(K.trace_matrix()(1, 1) == -2);
  CHECK(K.C0() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(K.C0_literal() == doctest::Approx(2.0).epsilon(1e-12));

  const FieldElement i = elem({0, 1});
  CHECK(elem_mul(K, i, i) == elem({-1, 0}));
  CHECK(elem_inverse(K, elem({2, 1})) == FieldElement{Rational(2, 5), Rational(-1, 5)});
}

TEST_CASE("norm and trace against closed forms") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> U(-20, 20);
  const NumberField Kg = gaussian();
  const NumberField Ks = field({-2, 0, 1});
  const NumberField Kc = field({-2, 0, 0, 1});
  for (int t = 0; t < 200; ++t) {
    const long a = U(rng), b = U(rng), c = U(rng);
    CHECK(elem_norm(Kg, elem({a, b})) == Rational(a * a + b * b));
    CHECK(elem_trace(Kg, elem({a, b})) == Rational(2 * a));
    CHECK(elem_norm(Ks, elem({a, b})) == Rational(a * a - 2 * b * b));
    // N(a + b 2^{1/3} + c 2^{2/3}) = a^3 + 2b^3 + 4c^3 - 6abc
    CHECK(elem_norm(Kc, elem({a, b, c})) == Rational(a * a * a + 2 * b * b * b + 4 * c * c * c - 6 * a * b * c));
  }
}

TEST_CASE("norm bounded by C_B^d |q|^d") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> U(-30, 30);
  for (const NumberField& K : {gaussian(), field({-2, 0, 1}), field({-2, 0, 0, 1})}) {
    const int d = K.degree();
    for (int t = 0; t < 300; ++t) {
      std::vector<long> c(static_cast<std::size_t>(d));
      for (auto& x : c) x = U(rng);
      const FieldElement q = FieldElement::from_ints(c);
      if (q.is_zero()) continue;
      const double n = std::abs(to_double(elem_norm(K, q)));
      CHECK(n <= std::pow(K.C_B() * euclid_len(q).value, d) * (1 + 1e-12));
    }
  }
}

TEST_CASE("orders that are not maximal are rejected") {
  CHECK_THROWS_AS(field({3, 0, 1}), DomainError);
  CHECK_THROWS_AS(field({-5, 0, 1}), DomainError);
  CHECK_NOTHROW(field({3, 0, 1}, true));
  CHECK_THROWS_AS(field({-1, 0, 1}), DomainError);
  CHECK_THROWS_AS(field({1, 0, 2}), DomainError);
}
