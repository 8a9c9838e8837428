#include "common.hpp"

#include <random>

using namespace salem;
using namespace salem::test;

namespace {

// a_n = sum_{m | n} chi(m) for a real quadratic character chi.
std::int64_t dirichlet_count(std::int64_t n, int (*chi)(std::int64_t)) {
  std::int64_t s = 0;
  for (std::int64_t m = 1; m <= n; ++m)
    if (n % m == 0) s += chi(m);
  return s;
}
int chi4(std::int64_t m) { return m % 2 == 0 ? 0 : (m % 4 == 1 ? 1 : -1); }
int chi8(std::int64_t m) {
  const std::int64_t r = m % 8;
  return m % 2 == 0 ? 0 : (r == 1 || r == 7 ? 1 : -1);
}

}  // namespace

TEST_CASE("ideal counts match the Dedekind zeta coefficients") {
  const auto ag = ideal_norm_counts(gaussian(), 400);
  const auto as = ideal_norm_counts(field({-2, 0, 1}), 400);
  for (std::int64_t n = 1; n <= 400; ++n) {
    CHECK(ag[static_cast<std::size_t>(n)] == dirichlet_count(n, chi4));
    CHECK(as[static_cast<std::size_t>(n)] == dirichlet_count(n, chi8));
  }
  std::int64_t total = 0;
  for (std::int64_t n = 1; n <= 60; ++n) total += dirichlet_count(n, chi4);
  CHECK(static_cast<std::int64_t>(ideals_up_to(gaussian(), 60).size()) == total);
}

TEST_CASE("splitting of small primes in Q(i)") {
  const NumberField& K = gaussian();
  auto p2 = prime_ideals_above(K, 2);
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].e == 2);
  CHECK(p2[0].f == 1);
  auto p3 = prime_ideals_above(K, 3);
  REQUIRE(p3.size() == 1);
  CHECK(p3[0].f == 2);
  CHECK(p3[0].norm == 9);
  auto p5 = prime_ideals_above(K, 5);
  REQUIRE(p5.size() == 2);
  CHECK(p5[0].norm == 5);
  CHECK(!(p5[0].ideal == p5[1].ideal));
  CHECK(ideal_mul(K, p5[0].ideal, p5[1].ideal) == ideal_from_generators(K, {elem({5, 0})}));
}

TEST_CASE("different ideal has norm |disc|") {
  CHECK(ideal_norm(different_ideal(gaussian())) == 4);
  CHECK(ideal_norm(different_ideal(field({-2, 0, 1}))) == 8);
  CHECK(ideal_norm(different_ideal(field({-2, 0, 0, 1}))) == 108);
}

TEST_CASE("principal ideals") {
  const NumberField& K = gaussian();
  const FracIdeal I = ideal_from_generators(K, {elem({3, 4})});
  CHECK(ideal_norm(I) == 25);
  CHECK(I.contains(elem({3, 4})));
  CHECK(I.contains(elem({-4, 3})));
  CHECK(!I.contains(elem({1, 0})));
  const FracIdeal Iinv = ideal_inverse(K, I);
  CHECK(ideal_norm(Iinv) == Rational(1, 25));
  CHECK(Iinv.contains(FieldElement{Rational(3, 25), Rational(-4, 25)}));
  CHECK(ideal_mul(K, I, Iinv) == unit_ideal(K));
}

TEST_CASE("sum and intersection") {
  const NumberField& K = gaussian();
  const FracIdeal A = ideal_from_generators(K, {elem({2, 1})});
  const FracIdeal B = ideal_from_generators(K, {elem({2, -1})});
  CHECK(ideal_sum(A, B) == unit_ideal(K));
  CHECK(ideal_intersect(A, B) == ideal_from_generators(K, {elem({5, 0})}));
  CHECK(ideal_intersect(A, A) == A);
}

TEST_CASE("CRT on explicit cosets") {
  const NumberField& K = gaussian();
  const FracIdeal O = unit_ideal(K);
  const FracIdeal A = ideal_from_generators(K, {elem({2, 1})});
  const FracIdeal B = ideal_from_generators(K, {elem({2, -1})});
  auto s = crt_intersect_cosets(K, O, A, B, elem({1, 0}), elem({0, 0}));
  REQUIRE(s);
  CHECK(ideal_norm(s->L) == 25);
  CHECK(A.contains(s->a - elem({1, 0})));
  CHECK(B.contains(s->a));
  CHECK(!crt_intersect_cosets(K, O, A, A, elem({0, 0}), elem({1, 0})));
  auto same = crt_intersect_cosets(K, O, A, A, elem({0, 0}), elem({2, 1}));
  REQUIRE(same);
  CHECK(same->L == A);
}

TEST_CASE("Q(M) and J") {
  const NumberField& K = gaussian();
  auto Q3 = enumerate_Q(K, 3);
  // Norms in [4.5, 9]: the two primes above 5 and the inert prime 3.
  REQUIRE(Q3.size() == 3);
  CHECK(Q3[0].norm == 5);
  CHECK(Q3[1].norm == 5);
  CHECK(Q3[2].norm == 9);
  // Q(16): split primes with norm in [128, 256].
  auto Q16 = enumerate_Q(K, 16);
  CHECK(Q16.size() == 20);
  auto J = pick_J(K, 3, 0);
  CHECK(J.norm == 5);
}

TEST_CASE("divisor counts stay below the corrected bound") {
  const NumberField& K = gaussian();
  for (double M : {8.0, 16.0}) {
    for (auto& q : enumerate_Q(K, M)) {
      DivisorCount dc = divisor_count(K, q.ideal, M);
      CHECK(dc.count >= 1);
      CHECK(dc.corrected_holds);
    }
  }
}
