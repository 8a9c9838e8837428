#pragma once

#include "salem/types.hpp"

#include <cstdint>
#include <vector>

namespace salem {

// Integer polynomial, coefficients from the constant term upward.
using IntPoly = std::vector<Integer>;

int degree(const IntPoly& f);
IntPoly derivative(const IntPoly& f);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
bool is_monic(const IntPoly& f);
// Remainder of a by a monic b over Z.
IntPoly poly_rem_monic(const IntPoly& a, const IntPoly& b);

Integer discriminant(const IntPoly& f);

// Complex roots to about 50 digits. Each root is certified by the disk
// |z - root| <= deg * |f/f'|, and the disks must be pairwise disjoint.
struct RootIsolation {
  std::vector<Complex> roots;
  double max_radius = 0;
};
RootIsolation isolate_roots(const IntPoly& f);

// Exact irreducibility over Q, using the isolated roots to propose factors.
bool is_irreducible(const IntPoly& f, const std::vector<Complex>& roots);

std::vector<std::pair<Integer, int>> factor_integer(Integer n);
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);

namespace fp {

// Polynomial over F_p, coefficients in [0, p), no trailing zeros.
using Poly = std::vector<std::int64_t>;

struct Factor {
  Poly g;  // monic irreducible
  int e;
};

Poly reduce(const IntPoly& f, std::int64_t p);
IntPoly lift(const Poly& f);
Poly mul(const Poly& a, const Poly& b, std::int64_t p);
Poly rem(const Poly& a, const Poly& b, std::int64_t p);
Poly quo(const Poly& a, const Poly& b, std::int64_t p);
Poly gcd(Poly a, Poly b, std::int64_t p);
int deg(const Poly& a);

// Complete factorization of a monic polynomial; deterministic for a fixed seed.
std::vector<Factor> factor(const Poly& f, std::int64_t p, std::uint64_t seed = 0x5eed);

}  // namespace fp

// Dedekind's criterion: Z[x]/(f) is maximal at p.
bool dedekind_maximal_at(const IntPoly& f, std::int64_t p);

}  // namespace salem
