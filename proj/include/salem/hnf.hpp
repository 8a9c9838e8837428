#pragma once

#include "salem/types.hpp"

#include <compare>
#include <cstdint>
#include <vector>

namespace salem {

struct ExtGcd {
  Integer g, x, y;  // x*a + y*b = g >= 0
};
ExtGcd ext_gcd(const Integer& a, const Integer& b);

Integer det_bareiss(IntMat a);
RatMat inverse_exact(const RatMat& a);
Rational det_exact(const RatMat& a);

// Row-style Hermite normal form of a full-column-rank integer matrix:
// upper triangular, positive diagonal, 0 <= H(i,j) < H(j,j) for i < j.
IntMat hermite_form(const IntMat& a);

// Same, also returning unimodular U with U*a = [H; 0].
struct HermiteWithTransform {
  IntMat H;
  IntMat U;
};
HermiteWithTransform hermite_form_with_transform(const IntMat& a);

// Full-rank lattice (1/den) * rowspace(hnf) in Q^n, canonical.
struct RatLattice {
  Integer den{1};
  IntMat hnf;

  int dim() const { return static_cast<int>(hnf.cols()); }
  RatMat basis() const;
  Rational covolume() const;
  bool contains(const RatVec& x) const;
  // Integer coordinates of x in the basis rows, if x is in the lattice.
  bool coords(const RatVec& x, IntVec& c) const;
  bool contains(const RatLattice& other) const;

  friend bool operator==(const RatLattice& a, const RatLattice& b);
};

std::strong_ordering lex_compare(const RatLattice& a, const RatLattice& b);

RatLattice lattice_from_rows(const RatMat& rows);
RatLattice lattice_from_rows(const IntMat& rows, const Integer& den = 1);
RatLattice lattice_dual(const RatLattice& l);
RatLattice lattice_sum(const RatLattice& a, const RatLattice& b);
RatLattice lattice_intersect(const RatLattice& a, const RatLattice& b);

// 64-bit mirror of a lattice for hot loops. Points are numerator vectors
// n with x = n / den.
struct Lattice64 {
  int n = 0;
  std::int64_t den = 1;
  std::vector<std::int64_t> H;  // row-major n x n, upper triangular

  explicit Lattice64(const RatLattice& l);
  Lattice64() = default;
  std::int64_t at(int i, int j) const { return H[static_cast<std::size_t>(i) * n + j]; }
  // Membership of the numerator vector y (the point y/den).
  bool contains_numerators(const std::int64_t* y) const;
};

}  // namespace salem
