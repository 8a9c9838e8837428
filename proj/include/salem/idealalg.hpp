#pragma once

#include "salem/hnf.hpp"
#include "salem/nfcore.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace salem {

// Fractional ideal (1/den) * M with M the Z-module spanned by the rows of hnf.
class FracIdeal {
 public:
  FracIdeal() = default;
  explicit FracIdeal(RatLattice l) : lat_(std::move(l)) {}

  const Integer& den() const { return lat_.den; }
  const IntMat& hnf() const { return lat_.hnf; }
  const RatLattice& lattice() const { return lat_; }
  int dim() const { return lat_.dim(); }
  RatMat basis() const { return lat_.basis(); }
  bool is_integral() const { return lat_.den == 1; }
  bool contains(const FieldElement& x) const { return lat_.contains(x.coords); }
  bool contains(const FracIdeal& J) const { return lat_.contains(J.lat_); }
  std::string to_string() const;

  friend bool operator==(const FracIdeal& a, const FracIdeal& b) { return a.lat_ == b.lat_; }

 private:
  RatLattice lat_;
};

// Canonical order: norm first, then (den, hnf) lexicographic.
bool ideal_less(const FracIdeal& a, const FracIdeal& b);

struct PrimeIdealRecord {
  FracIdeal ideal;
  std::int64_t p = 0;
  int f = 0;  // residue degree
  int e = 0;  // ramification index
  std::int64_t norm = 0;
};

FracIdeal unit_ideal(const NumberField& K);
FracIdeal ideal_from_generators(const NumberField& K, const std::vector<FieldElement>& gens);
FracIdeal ideal_mul(const NumberField& K, const FracIdeal& I, const FracIdeal& J);
FracIdeal ideal_sum(const FracIdeal& I, const FracIdeal& J);
FracIdeal ideal_intersect(const FracIdeal& I, const FracIdeal& J);
FracIdeal ideal_inverse(const NumberField& K, const FracIdeal& I);
FracIdeal ideal_scale(const FracIdeal& I, const Rational& q);
Rational ideal_norm(const FracIdeal& I);
FracIdeal different_ideal(const NumberField& K);
FracIdeal trace_dual(const NumberField& K, const FracIdeal& I);
bool is_ok_module(const NumberField& K, const FracIdeal& I);

std::vector<PrimeIdealRecord> prime_ideals_above(const NumberField& K, std::int64_t p);
std::vector<PrimeIdealRecord> enumerate_Q(const NumberField& K, double M);
// Prime ideals of norm <= bound, in canonical order.
std::vector<PrimeIdealRecord> prime_ideals_up_to(const NumberField& K, std::int64_t bound);
// Every integral ideal of norm <= bound, in canonical order.
std::vector<FracIdeal> ideals_up_to(const NumberField& K, std::int64_t bound);
// a_n = number of integral ideals of norm n, for n = 0..bound.
std::vector<std::int64_t> ideal_norm_counts(const NumberField& K, std::int64_t bound);

PrimeIdealRecord pick_J(const NumberField& K, double M, double rho);

struct CrtSolution {
  FieldElement a;
  FracIdeal L;
};
// (a1 + D I1) cap (a2 + D I2) as a + L, or nothing when empty.
std::optional<CrtSolution> crt_intersect_cosets(const NumberField& K, const FracIdeal& D, const FracIdeal& I1,
                                                const FracIdeal& I2, const FieldElement& a1, const FieldElement& a2);

struct DivisorCount {
  int count = 0;
  double literal_bound = 0;    // log(2N(J)) / (d log M)
  double corrected_bound = 0;  // log N(J) / (d log M - log 2)
  bool literal_holds = true;
  bool corrected_holds = true;
};
DivisorCount divisor_count(const NumberField& K, const FracIdeal& J, double M);

}  // namespace salem
