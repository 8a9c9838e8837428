#pragma once

#include "salem/idealalg.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace salem {

inline constexpr std::size_t kDefaultPointCap = 1'000'000;

// A fractional ideal viewed as a lattice in R^d.
struct LatticeView {
  FracIdeal ideal;
  Matd basis;  // rows, float mirror of hnf/den
  Rational covolume;
  Lattice64 fast;
  double covering_bound = 0;  // 1/2 sqrt(sum (H_jj/den)^2)

  LatticeView() = default;
  explicit LatticeView(const FracIdeal& I);
  int dim() const { return ideal.dim(); }
};

// Integer numerator bounds of a box: lo <= y/den < hi (or <= hi when closed).
struct BoxBounds {
  std::vector<std::int64_t> lo, hi;
};
BoxBounds box_bounds(const Lattice64& L, const Vecd& lo, const Vecd& hi, bool closed);

// Calls f(const std::int64_t* y) for each lattice point y/den inside the bounds.
template <typename F>
std::size_t for_each_point(const Lattice64& L, const BoxBounds& b, std::size_t cap, F&& f) {
  const int n = L.n;
  std::int64_t y[16], c[16];
  std::size_t count = 0;
  auto floor_div = [](std::int64_t a, std::int64_t m) { return a >= 0 ? a / m : -((-a + m - 1) / m); };
  auto rec = [&](auto&& self, int j) -> void {
    std::int64_t partial = 0;
    for (int i = 0; i < j; ++i) partial += c[i] * L.at(i, j);
    const std::int64_t h = L.at(j, j);
    const std::int64_t cmin = -floor_div(-(b.lo[static_cast<std::size_t>(j)] - partial), h);
    const std::int64_t cmax = floor_div(b.hi[static_cast<std::size_t>(j)] - partial, h);
    for (std::int64_t cj = cmin; cj <= cmax; ++cj) {
      c[j] = cj;
      y[j] = partial + cj * h;
      if (j + 1 == n) {
        if (++count > cap) throw CapExceeded("lattice enumeration exceeded the point cap");
        f(static_cast<const std::int64_t*>(y));
      } else {
        self(self, j + 1);
      }
    }
  };
  rec(rec, 0);
  return count;
}

// Expected number of points of the lattice in the box.
double expected_points(const LatticeView& v, const Vecd& lo, const Vecd& hi);

// Points of the module I in [lo, hi).
std::vector<FieldElement> points_in_box(const FracIdeal& I, const Vecd& lo, const Vecd& hi,
                                        std::size_t cap = kDefaultPointCap);
std::vector<Vecd> points_in_box(const LatticeView& v, const Vecd& lo, const Vecd& hi, bool closed,
                                std::size_t cap = kDefaultPointCap);

// R(I) = I^{-1} cap [0,1)^d.
std::vector<FieldElement> representatives(const NumberField& K, const FracIdeal& I);

double dist_to_lattice(const LatticeView& inv, const Vecd& x);
double dist_to_lattice(const NumberField& K, const Vecd& x, const FracIdeal& I);

// Minimum |r1 - r2| over distinct r1 in v1, r2 in v2 with r1 in [lo,hi) and
// r2 in the same box widened by `margin`. Returns +inf if no pair exists.
double min_separation(const LatticeView& v1, const LatticeView& v2, const Vecd& lo, const Vecd& hi, double margin = 0,
                      std::size_t cap = kDefaultPointCap);

// T(delta^{-1} I), an integer sublattice of Z^d.
RatLattice spectral_lattice(const NumberField& K, const FracIdeal& I);

struct ExpSum {
  cplx value;
  bool indicator;  // exact: T^{-1}s in delta^{-1} I
  std::int64_t norm;
};

// Precomputed sums over R(I): phases reduced exactly mod den.
class ExpSumTable {
 public:
  ExpSumTable(const NumberField& K, const FracIdeal& I);
  ExpSum operator()(const std::vector<std::int64_t>& s) const;
  std::int64_t norm() const { return norm_; }

 private:
  int d_;
  std::int64_t den_;
  std::int64_t norm_;
  std::vector<std::int64_t> reps_;  // numerators, row-major
  std::vector<Real> cos_, sin_;
  RatLattice spec_;
  RatMat tinv_;
  FracIdeal target_;  // delta^{-1} I
};

ExpSum exp_sum(const NumberField& K, const FracIdeal& I, const std::vector<std::int64_t>& s);

struct Witness {
  std::int64_t norm;
  double distance;
  double bound;
  std::string ideal;
};

struct EMembership {
  bool member = false;
  std::vector<Witness> witnesses;
};

// Finite proxy for x in E(K,B,tau): at least min_witnesses integral ideals with
// min_norm <= N(I) <= norm_bound and dist(x, I^{-1}) <= N(I)^{-(tau+1)/d}.
class EMembershipTester {
 public:
  EMembershipTester(const NumberField& K, double tau, std::int64_t norm_bound, int min_witnesses = 3,
                    std::int64_t min_norm = 2);
  EMembership operator()(const Vecd& x) const;

 private:
  int d_;
  double tau_;
  int min_witnesses_;
  std::vector<std::int64_t> norms_;
  std::vector<LatticeView> inv_;
  std::vector<std::string> names_;
};

EMembership e_membership(const NumberField& K, const Vecd& x, double tau, std::int64_t norm_bound,
                         int min_witnesses = 3, std::int64_t min_norm = 2);

std::string witnesses_csv(const EMembership& m);

}  // namespace salem
