#pragma once

#include "salem/poly.hpp"
#include "salem/types.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace salem {

// Element of K in coordinates of the power basis {1, theta, ..., theta^{d-1}}.
struct FieldElement {
  RatVec coords;

  FieldElement() = default;
  explicit FieldElement(RatVec c) : coords(std::move(c)) {}
  FieldElement(std::initializer_list<Rational> c);
  static FieldElement from_ints(const std::vector<long>& c);
  static FieldElement zero(int d);
  static FieldElement one(int d);

  int dim() const { return static_cast<int>(coords.size()); }
  bool is_zero() const;
  const Rational& operator[](int i) const { return coords(i); }

  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.coords == b.coords; }
};

FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a);
FieldElement operator*(const Rational& c, const FieldElement& a);

class NumberField {
 public:
  // Builds K = Q[x]/(poly). The power basis must be an integral basis;
  // this is verified with Dedekind's criterion unless assume_maximal is set.
  static NumberField from_polynomial(const IntPoly& poly, bool assume_maximal = false);

  int degree() const { return d_; }
  const IntPoly& polynomial() const { return poly_; }
  const IntVec& product(int i, int j) const { return prod_[static_cast<std::size_t>(i * d_ + j)]; }
  const IntMat& trace_matrix() const { return T_; }
  const RatMat& trace_inverse() const { return Tinv_; }
  const Integer& discriminant() const { return disc_; }
  const std::vector<Complex>& roots() const { return roots_; }
  Complex embedding(int k, int i) const;  // tau_k(omega_i)
  double root_radius() const { return root_radius_; }

  double C_B() const { return cb_; }
  const Real& C_B_squared() const { return cb2_; }  // 50 digits, rounded up
  double trace_inverse_norm() const { return tinv_norm_; }
  // 2^{-1/d} C_B^{-1} |T^{-1}|^{-1} N(delta)^{-1/d}
  double C0() const { return c0_; }
  // Same expression with N(delta)^{+1/d}.
  double C0_literal() const { return c0_literal_; }
  bool maximality_assumed() const { return assumed_; }

  std::string describe() const;
  std::vector<long> poly_coeffs() const;

 private:
  int d_ = 0;
  IntPoly poly_;
  std::vector<IntVec> prod_;
  IntMat T_;
  RatMat Tinv_;
  Integer disc_;
  std::vector<Complex> roots_;
  double root_radius_ = 0;
  double cb_ = 0;
  Real cb2_;
  double tinv_norm_ = 0;
  double c0_ = 0;
  double c0_literal_ = 0;
  bool assumed_ = false;
};

RatMat mult_matrix(const NumberField& K, const FieldElement& a);
FieldElement elem_mul(const NumberField& K, const FieldElement& a, const FieldElement& b);
FieldElement elem_inverse(const NumberField& K, const FieldElement& a);
Rational elem_norm(const NumberField& K, const FieldElement& a);
Rational elem_trace(const NumberField& K, const FieldElement& a);
Complex elem_embed(const NumberField& K, const FieldElement& a, int k);
FieldElement elem_pow_theta(const NumberField& K, int e);
FieldElement poly_at_theta(const NumberField& K, const IntPoly& g);

struct EuclidLength {
  double value;
  Rational squared;
};
EuclidLength euclid_len(const FieldElement& a);

}  // namespace salem
