#include "salem/nfcore.hpp"

#include "salem/hnf.hpp"

#include <cmath>
#include <sstream>

namespace salem {

FieldElement::FieldElement(std::initializer_list<Rational> c) : coords(static_cast<Eigen::Index>(c.size())) {
  Eigen::Index i = 0;
  for (auto& x : c) coords(i++) = x;
}

FieldElement FieldElement::from_ints(const std::vector<long>& c) {
  RatVec v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = Rational(c[i]);
  return FieldElement(v);
}

FieldElement FieldElement::zero(int d) {
  RatVec v(d);
  for (int i = 0; i < d; ++i) v(i) = 0;
  return FieldElement(v);
}

FieldElement FieldElement::one(int d) {
  FieldElement e = zero(d);
  e.coords(0) = 1;
  return e;
}

bool FieldElement::is_zero() const {
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    if (coords(i) != 0) return false;
  return true;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) { return FieldElement(RatVec(a.coords + b.coords)); }
FieldElement operator-(const FieldElement& a, const FieldElement& b) { return FieldElement(RatVec(a.coords - b.coords)); }
FieldElement operator-(const FieldElement& a) { return FieldElement(RatVec(-a.coords)); }
FieldElement operator*(const Rational& c, const FieldElement& a) {
  RatVec v = a.coords;
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= c;
  return FieldElement(v);
}

NumberField NumberField::from_polynomial(const IntPoly& poly_in, bool assume_maximal) {
  IntPoly poly = poly_in;
  const int d = salem::degree(poly);
  if (d < 1) throw DomainError("defining polynomial must have degree >= 1");
  poly.resize(static_cast<std::size_t>(d + 1));
  if (!is_monic(poly)) throw DomainError("defining polynomial must be monic");

  NumberField K;
  K.d_ = d;
  K.poly_ = poly;
  K.assumed_ = assume_maximal;

  RootIsolation iso = isolate_roots(poly);
  K.roots_ = iso.roots;
  K.root_radius_ = iso.max_radius;
  if (!is_irreducible(poly, K.roots_)) throw DomainError("defining polynomial is reducible over Q");

  K.disc_ = salem::discriminant(poly);
  if (!assume_maximal) {
    for (auto& [p, e] : factor_integer(K.disc_)) {
      if (e < 2) continue;
      if (p > Integer(INT32_MAX)) throw DomainError("discriminant prime too large for the maximality test");
      if (!dedekind_maximal_at(poly, p.convert_to<std::int64_t>())) {
        std::ostringstream os;
        os << "power basis is not maximal at p=" << p << "; pass the maximality override to assert it";
        throw DomainError(os.str());
      }
    }
  }

  // theta^k reduced mod f for k <= 2d-2
  std::vector<IntVec> pw;
  for (int k = 0; k <= 2 * d - 2; ++k) {
    IntPoly mono(static_cast<std::size_t>(k + 1), Integer(0));
    mono[static_cast<std::size_t>(k)] = 1;
    IntPoly r = poly_rem_monic(mono, poly);
    IntVec v = IntVec::Zero(d);
    for (int i = 0; i < d && i < static_cast<int>(r.size()); ++i) v(i) = r[static_cast<std::size_t>(i)];
    pw.push_back(v);
  }
  K.prod_.resize(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) K.prod_[static_cast<std::size_t>(i * d + j)] = pw[static_cast<std::size_t>(i + j)];

  K.T_ = IntMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Rational t = elem_trace(K, FieldElement(to_rational(K.product(i, j))));
      if (mp::denominator(t) != 1) throw Error("non-integral trace on an integral basis");
      K.T_(i, j) = mp::numerator(t);
    }
  K.Tinv_ = inverse_exact(to_rational(K.T_));

  const Real tol("1e-20");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex s(0);
      for (int k = 0; k < d; ++k) s += K.embedding(k, i) * K.embedding(k, j);
      if (abs(s - Complex(Real(K.T_(i, j)))) > tol) throw Error("trace matrix disagrees with the embeddings");
    }

  Real cb2 = 0;
  for (int k = 0; k < d; ++k) {
    Real s = 0;
    for (int i = 0; i < d; ++i) {
      Real a = abs(K.embedding(k, i));
      s += a * a;
    }
    cb2 = std::max(cb2, s);
  }
  K.cb2_ = cb2 * (1 + Real("1e-40"));
  K.cb_ = sqrt(cb2).convert_to<double>();

  Matd tinv(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) tinv(i, j) = to_double(K.Tinv_(i, j));
  Eigen::JacobiSVD<Matd> svd(tinv);
  K.tinv_norm_ = svd.singularValues()(0);
  const double nd = std::abs(to_double(K.disc_));
  const double base = std::pow(2.0, -1.0 / d) / K.cb_ / K.tinv_norm_;
  K.c0_ = base * std::pow(nd, -1.0 / d);
  K.c0_literal_ = base * std::pow(nd, 1.0 / d);
  return K;
}

Complex NumberField::embedding(int k, int i) const {
  Complex r(1);
  for (int e = 0; e < i; ++e) r *= roots_[static_cast<std::size_t>(k)];
  return r;
}

std::string NumberField::describe() const {
  std::ostringstream os;
  bool first = true;
  for (int k = d_; k >= 0; --k) {
    const Integer& c = poly_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    Integer a = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (a != 1 || k == 0) os << a;
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

std::vector<long> NumberField::poly_coeffs() const {
  std::vector<long> r;
  for (auto& c : poly_) r.push_back(c.convert_to<long>());
  return r;
}

RatMat mult_matrix(const NumberField& K, const FieldElement& a) {
  const int d = K.degree();
  RatMat m = RatMat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      if (a.coords(i) == 0) continue;
      const IntVec& c = K.product(i, j);
      for (int k = 0; k < d; ++k)
        if (c(k) != 0) m(k, j) += a.coords(i) * Rational(c(k));
    }
  return m;
}

FieldElement elem_mul(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  const int d = K.degree();
  RatVec r(d);
  for (int k = 0; k < d; ++k) r(k) = 0;
  for (int i = 0; i < d; ++i) {
    if (a.coords(i) == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b.coords(j) == 0) continue;
      Rational ab = a.coords(i) * b.coords(j);
      const IntVec& c = K.product(i, j);
      for (int k = 0; k < d; ++k)
        if (c(k) != 0) r(k) += ab * Rational(c(k));
    }
  }
  return FieldElement(r);
}

FieldElement elem_inverse(const NumberField& K, const FieldElement& a) {
  if (a.is_zero()) throw DomainError("inverse of zero");
  RatMat inv = inverse_exact(mult_matrix(K, a));
  return FieldElement(RatVec(inv.col(0)));
}

Rational elem_norm(const NumberField& K, const FieldElement& a) { return det_exact(mult_matrix(K, a)); }

Rational elem_trace(const NumberField& K, const FieldElement& a) {
  RatMat m = mult_matrix(K, a);
  Rational t = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

Complex elem_embed(const NumberField& K, const FieldElement& a, int k) {
  Complex s(0);
  for (int i = 0; i < K.degree(); ++i) s += Complex(to_real(a.coords(i))) * K.embedding(k, i);
  return s;
}

FieldElement elem_pow_theta(const NumberField& K, int e) {
  const int d = K.degree();
  FieldElement r = FieldElement::one(d);
  FieldElement th = FieldElement::zero(d);
  if (d == 1) th.coords(0) = -Rational(K.polynomial()[0]);
  else th.coords(1) = 1;
  for (int i = 0; i < e; ++i) r = elem_mul(K, r, th);
  return r;
}

FieldElement poly_at_theta(const NumberField& K, const IntPoly& g) {
  const int d = K.degree();
  FieldElement r = FieldElement::zero(d);
  for (int k = salem::degree(g); k >= 0; --k) {
    r = elem_mul(K, r, elem_pow_theta(K, 1));
    r.coords(0) += Rational(g[static_cast<std::size_t>(k)]);
  }
  return r;
}

EuclidLength euclid_len(const FieldElement& a) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.coords.size(); ++i) s += a.coords(i) * a.coords(i);
  return {std::sqrt(to_double(s)), s};
}

}  // namespace salem
