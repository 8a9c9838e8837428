#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace salem {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Real = mp::cpp_bin_float_50;
using Complex = mp::cpp_complex_50;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using IntVec = Vec<Integer>;
using IntMat = Mat<Integer>;
using RatVec = Vec<Rational>;
using RatMat = Mat<Rational>;
using Vecd = Eigen::VectorXd;
using Matd = Eigen::MatrixXd;
using Veci = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using cplx = std::complex<double>;

// Error taxonomy; the CLI maps these to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct CapExceeded : Error {
  using Error::Error;
};
struct CheckFailure : Error {
  using Error::Error;
};

inline Integer floor_div(const Rational& q) {
  Integer n = mp::numerator(q), d = mp::denominator(q);
  Integer r = n / d;
  if (r * d > n) r -= 1;
  return r;
}

inline Integer ceil_div(const Rational& q) { return -floor_div(-q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const Integer& z) { return z.convert_to<double>(); }
inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline Real to_real(const Rational& q) {
  return Real(Real(mp::numerator(q)) / Real(mp::denominator(q)));
}

// Exact rational value of a finite double.
inline Rational exact_rational(double x) {
  int e = 0;
  double m = std::frexp(x, &e);
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  Rational r{Integer(mant)};
  Integer p = 1;
  p <<= static_cast<unsigned>(e < 0 ? -e : e);
  return e < 0 ? Rational(r / Rational(p)) : Rational(r * Rational(p));
}

inline std::int64_t to_i64(const Integer& z) {
  if (z > Integer(INT64_MAX) || z < Integer(INT64_MIN)) throw CapExceeded("integer exceeds 64-bit range");
  return z.convert_to<std::int64_t>();
}

inline Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }
inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Integer gcd(const Integer& a, const Integer& b) { return mp::gcd(a, b); }

inline RatVec to_rational(const IntVec& v) {
  RatVec r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = Rational(v(i));
  return r;
}

inline RatMat to_rational(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

template <typename Derived>
Vecd to_double_vec(const Eigen::MatrixBase<Derived>& v) {
  Vecd r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = to_double(v(i));
  return r;
}

}  // namespace salem
