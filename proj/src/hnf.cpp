#include "salem/hnf.hpp"

#include <utility>

namespace salem {

ExtGcd ext_gcd(const Integer& a, const Integer& b) {
  Integer r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    Integer t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (r0 < 0) {
    r0 = -r0;
    x0 = -x0;
    y0 = -y0;
  }
  return {r0, x0, y0};
}

Integer det_bareiss(IntMat a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw DomainError("det of non-square matrix");
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      a.row(k).swap(a.row(piv));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign > 0 ? Integer(a(n - 1, n - 1)) : Integer(-a(n - 1, n - 1));
}

RatMat inverse_exact(const RatMat& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw DomainError("inverse of non-square matrix");
  RatMat a = m;
  RatMat inv = RatMat::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) throw DomainError("singular matrix");
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      inv.row(k).swap(inv.row(piv));
    }
    Rational p = a(k, k);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(k, j) /= p;
      inv(k, j) /= p;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k);
      for (Eigen::Index j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Rational det_exact(const RatMat& m) {
  const Eigen::Index n = m.rows();
  RatMat a = m;
  Rational det = 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (Eigen::Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

namespace {

void combine_rows(IntMat& a, Eigen::Index r, Eigen::Index i, Eigen::Index j, IntMat* u) {
  const Integer x = a(r, j), y = a(i, j);
  ExtGcd e = ext_gcd(x, y);
  const Integer xr = x / e.g, yr = y / e.g;
  auto apply = [&](IntMat& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Integer top = e.x * m(r, c) + e.y * m(i, c);
      Integer bot = -yr * m(r, c) + xr * m(i, c);
      m(r, c) = std::move(top);
      m(i, c) = std::move(bot);
    }
  };
  apply(a);
  if (u) apply(*u);
}

IntMat hermite_impl(IntMat a, IntMat* u) {
  const Eigen::Index m = a.rows(), n = a.cols();
  if (m < n) throw DomainError("lattice generators do not span full rank");
  if (u) *u = IntMat::Identity(m, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < m; ++i)
      if (a(i, j) != 0) combine_rows(a, j, i, j, u);
    if (a(j, j) == 0) throw DomainError("lattice generators do not span full rank");
    if (a(j, j) < 0) {
      a.row(j) = -a.row(j);
      if (u) u->row(j) = -u->row(j);
    }
    for (Eigen::Index i = 0; i < j; ++i) {
      Integer q = floor_div(Rational(a(i, j), a(j, j)));
      if (q == 0) continue;
      for (Eigen::Index c = 0; c < n; ++c) a(i, c) -= q * a(j, c);
      if (u)
        for (Eigen::Index c = 0; c < m; ++c) (*u)(i, c) -= q * (*u)(j, c);
    }
  }
  return a;
}

}  // namespace

IntMat hermite_form(const IntMat& a) {
  IntMat h = hermite_impl(a, nullptr);
  return h.topRows(a.cols());
}

HermiteWithTransform hermite_form_with_transform(const IntMat& a) {
  IntMat u;
  IntMat h = hermite_impl(a, &u);
  return {h, u};
}

RatMat RatLattice::basis() const {
  RatMat b = to_rational(hnf);
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) /= Rational(den);
  return b;
}

Rational RatLattice::covolume() const {
  Integer det = 1;
  for (Eigen::Index i = 0; i < hnf.rows(); ++i) det *= hnf(i, i);
  Integer dn = 1;
  for (int i = 0; i < dim(); ++i) dn *= den;
  return Rational(det, dn);
}

bool RatLattice::coords(const RatVec& x, IntVec& c) const {
  const int n = dim();
  c.resize(n);
  IntVec y(n);
  for (int j = 0; j < n; ++j) {
    Rational v = x(j) * Rational(den);
    if (mp::denominator(v) != 1) return false;
    y(j) = mp::numerator(v);
  }
  for (int j = 0; j < n; ++j) {
    Integer acc = y(j);
    for (int i = 0; i < j; ++i) acc -= c(i) * hnf(i, j);
    if (acc % hnf(j, j) != 0) return false;
    c(j) = acc / hnf(j, j);
  }
  return true;
}

bool RatLattice::contains(const RatVec& x) const {
  IntVec c;
  return coords(x, c);
}

bool RatLattice::contains(const RatLattice& other) const {
  RatMat b = other.basis();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    if (!contains(RatVec(b.row(i).transpose()))) return false;
  return true;
}

bool operator==(const RatLattice& a, const RatLattice& b) { return a.den == b.den && a.hnf == b.hnf; }

std::strong_ordering lex_compare(const RatLattice& a, const RatLattice& b) {
  if (a.den != b.den) return a.den < b.den ? std::strong_ordering::less : std::strong_ordering::greater;
  for (Eigen::Index i = 0; i < a.hnf.rows(); ++i)
    for (Eigen::Index j = 0; j < a.hnf.cols(); ++j)
      if (a.hnf(i, j) != b.hnf(i, j))
        return a.hnf(i, j) < b.hnf(i, j) ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

RatLattice lattice_from_rows(const IntMat& rows, const Integer& den) {
  IntMat h = hermite_form(rows);
  Integer g = den;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = i; j < h.cols(); ++j)
      if (h(i, j) != 0) g = gcd(g, h(i, j));
  RatLattice l;
  l.den = den / g;
  l.hnf = h;
  if (g != 1)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j) l.hnf(i, j) /= g;
  return l;
}

RatLattice lattice_from_rows(const RatMat& rows) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < rows.cols(); ++j) l = mp::lcm(l, Integer(mp::denominator(rows(i, j))));
  IntMat a(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < rows.cols(); ++j) a(i, j) = mp::numerator(rows(i, j) * Rational(l));
  return lattice_from_rows(a, l);
}

RatLattice lattice_dual(const RatLattice& l) {
  RatMat inv = inverse_exact(l.basis());
  return lattice_from_rows(RatMat(inv.transpose()));
}

RatLattice lattice_sum(const RatLattice& a, const RatLattice& b) {
  RatMat ba = a.basis(), bb = b.basis();
  RatMat s(ba.rows() + bb.rows(), ba.cols());
  s << ba, bb;
  return lattice_from_rows(s);
}

RatLattice lattice_intersect(const RatLattice& a, const RatLattice& b) {
  return lattice_dual(lattice_sum(lattice_dual(a), lattice_dual(b)));
}

Lattice64::Lattice64(const RatLattice& l) : n(l.dim()), den(to_i64(l.den)), H(static_cast<std::size_t>(n) * n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H[static_cast<std::size_t>(i) * n + j] = to_i64(l.hnf(i, j));
}

bool Lattice64::contains_numerators(const std::int64_t* y) const {
  std::int64_t c[16];
  if (n > 16) throw DomainError("dimension above 16 unsupported in fast lattice");
  for (int j = 0; j < n; ++j) {
    __int128 acc = y[j];
    for (int i = 0; i < j; ++i) acc -= static_cast<__int128>(c[i]) * at(i, j);
    const std::int64_t h = at(j, j);
    if (acc % h != 0) return false;
    c[j] = static_cast<std::int64_t>(acc / h);
  }
  return true;
}

}  // namespace salem
