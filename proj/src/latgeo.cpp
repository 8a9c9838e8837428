#include "salem/latgeo.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace salem {

LatticeView::LatticeView(const FracIdeal& I) : ideal(I), covolume(ideal_norm(I)), fast(I.lattice()) {
  const int d = I.dim();
  basis.resize(d, d);
  RatMat b = I.basis();
  double s = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) basis(i, j) = to_double(b(i, j));
    s += basis(i, i) * basis(i, i);
  }
  covering_bound = 0.5 * std::sqrt(s);
}

BoxBounds box_bounds(const Lattice64& L, const Vecd& lo, const Vecd& hi, bool closed) {
  BoxBounds b;
  const Rational den{Integer(L.den)};
  for (int j = 0; j < L.n; ++j) {
    if (!(lo(j) <= hi(j))) throw DomainError("box with lo > hi");
    Integer l = ceil_div(exact_rational(lo(j)) * den);
    Rational h = exact_rational(hi(j)) * den;
    Integer u = closed ? floor_div(h) : Integer(ceil_div(h) - 1);
    b.lo.push_back(to_i64(l));
    b.hi.push_back(to_i64(u));
  }
  return b;
}

double expected_points(const LatticeView& v, const Vecd& lo, const Vecd& hi) {
  double vol = 1;
  for (int j = 0; j < v.dim(); ++j) vol *= std::max(0.0, hi(j) - lo(j));
  return vol / to_double(v.covolume);
}

std::vector<Vecd> points_in_box(const LatticeView& v, const Vecd& lo, const Vecd& hi, bool closed, std::size_t cap) {
  if (expected_points(v, lo, hi) > 2.0 * static_cast<double>(cap) + 16)
    throw CapExceeded("box would contain more lattice points than the cap allows");
  std::vector<Vecd> out;
  const int d = v.dim();
  const double inv = 1.0 / static_cast<double>(v.fast.den);
  for_each_point(v.fast, box_bounds(v.fast, lo, hi, closed), cap, [&](const std::int64_t* y) {
    Vecd p(d);
    for (int j = 0; j < d; ++j) p(j) = static_cast<double>(y[j]) * inv;
    out.push_back(p);
  });
  return out;
}

std::vector<FieldElement> points_in_box(const FracIdeal& I, const Vecd& lo, const Vecd& hi, std::size_t cap) {
  LatticeView v(I);
  if (expected_points(v, lo, hi) > 2.0 * static_cast<double>(cap) + 16)
    throw CapExceeded("box would contain more lattice points than the cap allows");
  std::vector<FieldElement> out;
  const int d = v.dim();
  for_each_point(v.fast, box_bounds(v.fast, lo, hi, false), cap, [&](const std::int64_t* y) {
    RatVec r(d);
    for (int j = 0; j < d; ++j) r(j) = Rational(Integer(y[j]), I.den());
    out.emplace_back(r);
  });
  return out;
}

std::vector<FieldElement> representatives(const NumberField& K, const FracIdeal& I) {
  if (!I.is_integral()) throw DomainError("representatives needs an integral ideal");
  const int d = K.degree();
  return points_in_box(ideal_inverse(K, I), Vecd::Zero(d), Vecd::Ones(d));
}

double dist_to_lattice(const LatticeView& inv, const Vecd& x) {
  const int d = inv.dim();
  const double R = inv.covering_bound * (1 + 1e-12) + 1e-15;
  Vecd lo = x.array() - R, hi = x.array() + R;
  double best2 = std::numeric_limits<double>::infinity();
  const double s = 1.0 / static_cast<double>(inv.fast.den);
  for_each_point(inv.fast, box_bounds(inv.fast, lo, hi, true), kDefaultPointCap, [&](const std::int64_t* y) {
    double acc = 0;
    for (int j = 0; j < d; ++j) {
      double t = static_cast<double>(y[j]) * s - x(j);
      acc += t * t;
    }
    best2 = std::min(best2, acc);
  });
  return std::sqrt(best2);
}

double dist_to_lattice(const NumberField& K, const Vecd& x, const FracIdeal& I) {
  return dist_to_lattice(LatticeView(ideal_inverse(K, I)), x);
}

double min_separation(const LatticeView& v1, const LatticeView& v2, const Vecd& lo, const Vecd& hi, double margin,
                      std::size_t cap) {
  auto p1 = points_in_box(v1, lo, hi, false, cap);
  Vecd lo2 = lo.array() - margin, hi2 = hi.array() + margin;
  auto p2 = points_in_box(v2, lo2, hi2, false, cap);
  double best2 = std::numeric_limits<double>::infinity();
  for (auto& a : p1)
    for (auto& b : p2) {
      double t = (a - b).squaredNorm();
      if (t > 0) best2 = std::min(best2, t);
    }
  return std::sqrt(best2);
}

RatLattice spectral_lattice(const NumberField& K, const FracIdeal& I) {
  FracIdeal target = ideal_mul(K, ideal_inverse(K, different_ideal(K)), I);
  RatMat rows = target.basis() * to_rational(K.trace_matrix());
  RatLattice l = lattice_from_rows(rows);
  if (l.den != 1) throw Error("T(delta^{-1} I) is not integral");
  return l;
}

ExpSumTable::ExpSumTable(const NumberField& K, const FracIdeal& I)
    : d_(K.degree()), den_(1), norm_(0), spec_(spectral_lattice(K, I)), tinv_(K.trace_inverse()),
      target_(ideal_mul(K, ideal_inverse(K, different_ideal(K)), I)) {
  if (!I.is_integral()) throw DomainError("exp_sum needs an integral ideal");
  norm_ = to_i64(mp::numerator(ideal_norm(I)));
  LatticeView inv(ideal_inverse(K, I));
  den_ = inv.fast.den;
  for_each_point(inv.fast, box_bounds(inv.fast, Vecd::Zero(d_), Vecd::Ones(d_), false), kDefaultPointCap,
                 [&](const std::int64_t* y) { reps_.insert(reps_.end(), y, y + d_); });
  if (static_cast<std::int64_t>(reps_.size()) != norm_ * d_) throw Error("|R(I)| differs from N(I)");
  const Real two_pi = 2 * boost::math::constants::pi<Real>();
  cos_.resize(static_cast<std::size_t>(den_));
  sin_.resize(static_cast<std::size_t>(den_));
  for (std::int64_t k = 0; k < den_; ++k) {
    Real a = two_pi * k / den_;
    cos_[static_cast<std::size_t>(k)] = cos(a);
    sin_[static_cast<std::size_t>(k)] = sin(a);
  }
}

ExpSum ExpSumTable::operator()(const std::vector<std::int64_t>& s) const {
  Real re = 0, im = 0;
  const std::size_t n = reps_.size() / static_cast<std::size_t>(d_);
  for (std::size_t r = 0; r < n; ++r) {
    __int128 acc = 0;
    for (int j = 0; j < d_; ++j) acc += static_cast<__int128>(reps_[r * static_cast<std::size_t>(d_) + j]) * s[static_cast<std::size_t>(j)];
    std::int64_t k = static_cast<std::int64_t>(acc % den_);
    if (k < 0) k += den_;
    re += cos_[static_cast<std::size_t>(k)];
    im -= sin_[static_cast<std::size_t>(k)];
  }
  RatVec sv(d_);
  for (int j = 0; j < d_; ++j) sv(j) = Rational(s[static_cast<std::size_t>(j)]);
  RatVec x = tinv_ * sv;
  bool ind = target_.lattice().contains(x);
  return {cplx(re.convert_to<double>(), im.convert_to<double>()), ind, norm_};
}

ExpSum exp_sum(const NumberField& K, const FracIdeal& I, const std::vector<std::int64_t>& s) {
  return ExpSumTable(K, I)(s);
}

EMembershipTester::EMembershipTester(const NumberField& K, double tau, std::int64_t norm_bound, int min_witnesses,
                                     std::int64_t min_norm)
    : d_(K.degree()), tau_(tau), min_witnesses_(min_witnesses) {
  if (!(tau > 1)) throw DomainError("e_membership needs tau > 1");
  for (auto& I : ideals_up_to(K, norm_bound)) {
    std::int64_t n = to_i64(mp::numerator(ideal_norm(I)));
    if (n < min_norm) continue;
    norms_.push_back(n);
    inv_.emplace_back(ideal_inverse(K, I));
    names_.push_back(I.to_string());
  }
}

EMembership EMembershipTester::operator()(const Vecd& x) const {
  EMembership out;
  for (std::size_t i = 0; i < inv_.size(); ++i) {
    const double bound = std::pow(static_cast<double>(norms_[i]), -(tau_ + 1) / d_);
    const LatticeView& v = inv_[i];
    Vecd lo = x.array() - bound, hi = x.array() + bound;
    double best2 = std::numeric_limits<double>::infinity();
    const double s = 1.0 / static_cast<double>(v.fast.den);
    for_each_point(v.fast, box_bounds(v.fast, lo, hi, true), kDefaultPointCap, [&](const std::int64_t* y) {
      double acc = 0;
      for (int j = 0; j < d_; ++j) {
        double t = static_cast<double>(y[j]) * s - x(j);
        acc += t * t;
      }
      best2 = std::min(best2, acc);
    });
    const double dist = std::sqrt(best2);
    if (dist <= bound) out.witnesses.push_back({norms_[i], dist, bound, names_[i]});
  }
  out.member = static_cast<int>(out.witnesses.size()) >= min_witnesses_;
  return out;
}

EMembership e_membership(const NumberField& K, const Vecd& x, double tau, std::int64_t norm_bound, int min_witnesses,
                         std::int64_t min_norm) {
  return EMembershipTester(K, tau, norm_bound, min_witnesses, min_norm)(x);
}

std::string witnesses_csv(const EMembership& m) {
  std::ostringstream os;
  os.precision(17);
  os << "norm,distance,bound\n";
  for (auto& w : m.witnesses) os << w.norm << "," << w.distance << "," << w.bound << "\n";
  return os.str();
}

}  // namespace salem
